# %% [markdown]
# The trace-zero lattice of a maximal order and its theta series.
#
# At p = 13 there is one maximal order up to conjugacy, so the theta
# coefficients are pure Eisenstein: a_R(D) = 2 H_13(D).  At p = 11, 17, 19,
# 23 a cusp part appears; its growth is measured against D.

# %%
from fractions import Fraction

import numpy as np

from cmcongruence.arith import kronecker
from cmcongruence.classfield import eisenstein_hp, fundamental_discriminants
from cmcongruence.quaternion import embedding_numbers, growth_slope, setup, theta_for

S = setup(13)
print("algebra (i^2, j^2) =", (-S.algebra.a, -S.algebra.b), " units:", S.w_R)
print("Gram of L:\n", np.array([[int(c) for c in r] for r in S.lattice.gram]))

# %%
theta = theta_for(13, 200)
rows = [(D, theta[D], 2 * eisenstein_hp(D, 13)) for D in fundamental_discriminants(3, 60) if kronecker(-D, 13) != 1]
for D, a, e in rows:
    print(f"D={D:3d}  a_R={a:3d}  2 H_13={e}")

# %%
emb = embedding_numbers(theta)
print({m: h for m, h in emb.items() if h and m < 60})

# %%
for p in (11, 17, 19, 23):
    slope, n = growth_slope(p, 2000)
    print(f"p={p}: log|c_L(D)| ~ {slope:.3f} log D over {n} discriminants")
