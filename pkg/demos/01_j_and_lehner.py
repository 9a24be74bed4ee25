# %% [markdown]
# The q-expansion of j and the congruences it hides.
#
# j = E4^3 / Delta, built from two Kronecker-substitution products and one
# Newton inversion.

# %%
import numpy as np

from cmcongruence.qseries import apply_up, delta_series, j_series, lehner_violations

j = j_series(200)
print("first coefficients:", j.coefficients(-1, 5))

# %% [markdown]
# Lehner: c(2n) is divisible by 2^11, c(3n) by 3^5, c(5n) by 25, and so on.
# Look at the 2-adic valuations directly.

# %%
def v2(n):
    return (n & -n).bit_length() - 1 if n else np.inf

vals = np.array([v2(j[2 * n]) for n in range(1, 60)])
print("min 2-adic valuation of c(2n), n < 60:", vals.min())
print("violations for n <= 100:", lehner_violations(100))

# %% [markdown]
# (j - 744) | U(13) reduces to -Delta mod 13.

# %%
lhs = apply_up(j_series(13 * 20, 13) - 744, 13)
rhs = -delta_series(20, 13)
print(lhs.coefficients(1, 10))
print(rhs.coefficients(1, 10))
print("agree through q^20:", lhs.agrees_with(rhs, 20))
