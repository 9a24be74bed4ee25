# %% [markdown]
# j(pz) = j^p + p delta_p(j) mod p^2, with delta_p = N_p / S~_p.

# %%
from cmcongruence.koike import delta_p, verify_koike_corollary

for p in (2, 3, 5, 7, 11, 13, 17, 29):
    r = delta_p(p)
    print(f"p={p:2d}  deg N_p = {r.numerator.degree:2d}  denominator {r.denominator}  gcd {r.common_factor}")

# %%
print(verify_koike_corollary([7, -3, 0, 1], 13, 100))
