# %% [markdown]
# Sweeping D < 239 over every odd p with p/6 < h(-D) < p, p non-split.
#
# Two readings of the divisibility hypothesis are compared: the full
# supersingular polynomial S_p (which includes the factors at j = 0 and
# 1728) and the reduced S~_p.

# %%
from collections import Counter

from cmcongruence.congruence import certify_congruence, multiplicity_report, uniform_range_check

tested, failures = uniform_range_check(239)
print(f"{tested} pairs, {len(failures)} fail the S_p^2 reading")
print(Counter(f.p for f in failures).most_common(8))

# %% [markdown]
# Almost every failure is a pair where j = 0 or 1728 is supersingular and
# H_D has that root only once.  One pair fails even for S~_p:

# %%
hard = [f for f in failures if "no certificate" in f.reason]
print(hard)
for root, mult in multiplicity_report(119, 59).records:
    print(f"  j = {root}: multiplicity {mult}")
print("U(59) series:", certify_congruence(119, 59).series.coefficients(0, 9))
