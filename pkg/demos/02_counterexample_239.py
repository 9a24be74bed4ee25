# %% [markdown]
# D = 239, p = 79: no constant congruence.
#
# h(-239) = 15 sits between 79/6 and 79 and 79 is inert in Q(sqrt(-239)),
# yet the supersingular value j = 64 (= -15 mod 79) is only a simple root
# of H_239 mod 79.  Squared divisibility fails and the U(79) series is not
# a polynomial in j.

# %%
from cmcongruence.classfield import class_number
from cmcongruence.congruence import certify_congruence, multiplicity_report
from cmcongruence.hilbert import hilbert_class_poly_with_residual
from cmcongruence.supersingular import ss_polynomials

H, residual, bits = hilbert_class_poly_with_residual(239)
print(f"h(-239) = {class_number(239)}, degree {H.degree}, residual {residual:.2e} at {bits} bits")
print("constant term has", len(str(abs(H.coeffs[0]))), "digits")

# %%
S = ss_polynomials(79)
print("S_79 =", S.s)
for root, mult in multiplicity_report(239, 79).records:
    print(f"  j = {root}: multiplicity {mult}")

# %%
cert = certify_congruence(239, 79)
print("certified:", cert.certified)
print("U(79) series mod 79:", cert.series.coefficients(0, 9))
print("first exponent where no polynomial in j fits:", cert.mismatch_exponent)
