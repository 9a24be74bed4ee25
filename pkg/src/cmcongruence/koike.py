"""The rational function delta_p(x) with j(pz) = j^p + p delta_p(j) (mod p^2).

Writing d = (j(q^p) - j^p) / p mod p, the product S~_p(j) d has no poles
away from the cusp, so it is a polynomial N_p(j) and delta_p = N_p / S~_p.
N_p is recovered from the q-expansion by principal-part elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .congruence import express_in_j
from .poly import IntPolynomial, ModPolynomial
from .qseries import QSeries, apply_vp, j_series, poly_in_j
from .supersingular import InternalInconsistency, ss_polynomials

__all__ = ["RationalJFunction", "koike_series", "delta_p", "verify_koike_corollary", "poly_at_series"]


@dataclass(frozen=True)
class RationalJFunction:
    """numerator / denominator over F_p, both polynomials in j."""

    p: int
    numerator: ModPolynomial
    denominator: ModPolynomial
    common_factor: ModPolynomial

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "numerator": [str(c) for c in self.numerator.coeffs],
            "denominator": [str(c) for c in self.denominator.coeffs],
            "gcd": [str(c) for c in self.common_factor.coeffs],
        }


def poly_at_series(F, X: QSeries) -> QSeries:
    """F(X) by Horner's rule, in the ring of X."""
    coeffs = F.coeffs if hasattr(F, "coeffs") else tuple(F)
    acc = QSeries.constant(coeffs[-1] if coeffs else 0, X.order - min(0, X.val) * len(coeffs), X.modulus)
    for c in reversed(coeffs[:-1]):
        acc = acc * X + c
    return acc


def koike_series(p: int, N: int) -> QSeries:
    """(j(q^p) - j^p) / p mod p through q^N."""
    m = p * p
    j = j_series(N + p, m)
    jp = (j ** p).truncate(N)
    vj = apply_vp(j_series(N // p + 1, m), p).truncate(N)
    diff = (vj - jp).lift()
    out = [0] * (diff.order - diff.val + 1) if not diff.is_zero() else []
    for n in range(diff.val, diff.order + 1):
        c = diff[n]
        if c % p:
            raise InternalInconsistency(f"j(q^{p}) - j^{p} has a unit coefficient at q^{n}")
        out[n - diff.val] = (c // p) % p
    return QSeries(out, diff.val, diff.order, p)


def delta_p(p: int, N: int | None = None) -> RationalJFunction:
    """delta_p = N_p / S~_p, with N_p read off from S~_p(j) times the series above."""
    S = ss_polynomials(p).s_tilde
    s = S.degree
    if N is None:
        N = 4 * p + 40
    d = koike_series(p, N + s)
    prod = (poly_in_j(S, N + s + p, p) * d).truncate(N)
    num = express_in_j(prod)
    if num.degree > p + s:
        raise InternalInconsistency(f"deg N_{p} = {num.degree} above p + deg S~_{p}")
    g = num.gcd(S) if s > 0 and not num.is_zero() else ModPolynomial.one(p)
    return RationalJFunction(p, num, S, g)


def verify_koike_corollary(F, p: int, N: int = 100) -> bool:
    """S~(j) F(j(pz)) == S~(j) F(j^p) + p F'(j^p) N_p(j)  (mod p^2) through q^N.

    Both sides are multiplied through by S~_p(j) so no series inversion is
    needed.  F has integer coefficients.
    """
    F = F if isinstance(F, IntPolynomial) else IntPolynomial(F)
    m = p * p
    rat = delta_p(p)
    S = rat.denominator.lift()
    Np = rat.numerator.lift()
    deg = max(F.degree, 1)
    work = N + p * deg + S.degree + Np.degree + 2
    j = j_series(work, m)
    jp = j ** p
    vj = apply_vp(j_series(work // p + 1, m), p)
    Sj = poly_in_j(S, work, m)
    lhs = Sj * poly_at_series(F, vj)
    rhs = Sj * poly_at_series(F, jp) + (poly_at_series(F.derivative(), jp) * poly_in_j(Np, work, m)).scale(p)
    if min(lhs.order, rhs.order) < N:
        raise InternalInconsistency("working order too small for the comparison")
    return lhs.agrees_with(rhs, N)
