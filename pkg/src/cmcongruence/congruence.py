"""Certify congruences H_D(j) | U(p) = G_p(j) (mod p) and survey them.

A congruence is certified when S~_p^2 divides H_D mod p.  The polynomial
G_p is then recovered from the U(p) series by eliminating its principal
part with powers of j.  A polynomial in j is pinned down by its principal
part and constant term, so matching those is already exact; the further
coefficients compared are a guard against implementation bugs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import math

from .arith import Fp2Elem, kronecker
from .classfield import class_number, fundamental_discriminants
from .hilbert import hilbert_class_poly
from .poly import IntPolynomial, ModPolynomial
from .qseries import QSeries, apply_up, apply_vp, hecke_t0, j_series, poly_in_j
from .supersingular import InternalInconsistency, ss_polynomials

__all__ = [
    "NotPolynomial",
    "InsufficientOrder",
    "MultiplicityReport",
    "CongruenceCertificate",
    "SurveyRow",
    "SurveyTable",
    "DEFAULT_VERIFY",
    "multiplicity_report",
    "divisibility_check",
    "up_reduction",
    "express_in_j",
    "certify_congruence",
    "omega_members",
    "survey_omega",
    "scan_surjectivity",
    "decile_densities",
    "hecke_identity",
    "uniform_range_check",
]

DEFAULT_VERIFY = 50
MIN_REMAINING = 10


class NotPolynomial(ValueError):
    """The series is not a polynomial in j through its known order."""

    def __init__(self, exponent: int, partial):
        super().__init__(f"series differs from every polynomial in j at q^{exponent}")
        self.exponent = exponent
        self.partial = partial


class InsufficientOrder(ValueError):
    pass


# ---------------------------------------------------------------------------
# multiplicities and divisibility


def _root_multiplicity(f: ModPolynomial, root: Fp2Elem) -> int:
    if root.in_base_field():
        return f.multiplicity(ModPolynomial([-root.a, 1], f.p))
    return f.root_multiplicity_fp2(root)


@dataclass(frozen=True)
class MultiplicityReport:
    D: int
    p: int
    h: int
    records: tuple[tuple[Fp2Elem, int], ...]

    @property
    def total(self) -> int:
        return sum(m for _, m in self.records)

    def all_at_least(self, t: int) -> bool:
        return all(m >= t for _, m in self.records)

    def multiplicity(self, j0) -> int:
        for r, m in self.records:
            if r == j0:
                return m
        raise KeyError(f"{j0} is not supersingular mod {self.p}")

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "p": self.p,
            "h": self.h,
            "roots": [{"j": [r.a, r.b], "multiplicity": m} for r, m in self.records],
            "total": self.total,
        }


def multiplicity_report(D: int, p: int) -> MultiplicityReport:
    """Multiplicity of each supersingular j0 as a root of H_D mod p."""
    Hp = hilbert_class_poly(D).mod(p)
    data = ss_polynomials(p)
    records = tuple((r, _root_multiplicity(Hp, r)) for r in data.roots)
    return MultiplicityReport(D, p, Hp.degree, records)


def divisibility_check(D: int, p: int, t: int, tilde: bool = False) -> bool:
    """Does S_p^t (S~_p^t with ``tilde``) divide H_D in F_p[x]?"""
    data = ss_polynomials(p)
    S = data.s_tilde if tilde else data.s
    f = hilbert_class_poly(D).mod(p)
    for _ in range(t):
        if S.degree <= 0:
            return True
        f, r = divmod(f, S)
        if not r.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# U(p) and recognition


def up_reduction(D: int, p: int, N: int) -> QSeries:
    """H_D(j) | U(p) mod p through q^N."""
    return apply_up(poly_in_j(hilbert_class_poly(D), N * p, p), p)


def express_in_j(s: QSeries):
    """Polynomial G with G(j) = s through the order of ``s``.

    Greedy principal-part elimination.  Returns a ModPolynomial (series mod
    m) or IntPolynomial (series over Z).  Raises NotPolynomial carrying the
    first exponent where no polynomial matches.
    """
    m = s.modulus
    deg = max(0, -s.val) if not s.is_zero() else 0
    if s.order < MIN_REMAINING:
        raise InsufficientOrder(f"only {max(0, s.order)} coefficients beyond q^0")
    coeffs = [0] * (deg + 1)
    rem = s
    if deg:
        j = j_series(s.order + deg, m)
        powers = [None, j]
        for _ in range(deg - 1):
            powers.append(powers[-1] * j)
        for n in range(deg, 0, -1):
            c = rem[-n]
            if m:
                c %= m
            if c:
                coeffs[n] = c
                rem = rem - powers[n].scale(c).truncate(s.order)
    coeffs[0] = rem[0]
    rem = rem - coeffs[0]
    make = (lambda cs: ModPolynomial(cs, m)) if m else IntPolynomial
    if not rem.is_zero():
        raise NotPolynomial(rem.val, make(coeffs))
    return make(coeffs)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class CongruenceCertificate:
    D: int
    p: int
    divides: bool
    G: ModPolynomial | None
    verified_through: int
    is_constant: bool
    c0: int | None
    series: QSeries
    observed: ModPolynomial | None = None
    mismatch_exponent: int | None = None

    @property
    def certified(self) -> bool:
        return self.divides and self.G is not None

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "p": self.p,
            "divides": self.divides,
            "G": [str(c) for c in self.G.coeffs] if self.G is not None else None,
            "constant": self.is_constant,
            "c0": self.c0,
            "verified_through": self.verified_through,
            "series_prefix": [str(c) for c in self.series.coefficients(self.series.val, min(self.series.order, self.series.val + 9))],
            "series_valuation": self.series.val,
            "observed_G": [str(c) for c in self.observed.coeffs] if self.observed is not None else None,
            "mismatch_exponent": self.mismatch_exponent,
        }


def _constant_term(D: int) -> int:
    """c_D(0), the constant term of H_D(j(z)) over Z."""
    return poly_in_j(hilbert_class_poly(D), 0)[0]


def _principal_multiples_vanish(D: int, p: int) -> bool:
    """c_D(-pn) = 0 mod p for all n > 0."""
    H = hilbert_class_poly(D)
    f = poly_in_j(H, 0, p)
    return all(f[-p * n] == 0 for n in range(1, H.degree // p + 1))


def certify_congruence(D: int, p: int, N: int = DEFAULT_VERIFY) -> CongruenceCertificate:
    """Run the S~_p^2 divisibility test and recover G_p from the U(p) series."""
    h = class_number(D)
    divides = divisibility_check(D, p, 2, tilde=True)
    order = max(N, MIN_REMAINING)
    series = up_reduction(D, p, order)
    c0 = _constant_term(D) % p
    try:
        G = express_in_j(series)
        mismatch = None
    except NotPolynomial as exc:
        G, mismatch = None, exc.exponent
    if divides:
        if G is None:
            raise InternalInconsistency(f"S~_{p}^2 | H_{D} but the U({p}) series is not a polynomial in j")
        if G.degree > h / p:
            raise InternalInconsistency(f"deg G = {G.degree} exceeds h/p = {h}/{p}")
        const = G.degree <= 0
        if _principal_multiples_vanish(D, p) and not const:
            raise InternalInconsistency("principal part vanishes mod p but G is not constant")
        return CongruenceCertificate(
            D, p, True, G, order, const, c0 if const else None, series
        )
    return CongruenceCertificate(
        D, p, False, None, order, False, None, series, observed=G, mismatch_exponent=mismatch
    )


# ---------------------------------------------------------------------------
# surveys


@dataclass(frozen=True)
class SurveyRow:
    D: int
    h: int
    kronecker: int
    divides: bool
    outcome: str  # "constant" | "polynomial" | "none"


@dataclass
class SurveyTable:
    p: int
    dmax: int
    rows: list[SurveyRow] = field(default_factory=list)

    def count(self, outcome: str) -> int:
        return sum(r.outcome == outcome for r in self.rows)

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def proportion_constant(self) -> float | None:
        return self.count("constant") / self.total if self.rows else None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dmax": self.dmax,
            "total": self.total,
            "constant": self.count("constant"),
            "polynomial": self.count("polynomial"),
            "none": self.count("none"),
            "proportion_constant": self.proportion_constant,
            # class numbers below p can still occur past dmax
            "bound_exhausted": True,
            "rows": [r.__dict__ for r in self.rows],
        }


def omega_members(p: int, dmax: int, dmin: int = 3) -> list[int]:
    """Fundamental D <= dmax with p/6 < h(-D) < p and (-D/p) != 1."""
    out = []
    for D in fundamental_discriminants(dmin, dmax):
        if kronecker(-D, p) == 1:
            continue
        h = class_number(D)
        if p < 6 * h and h < p:
            out.append(D)
    return out


def _survey_row(args) -> SurveyRow:
    D, p, N = args
    cert = certify_congruence(D, p, N)
    if cert.certified:
        outcome = "constant" if cert.is_constant else "polynomial"
    else:
        outcome = "none"
    return SurveyRow(D, class_number(D), kronecker(-D, p), cert.divides, outcome)


def survey_omega(p: int, dmax: int | None = None, N: int = DEFAULT_VERIFY, workers: int = 1) -> SurveyTable:
    """Certify every member of Omega_p up to ``dmax`` (default 3 p^2)."""
    if p % 2 == 0:
        raise ValueError("survey needs an odd prime")
    if dmax is None:
        dmax = 3 * p * p
    members = omega_members(p, dmax)
    jobs = [(D, p, N) for D in members]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_survey_row, jobs))
    else:
        rows = [_survey_row(j) for j in jobs]
    return SurveyTable(p, dmax, rows)


def scan_surjectivity(p: int, t: int, dmin: int, dmax: int) -> list[int]:
    """Fundamental D in [dmin, dmax], p non-split, with S_p^t not dividing H_D."""
    return [
        D
        for D in fundamental_discriminants(dmin, dmax)
        if kronecker(-D, p) != 1 and not divisibility_check(D, p, t)
    ]


def decile_densities(p: int, exceptions, dmin: int, dmax: int) -> list[float]:
    """Exceptions per eligible discriminant in ten equal slices of [dmin, dmax]."""
    width = (dmax - dmin + 1) / 10
    exc = set(exceptions)
    out = []
    for k in range(10):
        lo = dmin + math.ceil(k * width)
        hi = dmin + math.ceil((k + 1) * width) - 1
        eligible = [D for D in fundamental_discriminants(lo, hi) if kronecker(-D, p) != 1]
        out.append(sum(D in exc for D in eligible) / len(eligible) if eligible else 0.0)
    return out


def hecke_identity(F, p: int, N: int):
    """Both sides of p F(j)|U(p) = F(j)|T_0(p) - F(j(pz)) over Z through q^N.

    T_0(p) is applied on the q-side, recognised as an integral polynomial
    G in j, and G(j) is expanded afresh, so the right-hand side does not
    reuse the U(p) series.  Returns (p U-side, G(j), F(j(pz)), G).
    """
    G = express_in_j(hecke_t0(F, p, max(N, MIN_REMAINING)))
    f = poly_in_j(F, N * p)
    lhs = apply_up(f, p).scale(p).truncate(N)
    vp = apply_vp(f, p).truncate(N)
    return lhs, poly_in_j(G, N), vp, G


@dataclass(frozen=True)
class RangeFailure:
    D: int
    p: int
    reason: str


def uniform_range_check(dlimit: int = 239, N: int = DEFAULT_VERIFY) -> tuple[int, list[RangeFailure]]:
    """Test S_p^2 | H_D and a constant congruence equal to c_D(0) mod p.

    Ranges over fundamental D < dlimit and odd primes p with
    p/6 < h(-D) < p and (-D/p) != 1.  Returns (pairs tested, failures).
    """
    from .arith import primes_in

    tested, failures = 0, []
    for D in fundamental_discriminants(3, dlimit - 1):
        h = class_number(D)
        for p in primes_in(3, 6 * h):
            if not (p < 6 * h and h < p) or kronecker(-D, p) == 1:
                continue
            tested += 1
            reasons = []
            if not divisibility_check(D, p, 2):
                reasons.append("S_p^2 does not divide H_D")
            cert = certify_congruence(D, p, N)
            if not cert.certified:
                reasons.append("no certificate (S~_p^2 does not divide H_D)")
            elif not cert.is_constant:
                reasons.append("certified G is not constant")
            elif cert.G.coeffs and cert.G.coeffs[0] % p != _constant_term(D) % p:
                reasons.append("constant differs from c_D(0)")
            if reasons:
                failures.append(RangeFailure(D, p, "; ".join(reasons)))
    return tested, failures
