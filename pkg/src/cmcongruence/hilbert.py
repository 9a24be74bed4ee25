"""Hilbert class polynomials from high-precision values of j at CM points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .arith import BigComplex, BigFixed, big_pi, complex_exp, PrecisionOverflow, MAX_PRECISION
from .cache import default_cache
from .classfield import QuadForm, reduced_forms
from .poly import IntPolynomial, ModPolynomial

__all__ = [
    "PrecisionInsufficient",
    "CMPoint",
    "cm_points",
    "eval_j",
    "precision_estimate",
    "hilbert_class_poly",
    "hilbert_class_poly_with_residual",
    "reduce_mod_p",
]

RESIDUAL_LIMIT = 0.01


class PrecisionInsufficient(ArithmeticError):
    pass


@dataclass(frozen=True)
class CMPoint:
    form: QuadForm
    tau: BigComplex

    @classmethod
    def from_form(cls, form: QuadForm, prec: int) -> "CMPoint":
        D = -form.disc
        sqrtD = BigFixed.from_int(D, prec + 8).sqrt()
        re = BigFixed.from_fraction(Fraction(-form.b, 2 * form.a), prec)
        im = (sqrtD / (2 * form.a)).with_prec(prec)
        return cls(form, BigComplex(re, im))


def cm_points(D: int, prec: int) -> list[CMPoint]:
    return [CMPoint.from_form(f, prec) for f in reduced_forms(D)]


def _sigma3_list(n: int) -> list[int]:
    s = [0] * (n + 1)
    for d in range(1, n + 1):
        cube = d * d * d
        for m in range(d, n + 1, d):
            s[m] += cube
    return s


def eval_j(tau: BigComplex, prec: int) -> BigComplex:
    """j(tau) to about ``prec`` bits for tau in the fundamental domain.

    j = E_4^3 / Delta with E_4 = 1 + 240 sum sigma_3(n) q^n and
    Delta = q (sum_k (-1)^k q^{k(3k-1)/2})^24.  The two sums are formed in
    fixed point (both are close to 1); the factor 1/q is applied in floating
    arithmetic so that tiny |q| costs no precision.
    """
    if prec > MAX_PRECISION:
        raise PrecisionOverflow(f"precision {prec} exceeds maximum {MAX_PRECISION}")
    y = float(tau.im)
    if y * y < 0.75 - 1e-9:
        raise ValueError("eval_j needs Im(tau) >= sqrt(3)/2")
    w = prec + 48
    pi = big_pi(w)
    two_pi_i_tau = BigComplex((-2 * pi * tau.im).with_prec(w), (2 * pi * tau.re).with_prec(w))
    q = complex_exp(two_pi_i_tau, w)

    F = w
    qr = _fixed(q.re, F)
    qi = _fixed(q.im, F)
    log2q = -2 * math.pi * y / math.log(2)
    # tail: 240 sigma_3(n) |q|^n <= 300 n^3 |q|^n
    N = 1
    while math.log2(300.0 * N**3) + N * log2q > -F - 8:
        N += 1
    pr, pi_ = [1 << F], [0]
    for _ in range(N):
        a, b = pr[-1], pi_[-1]
        pr.append((a * qr - b * qi) >> F)
        pi_.append((a * qi + b * qr) >> F)

    s3 = _sigma3_list(N)
    er, ei = 1 << F, 0
    for n in range(1, N + 1):
        er += 240 * s3[n] * pr[n]
        ei += 240 * s3[n] * pi_[n]

    etr, eti = 0, 0
    k = 0
    while True:
        hit = False
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e <= N:
                hit = True
                sgn = -1 if kk % 2 else 1
                etr += sgn * pr[e]
                eti += sgn * pi_[e]
        if not hit:
            break
        k += 1

    def cmul(x, y):
        return ((x[0] * y[0] - x[1] * y[1]) >> F, (x[0] * y[1] + x[1] * y[0]) >> F)

    e4 = (er, ei)
    num = cmul(cmul(e4, e4), e4)
    eta = (etr, eti)
    e2 = cmul(eta, eta)
    e4_ = cmul(e2, e2)
    e8 = cmul(e4_, e4_)
    e16 = cmul(e8, e8)
    e24 = cmul(e16, e8)

    num_c = BigComplex(BigFixed(num[0], -F, w), BigFixed(num[1], -F, w))
    den_c = BigComplex(BigFixed(e24[0], -F, w), BigFixed(e24[1], -F, w)) * q
    res = num_c / den_c
    return BigComplex(res.re.with_prec(prec), res.im.with_prec(prec))


def _fixed(x: BigFixed, F: int) -> int:
    s = x.exp + F
    if s >= 0:
        return x.man << s
    return x.man >> -s if x.man >= 0 else -((-x.man) >> -s)


def precision_estimate(D: int) -> int:
    """Working bits: coefficient-height bound plus 32 bits per class and 64 spare."""
    forms = reduced_forms(D)
    height = math.pi * math.sqrt(D) * sum(1.0 / f.a for f in forms) / math.log(2)
    return math.ceil(height) + 32 * len(forms) + 64


def _poly_mul_real(a: list[BigFixed], b: list[BigFixed]) -> list[BigFixed]:
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            t = x * y
            out[i + k] = t if out[i + k] is None else out[i + k] + t
    return out


def _compute(D: int, prec: int) -> tuple[IntPolynomial, float]:
    forms = reduced_forms(D)
    poly = [BigFixed.from_int(1, prec)]
    for f in forms:
        if f.b < 0:
            continue  # its conjugate partner (a, -b, c) carries the factor
        jv = eval_j(CMPoint.from_form(f, prec + 16).tau, prec)
        if f.b == 0 or f.b == f.a or f.a == f.c:
            factor = [-jv.re, BigFixed.from_int(1, prec)]
        else:
            factor = [jv.abs2(), -2 * jv.re, BigFixed.from_int(1, prec)]
        poly = _poly_mul_real(poly, factor)
    coeffs, worst = [], 0.0
    for c in poly:
        r = c.round()
        resid = abs(float((c - r).to_fraction()))
        worst = max(worst, resid)
        coeffs.append(r)
    return IntPolynomial(coeffs), worst


def hilbert_class_poly_with_residual(D: int, prec: int | None = None) -> tuple[IntPolynomial, float, int]:
    """(H_D, worst rounding residual, bits used), retrying once at doubled precision."""
    if prec is None:
        prec = precision_estimate(D)
    for attempt in range(2):
        poly, worst = _compute(D, prec)
        if worst < RESIDUAL_LIMIT:
            return poly, worst, prec
        prec *= 2
    raise PrecisionInsufficient(f"H_{D}: rounding residual {worst:.3g} at {prec // 2} bits")


@lru_cache(maxsize=None)
def _hcp_memo(D: int) -> IntPolynomial:
    cache = default_cache()
    if cache is not None:
        doc = cache.load("hcp", D)
        if doc is not None and doc.get("D") == D:
            return IntPolynomial(int(c) for c in doc["coeffs"])
    poly, _, bits = hilbert_class_poly_with_residual(D)
    if cache is not None:
        cache.store(
            "hcp",
            D,
            {"D": D, "h": poly.degree, "coeffs": [str(c) for c in poly.coeffs], "precision_bits": bits},
        )
    return poly


def hilbert_class_poly(D: int) -> IntPolynomial:
    """H_D(x): monic, degree h(-D), roots the singular moduli of discriminant -D."""
    reduced_forms(D)  # validates D
    return _hcp_memo(D)


def reduce_mod_p(P: IntPolynomial, p: int) -> ModPolynomial:
    return P.mod(p)
