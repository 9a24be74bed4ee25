"""Supersingular j-invariants in characteristic p.

The Hasse invariant of y^2 = x^3 + A(t) x + B(t), with A = 3t(1728 - t) and
B = 2t(1728 - t)^2 (a curve of j-invariant t), is the coefficient of x^(p-1)
in (x^3 + A x + B)^((p-1)/2).  Its zeros away from t = 0, 1728 are the
supersingular invariants.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .arith import Fp2Elem, is_prime, smallest_nonresidue
from .cache import default_cache
from .poly import ModPolynomial

__all__ = [
    "BadPrime",
    "InternalInconsistency",
    "OracleBoundExceeded",
    "ORACLE_BOUND",
    "SupersingularData",
    "hasse_polynomial",
    "hasse_polynomial_powering",
    "ss_polynomials",
    "is_supersingular_oracle",
    "supersingular_j_oracle",
]

ORACLE_BOUND = 60


class BadPrime(ValueError):
    pass


class InternalInconsistency(AssertionError):
    pass


class OracleBoundExceeded(ValueError):
    pass


def _check_prime(p: int, lo: int = 5) -> None:
    if p < lo or not is_prime(p):
        raise BadPrime(f"need a prime >= {lo}, got {p}")


def hasse_polynomial(p: int) -> ModPolynomial:
    """Coefficient of x^(p-1) in (x^3 + A(t)x + B(t))^((p-1)/2), as a polynomial in t.

    A term (x^3)^i (A x)^j B^k has x-degree 3i + j, so only
    j = p - 1 - 3i, k = 2i - n contribute (n = (p-1)/2); it equals
    n!/(i! j! k!) 3^j 2^k t^(n-i) (1728 - t)^i.
    """
    _check_prime(p)
    n = (p - 1) // 2
    fact = [1] * (n + 1)
    for m in range(1, n + 1):
        fact[m] = fact[m - 1] * m % p
    inv = [pow(f, -1, p) for f in fact]
    out = [0] * (n + 1)
    for i in range(0, n + 1):
        j = p - 1 - 3 * i
        k = 2 * i - n
        if j < 0 or k < 0:
            continue
        c = fact[n] * inv[i] * inv[j] * inv[k] * pow(3, j, p) * pow(2, k, p) % p
        # c * t^(n-i) * (1728 - t)^i
        binom = 1
        for r in range(i + 1):
            # coefficient of t^r in (1728 - t)^i
            term = binom * pow(1728, i - r, p) * (-1 if r % 2 else 1)
            out[n - i + r] = (out[n - i + r] + c * term) % p
            binom = binom * (i - r) * pow(r + 1, -1, p) % p if r < i else binom
    return ModPolynomial(out, p)


def hasse_polynomial_powering(p: int) -> ModPolynomial:
    """Same polynomial by binary powering of the bivariate x^3 + A x + B.

    Coefficients are polynomials in t; x-degrees above p - 1 are dropped
    at every step.  Quadratic in p per multiplication, so meant for
    cross-checking at small p.
    """
    _check_prime(p)
    cap = p - 1
    t = ModPolynomial.x(p)
    u = ModPolynomial([1728], p) - t
    A = t * u * 3
    B = t * u * u * 2
    base = {0: B, 1: A, 3: ModPolynomial.one(p)}

    def mul(f, g):
        out = {}
        for a, fa in f.items():
            for b, gb in g.items():
                if a + b > cap:
                    continue
                prod = fa * gb
                out[a + b] = out[a + b] + prod if a + b in out else prod
        return {k: v for k, v in out.items() if not v.is_zero()}

    e = (p - 1) // 2
    result = {0: ModPolynomial.one(p)}
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result.get(cap, ModPolynomial([], p))


@dataclass(frozen=True)
class SupersingularData:
    p: int
    s_tilde: ModPolynomial
    e0: int
    e1: int

    @property
    def s(self) -> ModPolynomial:
        """S_p = S~_p * x^e0 * (x - 1728)^e1."""
        out = self.s_tilde
        if self.e0:
            out = out * ModPolynomial.x(self.p)
        if self.e1:
            out = out * ModPolynomial([-1728, 1], self.p)
        return out

    @cached_property
    def roots(self) -> list[Fp2Elem]:
        """Every supersingular j-invariant, once each, as elements of F_{p^2}."""
        p = self.p
        out = []
        if self.e0:
            out.append(Fp2Elem(0, 0, p))
        if self.e1:
            out.append(Fp2Elem(1728, 0, p))
        if self.s_tilde.degree > 0:
            out.extend(self.s_tilde.roots_fp2())
        return out


def _strip_root(f: ModPolynomial, r: int) -> ModPolynomial:
    lin = ModPolynomial([-r, 1], f.p)
    while f.degree > 0 and f(r) == 0:
        f = f // lin
    return f


@lru_cache(maxsize=None)
def ss_polynomials(p: int) -> SupersingularData:
    """S_p and S~_p over F_p.

    p = 2, 3 are tabulated (only j = 0 is supersingular).  For p >= 5,
    S~_p is the Hasse polynomial with its factors at t = 0, 1728 removed.
    """
    if p in (2, 3):
        return SupersingularData(p, ModPolynomial.one(p), 1, 0)
    _check_prime(p)
    cache = default_cache()
    if cache is not None:
        doc = cache.load("ssp", p)
        if doc is not None and doc.get("p") == p:
            return SupersingularData(p, ModPolynomial([int(c) for c in doc["coeffs"]], p), doc["e0"], doc["e1"])
    f = hasse_polynomial(p)
    if f.is_zero():
        raise InternalInconsistency(f"Hasse polynomial vanishes identically for p={p}")
    f = _strip_root(_strip_root(f, 0), 1728 % p).monic()
    if f.degree != p // 12:
        raise InternalInconsistency(f"deg S~_{p} = {f.degree}, expected {p // 12}")
    if not f.is_squarefree():
        raise InternalInconsistency(f"S~_{p} is not squarefree")
    data = SupersingularData(p, f, int(p % 3 == 2), int(p % 4 == 3))
    if cache is not None:
        cache.store(
            "ssp",
            p,
            {"p": p, "deg": f.degree, "coeffs": [str(c) for c in f.coeffs], "e0": data.e0, "e1": data.e1},
        )
    return data


# ---------------------------------------------------------------------------
# point-counting oracle


@lru_cache(maxsize=16)
def _fp2_tables(p: int):
    n = smallest_nonresidue(p)
    idx = np.arange(p * p, dtype=np.int64)
    a, b = idx % p, idx // p
    sq_a = (a * a + n * b * b) % p
    sq_b = (2 * a * b) % p
    chi = -np.ones(p * p, dtype=np.int64)
    chi[sq_a + p * sq_b] = 1
    chi[0] = 0
    return n, a, b, chi


def _count_trace(p: int, A: Fp2Elem, B: Fp2Elem) -> int:
    """Trace of Frobenius of y^2 = x^3 + A x + B over F_{p^2}."""
    n, a, b = _fp2_tables(p)[:3]
    chi = _fp2_tables(p)[3]
    # x^2, x^3
    x2a = (a * a + n * b * b) % p
    x2b = (2 * a * b) % p
    x3a = (x2a * a + n * x2b * b) % p
    x3b = (x2a * b + x2b * a) % p
    fa = (x3a + A.a * a + n * A.b * b + B.a) % p
    fb = (x3b + A.a * b + A.b * a + B.b) % p
    return -int(chi[fa + p * fb].sum())


def is_supersingular_oracle(j0, p: int, bound: int = ORACLE_BOUND) -> bool:
    """Naive point count over F_{p^2}: supersingular iff the trace is 0 mod p."""
    if p > bound:
        raise OracleBoundExceeded(f"p = {p} exceeds oracle bound {bound}")
    _check_prime(p)
    if not isinstance(j0, Fp2Elem):
        j0 = Fp2Elem(int(j0), 0, p)
    if j0 == 0:
        A, B = Fp2Elem(0, 0, p), Fp2Elem(1, 0, p)
    elif j0 == 1728:
        A, B = Fp2Elem(1, 0, p), Fp2Elem(0, 0, p)
    else:
        k = j0 / (Fp2Elem(1728, 0, p) - j0)
        A, B = k * 3, k * 2
    return _count_trace(p, A, B) % p == 0


def supersingular_j_oracle(p: int, bound: int = ORACLE_BOUND) -> set[Fp2Elem]:
    """All supersingular j in F_{p^2} by exhaustive point counting."""
    if p > bound:
        raise OracleBoundExceeded(f"p = {p} exceeds oracle bound {bound}")
    return {
        Fp2Elem(a, b, p)
        for b in range(p)
        for a in range(p)
        if is_supersingular_oracle(Fp2Elem(a, b, p), p, bound)
    }
