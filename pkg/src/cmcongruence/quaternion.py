"""Definite quaternion algebra ramified at p, a maximal order, and its theta series.

Elements of the algebra (a, b) are 4-tuples of Fractions on the basis
1, i, j, k with i^2 = -a, j^2 = -b, k = ij.  Lattices are kept in Hermite
normal form so that equality is equality of bases.

The embedding-number inversion uses the orbit count: a primitive vector of
norm m in L gives an optimal embedding of O_m, and the unit group acts on
those with kernel {+1, -1} and stabilizer O_m^x, so each class accounts
for (w_R / 2) / u(m) vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools
import math

import numpy as np

from .arith import is_prime, kronecker
from .classfield import (
    class_number,
    eisenstein_hp,
    fundamental_discriminants,
    fundamental_part,
    is_discriminant,
    units_half,
)

__all__ = [
    "ConstructionFailed",
    "SaturationStalled",
    "IdealCheckFailed",
    "InversionNonIntegral",
    "CrossCheckFailed",
    "TYPE_NUMBER_ONE",
    "QuaternionAlg",
    "Lattice",
    "QuaternionOrder",
    "TraceZeroLattice",
    "ThetaTable",
    "DeuringReport",
    "hilbert_symbol",
    "build_algebra",
    "maximal_order",
    "inseparable_ideal",
    "trace_zero_lattice",
    "count_by_norm",
    "theta_coefficients",
    "unit_count",
    "embedding_numbers",
    "cusp_coefficient",
    "growth_slope",
    "deuring_cross_check",
    "setup",
    "theta_for",
]

TYPE_NUMBER_ONE = (2, 3, 5, 7, 13)


class ConstructionFailed(RuntimeError):
    pass


class SaturationStalled(RuntimeError):
    pass


class IdealCheckFailed(AssertionError):
    pass


class InversionNonIntegral(AssertionError):
    pass


class CrossCheckFailed(AssertionError):
    pass


# ---------------------------------------------------------------------------
# Hilbert symbols


def _split_power(x: int, p: int) -> tuple[int, int]:
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e, x


def _legendre(u: int, p: int) -> int:
    return 1 if pow(u % p, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, place) -> int:
    """(a, b)_v for nonzero rationals a, b; ``place`` is a prime or ``math.inf``."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == math.inf:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    # squares do not matter: clear denominators by multiplying by den^2
    a = a.numerator * a.denominator
    b = b.numerator * b.denominator
    al, u = _split_power(a, p)
    be, v = _split_power(b, p)
    if p != 2:
        sign = -1 if (al * be * (p - 1) // 2) % 2 else 1
        return sign * _legendre(u, p) ** be * _legendre(v, p) ** al
    eps = lambda x: ((x - 1) // 2) % 2
    omega = lambda x: ((x * x - 1) // 8) % 2
    e = eps(u) * eps(v) + al * omega(v) + be * omega(u)
    return -1 if e % 2 else 1


def _prime_factors(n: int) -> list[int]:
    n, out, d = abs(n), [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# the algebra


@dataclass(frozen=True)
class QuaternionAlg:
    a: int
    b: int

    def mul(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 - a * x1 * y1 - b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 + b * (x2 * y3 - x3 * y2),
            x0 * y2 + x2 * y0 + a * (x3 * y1 - x1 * y3),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def norm(self, x):
        x0, x1, x2, x3 = x
        return x0 * x0 + self.a * x1 * x1 + self.b * x2 * x2 + self.a * self.b * x3 * x3

    @staticmethod
    def trace(x):
        return 2 * x[0]

    @staticmethod
    def conj(x):
        return (x[0], -x[1], -x[2], -x[3])

    def ramified_places(self) -> set:
        places = set(_prime_factors(2 * self.a * self.b))
        out = {v for v in places if hilbert_symbol(-self.a, -self.b, v) == -1}
        if hilbert_symbol(-self.a, -self.b, math.inf) == -1:
            out.add(math.inf)
        return out


def build_algebra(p: int) -> QuaternionAlg:
    """An algebra (a, p) ramified exactly at {p, inf}, certified by Hilbert symbols."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        candidates = [(1, 1)]
    elif p % 4 == 3:
        candidates = [(1, p)]
    elif p % 8 == 5:
        candidates = [(2, p)]
    else:
        candidates = [(q, p) for q in range(3, 1001, 4) if is_prime(q)]
    for a, b in candidates:
        alg = QuaternionAlg(a, b)
        if alg.ramified_places() == {p, math.inf}:
            return alg
    raise ConstructionFailed(f"no certified algebra for p={p}")


# ---------------------------------------------------------------------------
# lattices


def _hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of the integer span (zero rows dropped)."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    n = len(A[0])
    out = []
    for col in range(n):
        while True:
            nz = [r for r in A if r[col]]
            if not nz:
                piv = None
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            done = True
            for r in nz:
                if r is piv:
                    continue
                q = r[col] // piv[col]
                for c in range(col, n):
                    r[c] -= q * piv[c]
                if r[col]:
                    done = False
            if done:
                break
        if piv is None:
            continue
        A = [r for r in A if r is not piv and any(r)]
        if piv[col] < 0:
            piv = [-v for v in piv]
        out.append((col, piv))
    # reduce entries above each pivot
    for k, (col, piv) in enumerate(out):
        for i in range(k):
            r = out[i][1]
            q = r[col] // piv[col]
            if q:
                for c in range(n):
                    r[c] -= q * piv[c]
    return [r for _, r in out]


@dataclass(frozen=True)
class Lattice:
    """Z-span of rational vectors, stored as a canonical HNF basis."""

    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, vectors) -> "Lattice":
        vecs = [tuple(Fraction(c) for c in v) for v in vectors]
        d = 1
        for v in vecs:
            for c in v:
                d = d * c.denominator // math.gcd(d, c.denominator)
        rows = _hnf([[int(c * d) for c in v] for v in vecs])
        return cls(tuple(tuple(Fraction(c, d) for c in r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def volume(self) -> Fraction:
        """|det| of the basis (full rank only)."""
        if self.rank != len(self.basis[0]):
            raise ValueError("volume needs a full-rank lattice")
        out = Fraction(1)
        for i, r in enumerate(self.basis):
            out *= r[i]
        return abs(out)

    def __contains__(self, v) -> bool:
        return Lattice.span(list(self.basis) + [v]) == self

    def contains_lattice(self, other: "Lattice") -> bool:
        return Lattice.span(list(self.basis) + list(other.basis)) == self

    def index_in(self, other: "Lattice") -> Fraction:
        return self.volume() / other.volume()

    def scaled(self, c) -> "Lattice":
        return Lattice.span([tuple(c * x for x in v) for v in self.basis])


# ---------------------------------------------------------------------------
# orders


def _is_integral(alg: QuaternionAlg, x) -> bool:
    return (2 * x[0]).denominator == 1 and alg.norm(x).denominator == 1


def _ring_closure(alg: QuaternionAlg, gens, rounds: int = 8) -> Lattice | None:
    one = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    L = Lattice.span([one] + list(gens))
    for _ in range(rounds):
        if L.rank != 4 or not all(_is_integral(alg, v) for v in L.basis):
            return None
        prods = [alg.mul(x, y) for x in L.basis for y in L.basis]
        if not all(_is_integral(alg, v) for v in prods):
            return None
        M = Lattice.span(list(L.basis) + prods)
        if M == L:
            return L
        L = M
    return None


def _reduced_discriminant(alg: QuaternionAlg, L: Lattice) -> Fraction:
    T = [[2 * alg.mul(x, y)[0] for y in L.basis] for x in L.basis]
    det = abs(_det(T))
    num, den = math.isqrt(det.numerator), math.isqrt(det.denominator)
    if num * num != det.numerator or den * den != det.denominator:
        raise SaturationStalled(f"discriminant {det} is not a square")
    return Fraction(num, den)


def _det(M) -> Fraction:
    M = [[Fraction(c) for c in r] for r in M]
    n, det = len(M), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return det


@dataclass(frozen=True)
class QuaternionOrder:
    algebra: QuaternionAlg
    lattice: Lattice

    @property
    def basis(self):
        return self.lattice.basis

    def trace_gram(self) -> list[list[int]]:
        """trd(e_i conj(e_j)), the bilinear form of twice the norm."""
        alg = self.algebra
        return [[int(2 * alg.mul(x, alg.conj(y))[0]) for y in self.basis] for x in self.basis]

    def norm_gram(self) -> list[list[Fraction]]:
        return [[Fraction(c, 2) for c in r] for r in self.trace_gram()]

    def reduced_discriminant(self) -> int:
        d = _reduced_discriminant(self.algebra, self.lattice)
        return int(d) if d.denominator == 1 else d

    def is_order(self) -> bool:
        alg = self.algebra
        one = (1, 0, 0, 0)
        if one not in self.lattice:
            return False
        for x in self.basis:
            for y in self.basis:
                xy = alg.mul(x, y)
                if not _is_integral(alg, xy) or xy not in self.lattice:
                    return False
        return True


def _standard_start(alg: QuaternionAlg) -> list:
    F = Fraction
    e = [tuple(F(int(i == k)) for k in range(4)) for i in range(4)]
    gens = list(e)
    if alg.a == 1 and alg.b % 4 == 3:
        gens += [(F(1, 2), F(0), F(1, 2), F(0)), (F(0), F(1, 2), F(0), F(1, 2))]
    return gens


def _saturation_candidates(alg: QuaternionAlg, L: Lattice, ell: int):
    """x = v/ell, v = sum c_i e_i with c in [0, ell)^4, of integral trace and norm."""
    B = L.basis
    d = 1
    for v in B:
        for c in v:
            d = d * c.denominator // math.gcd(d, c.denominator)
    tr = np.array([int(2 * v[0] * d) for v in B], dtype=object)
    G = [[int(2 * alg.mul(x, alg.conj(y))[0] * d * d) for y in B] for x in B]  # 2 d^2 nrd form
    grid = np.array(list(itertools.product(range(ell), repeat=4))[1:], dtype=np.int64)
    tvals = grid @ np.array([int(t) for t in tr], dtype=np.int64)
    ok = tvals % (ell * d) == 0
    Gm = np.array(G, dtype=np.int64)
    nvals = np.einsum("ni,ij,nj->n", grid, Gm, grid)
    ok &= nvals % (2 * ell * ell * d * d) == 0
    for c in grid[ok]:
        yield tuple(sum(Fraction(int(c[i]), ell) * B[i][k] for i in range(4)) for k in range(4))


def maximal_order(alg: QuaternionAlg, p: int | None = None) -> QuaternionOrder:
    """Saturate Z<1,i,j,k> (plus standard half-integral elements) to reduced discriminant p."""
    if p is None:
        places = alg.ramified_places() - {math.inf}
        (p,) = places
    L = _ring_closure(alg, _standard_start(alg))
    if L is None:
        raise SaturationStalled("starting lattice is not an order")
    disc = _reduced_discriminant(alg, L)
    for _ in range(64):
        if disc == p:
            return QuaternionOrder(alg, L)
        defect = disc / p
        if defect.denominator != 1:
            raise SaturationStalled(f"reduced discriminant {disc} is not a multiple of {p}")
        for ell in _prime_factors(int(defect)):
            bigger = None
            for x in _saturation_candidates(alg, L, ell):
                M = _ring_closure(alg, list(L.basis) + [x])
                if M is not None and M != L:
                    bigger = M
                    break
            if bigger is not None:
                L = bigger
                disc = _reduced_discriminant(alg, L)
                break
        else:
            raise SaturationStalled(f"no enlargement found at reduced discriminant {disc}")
    raise SaturationStalled(f"stopped at reduced discriminant {disc}")


def _nullspace_mod(M: list[list[int]], p: int) -> list[list[int]]:
    n = len(M[0])
    A = [[c % p for c in r] for r in M]
    pivots, row = [], 0
    for col in range(n):
        piv = next((r for r in range(row, len(A)) if A[r][col]), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = pow(A[row][col], -1, p)
        A[row] = [c * inv % p for c in A[row]]
        for r in range(len(A)):
            if r != row and A[r][col]:
                f = A[r][col]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -A[r][fcol] % p
        out.append(v)
    return out


def _combine(basis, coeffs):
    return tuple(sum(Fraction(c) * b[k] for c, b in zip(coeffs, basis)) for k in range(4))


def inseparable_ideal(R: QuaternionOrder, p: int) -> Lattice:
    """{x in R : p | nrd(x)}, as the radical of the trace form mod p plus pR; checked."""
    alg = R.algebra
    kernel = _nullspace_mod(R.trace_gram(), p)
    gens = [_combine(R.basis, v) for v in kernel] + [tuple(p * c for c in b) for b in R.basis]
    P = Lattice.span(gens)
    if P.index_in(R.lattice) != p * p:
        raise IdealCheckFailed(f"[R:pi] = {P.index_in(R.lattice)}, expected {p * p}")
    if not all(alg.norm(v) % p == 0 for v in P.basis):
        raise IdealCheckFailed("pi has an element of norm prime to p")
    for x in R.basis:
        for y in P.basis:
            if alg.mul(x, y) not in P or alg.mul(y, x) not in P:
                raise IdealCheckFailed("pi is not two-sided")
    sq = Lattice.span([alg.mul(x, y) for x in P.basis for y in P.basis])
    if sq != R.lattice.scaled(p):
        raise IdealCheckFailed("pi^2 != pR")
    return P


@dataclass(frozen=True)
class TraceZeroLattice:
    """L = (trace-zero part of Z + 2R), with Gram G of the norm: nrd(x) = x^T G x."""

    algebra: QuaternionAlg
    basis: tuple
    gram: tuple[tuple[Fraction, ...], ...]

    @property
    def gram_det(self) -> Fraction:
        return _det(self.gram)

    def gram_is_integral(self) -> bool:
        return all(c.denominator == 1 for r in self.gram for c in r)


def _norm_gram(alg: QuaternionAlg, basis) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(alg.mul(x, alg.conj(y))[0] for y in basis) for x in basis)


def trace_zero_lattice(R: QuaternionOrder) -> TraceZeroLattice:
    one = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    M = Lattice.span([one] + [tuple(2 * c for c in b) for b in R.basis])
    # in HNF only the first row has a nonzero first (trace) coordinate
    rows = [r for r in M.basis if r[0] == 0]
    if len(rows) != 3:
        raise IdealCheckFailed(f"trace-zero part has rank {len(rows)}")
    alg = R.algebra
    return TraceZeroLattice(alg, tuple(rows), _norm_gram(alg, rows))


# ---------------------------------------------------------------------------
# enumeration


def _ldl(G):
    n = len(G)
    Q = [[Fraction(c) for c in r] for r in G]
    for i in range(n):
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    return [[float(c) for c in r] for r in Q]


def count_by_norm(gram, bound: int) -> list[int]:
    """counts[m] = #{x in Z^n : x^T G x = m} for 0 <= m <= bound (G positive definite)."""
    n = len(gram)
    G2 = [[int(2 * Fraction(c)) for c in r] for r in gram]  # exact 2G
    if any(2 * Fraction(c) != g for r, r2 in zip(gram, G2) for c, g in zip(r, r2)):
        raise ValueError("Gram entries must lie in (1/2)Z")
    Q = _ldl(gram)
    for i in range(n):
        if Q[i][i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
    counts = [0] * (bound + 1)
    x = [0] * n
    top = 2 * bound
    slack = 1e-7 * (bound + 1)

    def leaf():
        # last coordinate varies: 2Q(x) = A x0^2 + B x0 + C with integers
        A = G2[0][0]
        Bc = 2 * sum(G2[0][k] * x[k] for k in range(1, n))
        C = sum(G2[a][b] * x[a] * x[b] for a in range(1, n) for b in range(1, n))
        return A, Bc, C

    def rec(i, remaining):
        c = -sum(Q[i][k] * x[k] for k in range(i + 1, n))
        if remaining < -slack:
            return
        r = math.sqrt(max(remaining, 0.0) / Q[i][i]) + 1e-9
        lo, hi = math.ceil(c - r - 1e-9), math.floor(c + r + 1e-9)
        if i == 0:
            A, Bc, C = leaf()
            for v in range(lo, hi + 1):
                val = A * v * v + Bc * v + C
                if val <= top:
                    counts[val // 2] += 1
            return
        for v in range(lo, hi + 1):
            x[i] = v
            t = v - c
            rec(i - 1, remaining - Q[i][i] * t * t)
        x[i] = 0

    rec(n - 1, bound + slack)
    return counts


@dataclass(frozen=True)
class ThetaTable:
    p: int
    coeffs: tuple[int, ...]
    w_R: int

    @property
    def bound(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m: int) -> int:
        return self.coeffs[m]

    def to_json(self) -> dict:
        return {"p": self.p, "w_R": self.w_R, "a": list(self.coeffs)}


def unit_count(R: QuaternionOrder) -> int:
    return count_by_norm(R.norm_gram(), 1)[1]


def theta_coefficients(L: TraceZeroLattice, M: int, w_R: int, p: int) -> ThetaTable:
    if M < 1:
        raise ValueError("need M >= 1")
    return ThetaTable(p, tuple(count_by_norm(L.gram, M)), w_R)


@dataclass(frozen=True)
class Setup:
    p: int
    algebra: QuaternionAlg
    order: QuaternionOrder
    lattice: TraceZeroLattice
    w_R: int


@lru_cache(maxsize=None)
def setup(p: int) -> Setup:
    """Algebra, maximal order, L and the unit count for p (memoized)."""
    alg = build_algebra(p)
    R = maximal_order(alg, p)
    return Setup(p, alg, R, trace_zero_lattice(R), unit_count(R))


@lru_cache(maxsize=32)
def _theta_cached(p: int, M: int) -> ThetaTable:
    S = setup(p)
    return theta_coefficients(S.lattice, M, S.w_R, p)


def theta_for(p: int, M: int) -> ThetaTable:
    """Theta table of the standard maximal order at p through q^M."""
    return _theta_cached(p, M)


def embedding_numbers(theta: ThetaTable) -> dict[int, int]:
    """h(O_m, R) for every discriminant m <= bound, by inverting the theta coefficients.

    a_R(m) = (w_R / 2) * sum over m = f^2 m' of h(O_m', R) / u(m').
    """
    half_w = Fraction(theta.w_R, 2)
    out: dict[int, int] = {}
    for m in range(1, theta.bound + 1):
        if not is_discriminant(m):
            if theta[m]:
                raise InversionNonIntegral(f"a_R({m}) = {theta[m]} at a non-discriminant")
            continue
        val = Fraction(theta[m]) / half_w * units_half(m)
        f = 2
        while f * f <= m:
            if m % (f * f) == 0 and is_discriminant(m // (f * f)):
                mm = m // (f * f)
                val -= Fraction(units_half(m), units_half(mm)) * out[mm]
            f += 1
        if val.denominator != 1 or val < 0:
            raise InversionNonIntegral(f"h(O_{m}, R) = {val}")
        D0, _ = fundamental_part(m)
        if kronecker(-D0, theta.p) == 1 and val:
            raise InversionNonIntegral(f"h(O_{m}, R) = {val} but p splits in Q(sqrt(-{m}))")
        out[m] = int(val)
    return out


def cusp_coefficient(theta: ThetaTable, D: int) -> Fraction:
    """c_L(D) = a_R(D) - 24/(p-1) H_p(D) for fundamental D."""
    return theta[D] - Fraction(24, theta.p - 1) * eisenstein_hp(D, theta.p)


def growth_slope(p: int, dmax: int = 2000) -> tuple[float, int]:
    """Least-squares slope of log|c_L(D)| against log D, over non-split fundamental D <= dmax.

    Returns (slope, number of points).  D with c_L(D) = 0 are skipped.
    """
    theta = theta_for(p, dmax)
    xs, ys = [], []
    for D in fundamental_discriminants(3, dmax):
        if kronecker(-D, p) == 1:
            continue
        c = cusp_coefficient(theta, D)
        if c:
            xs.append(math.log(D))
            ys.append(math.log(abs(float(c))))
    if len(xs) < 2:
        return 0.0, len(xs)
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope, len(xs)


@dataclass(frozen=True)
class DeuringReport:
    D: int
    p: int
    epsilon: Fraction
    h: int
    h_order: int
    multiplicity_total: int
    per_curve: int | None

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "p": self.p,
            "epsilon": str(self.epsilon),
            "h": self.h,
            "h_O_R": self.h_order,
            "multiplicity_total": self.multiplicity_total,
            "per_curve_multiplicity": self.per_curve,
        }


def deuring_cross_check(D: int, p: int) -> DeuringReport:
    """Compare root multiplicities of H_D mod p with quaternionic embedding numbers.

    Always checks that the multiplicities over supersingular roots sum to
    h(-D).  For type-number-one p the single supersingular root must have
    multiplicity epsilon * h(O_D, R).
    """
    from .congruence import multiplicity_report

    k = kronecker(-D, p)
    if k == 1:
        raise ValueError(f"p = {p} splits in Q(sqrt(-{D}))")
    eps = Fraction(1, 2) if k == -1 else Fraction(1)
    h = class_number(D)
    rep = multiplicity_report(D, p)
    if rep.total != h:
        raise CrossCheckFailed(f"multiplicities sum to {rep.total}, h(-{D}) = {h}")
    h_order = embedding_numbers(theta_for(p, max(D, 4)))[D]
    per_curve = None
    if p in TYPE_NUMBER_ONE:
        (root, mult), = rep.records
        per_curve = mult
        if mult != eps * h_order:
            raise CrossCheckFailed(f"multiplicity {mult} != {eps} * {h_order}")
    return DeuringReport(D, p, eps, h, h_order, rep.total, per_curve)
