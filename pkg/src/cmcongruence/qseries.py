"""Truncated Laurent series in q over Z or Z/mZ.

A :class:`QSeries` knows its coefficients exactly for every exponent up to
and including ``order``.  Products are computed by Kronecker substitution:
each coefficient list is packed into one big integer, the integers are
multiplied by GMP, and the product is unpacked.
"""

from __future__ import annotations

from functools import lru_cache

import gmpy2
import numpy as np

__all__ = [
    "OrderOverflow",
    "MAX_ORDER",
    "QSeries",
    "mul_coeffs",
    "delta_series",
    "e4_series",
    "j_series",
    "apply_up",
    "apply_vp",
    "poly_in_j",
    "hecke_t0",
    "LEHNER_MODULI",
    "lehner_violations",
]

MAX_ORDER = 2_000_000


class OrderOverflow(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient kernels


def _pack_unsigned(coeffs, width: int) -> int:
    if width == 8:
        return int.from_bytes(np.asarray(coeffs, dtype=np.uint64).tobytes(), "little")
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def _unpack_unsigned(value: int, width: int, count: int) -> list[int]:
    buf = value.to_bytes(width * count, "little")
    if width == 8:
        return np.frombuffer(buf, dtype=np.uint64).tolist()
    return [int.from_bytes(buf[i : i + width], "little") for i in range(0, width * count, width)]


def _offset(width: int, count: int) -> int:
    return int.from_bytes((b"\x00" * (width - 1) + b"\x80") * count, "little")


def _schoolbook(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def mul_coeffs(a: list[int], b: list[int], modulus: int | None = None) -> list[int]:
    """Full product of two coefficient lists (reduced mod ``modulus`` if given)."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if min(len(a), len(b)) <= 16:
        out = _schoolbook(a, b)
        return [c % modulus for c in out] if modulus else out
    if modulus:
        a = [c % modulus for c in a] if min(a) < 0 else a
        b = [c % modulus for c in b] if min(b) < 0 else b
        bound = (modulus - 1) ** 2 * min(len(a), len(b))
        width = max(1, (bound.bit_length() + 7) // 8)
        if width < 8 and bound.bit_length() > 32:
            width = 8
        x = gmpy2.mpz(_pack_unsigned(a, width)) * gmpy2.mpz(_pack_unsigned(b, width))
        return [c % modulus for c in _unpack_unsigned(int(x), width, n)]
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    bound = ma * mb * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * width - 1)
    xa = _pack_unsigned([c + half for c in a], width) - _offset(width, len(a))
    xb = _pack_unsigned([c + half for c in b], width) - _offset(width, len(b))
    prod = int(gmpy2.mpz(xa) * gmpy2.mpz(xb)) + _offset(width, n)
    return [c - half for c in _unpack_unsigned(prod, width, n)]


def _inverse_coeffs(f: list[int], n: int, modulus: int | None) -> list[int]:
    """First ``n`` coefficients of 1/f for f[0] a unit (Newton iteration)."""
    f0 = f[0]
    if modulus:
        g = [pow(f0, -1, modulus)]
    else:
        if f0 not in (1, -1):
            raise ValueError("series inverse over Z needs leading coefficient +-1")
        g = [f0]
    k = 1
    while k < n:
        k = min(2 * k, n)
        fg = mul_coeffs(f[:k], g, modulus)[:k]
        e = [-c for c in fg]
        e[0] += 2
        if modulus:
            e = [c % modulus for c in e]
        g = mul_coeffs(g, e, modulus)[:k]
    return g[:n]


# ---------------------------------------------------------------------------


class QSeries:
    """Coefficients of q^val .. q^order; ``modulus`` None means Z."""

    __slots__ = ("val", "coeffs", "order", "modulus")

    def __init__(self, coeffs, val: int, order: int | None = None, modulus: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = val + len(coeffs) - 1
        coeffs = coeffs[: max(0, order - val + 1)]
        if modulus:
            coeffs = [int(c) % modulus for c in coeffs]
        coeffs += [0] * (order - val + 1 - len(coeffs))
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        self.coeffs = coeffs[lead:]
        self.val = val + lead
        self.order = order
        self.modulus = modulus

    @classmethod
    def monomial(cls, n: int, order: int, c: int = 1, modulus: int | None = None) -> "QSeries":
        return cls([c], n, order, modulus)

    @classmethod
    def constant(cls, c: int, order: int, modulus: int | None = None) -> "QSeries":
        return cls([c], 0, order, modulus)

    # -- access -----------------------------------------------------------
    @property
    def valuation(self) -> int | None:
        """Exponent of the first nonzero coefficient (None for zero)."""
        return self.val if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, n: int) -> int:
        if n > self.order:
            raise IndexError(f"coefficient q^{n} beyond truncation order {self.order}")
        if n < self.val:
            return 0
        return self.coeffs[n - self.val]

    def coefficients(self, lo: int, hi: int) -> list[int]:
        """Coefficients of q^lo .. q^hi inclusive."""
        return [self[n] for n in range(lo, hi + 1)]

    def principal_part(self) -> dict[int, int]:
        return {n: self[n] for n in range(self.val, 0)} if self.coeffs else {}

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise OrderOverflow(f"cannot extend series known through {self.order} to {order}")
        return QSeries(self.coeffs, self.val, order, self.modulus)

    def reduce(self, modulus: int) -> "QSeries":
        if self.modulus and self.modulus % modulus:
            raise ValueError(f"cannot reduce mod {self.modulus} series mod {modulus}")
        return QSeries(self.coeffs, self.val, self.order, modulus)

    def lift(self) -> "QSeries":
        """Same residues, viewed over Z."""
        return QSeries(self.coeffs, self.val, self.order, None)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return QSeries.constant(other, self.order, self.modulus)
        if not isinstance(other, QSeries):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ValueError("series over different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        lo = min(self.val, other.val)
        out = [0] * max(0, order - lo + 1)
        for s in (self, other):
            for i, c in enumerate(s.coeffs[: max(0, order - s.val + 1)]):
                out[s.val - lo + i] += c
        return QSeries(out, lo, order, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.val, self.order, self.modulus)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "QSeries":
        return QSeries([c * x for x in self.coeffs], self.val, self.order, self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            order = min(self.order + (other.val if other.coeffs else other.order + 1),
                        other.order + (self.val if self.coeffs else self.order + 1))
            return QSeries([], order + 1, order, self.modulus)
        order = min(self.order + other.val, other.order + self.val)
        val = self.val + other.val
        n = order - val + 1
        if n <= 0:
            return QSeries([], order + 1, order, self.modulus)
        prod = mul_coeffs(self.coeffs[:n], other.coeffs[:n], self.modulus)
        return QSeries(prod[:n], val, order, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result if result is not None else QSeries.constant(1, self.order - self.val, self.modulus)

    def inverse(self) -> "QSeries":
        """1/s for s with a unit leading coefficient."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero series")
        n = len(self.coeffs)
        inv = _inverse_coeffs(self.coeffs, n, self.modulus)
        return QSeries(inv, -self.val, -self.val + n - 1, self.modulus)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.order == other.order
            and self.val == other.val
            and self.coeffs == other.coeffs
        )

    def agrees_with(self, other: "QSeries", through: int | None = None) -> bool:
        """Coefficientwise equality through a common order."""
        top = min(self.order, other.order) if through is None else through
        lo = min(self.val, other.val)
        m = self.modulus or other.modulus
        for n in range(lo, top + 1):
            d = self[n] - other[n]
            if (d % m if m else d) != 0:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "valuation": self.val,
            "order": self.order,
            "modulus": self.modulus,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, d: dict) -> "QSeries":
        return cls([int(c) for c in d["coeffs"]], d["valuation"], d["order"], d.get("modulus"))

    def __repr__(self):
        head = ", ".join(f"{self[n]}q^{n}" for n in range(self.val, min(self.order, self.val + 4) + 1))
        ring = f"mod {self.modulus}" if self.modulus else "over Z"
        return f"QSeries({head}, ... + O(q^{self.order + 1}) {ring})"


# ---------------------------------------------------------------------------
# modular forms


@lru_cache(maxsize=8)
def _sigma3(n: int) -> list[int]:
    s = np.zeros(n + 1, dtype=object)
    for d in range(1, n + 1):
        s[d::d] += d**3
    return s.tolist()


def _eta_cubed(n: int) -> list[int]:
    """Coefficients 0..n of prod (1-q^k)^3 = sum (-1)^k (2k+1) q^(k(k+1)/2)."""
    out = [0] * (n + 1)
    k = 0
    while k * (k + 1) // 2 <= n:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def _delta_over_q(n: int, modulus: int | None) -> list[int]:
    """Coefficients 0..n of prod (1-q^k)^24."""
    f = _eta_cubed(n)
    if modulus:
        f = [c % modulus for c in f]
    for _ in range(3):
        f = mul_coeffs(f, f, modulus)[: n + 1]
    return f


def delta_series(N: int, modulus: int | None = None) -> QSeries:
    """Delta = q prod (1-q^n)^24 through q^N."""
    if N < 1:
        raise ValueError("order must be at least 1")
    return QSeries(_delta_over_q(N - 1, modulus), 1, N, modulus)


def e4_series(N: int, modulus: int | None = None) -> QSeries:
    """E_4 = 1 + 240 sum sigma_3(n) q^n through q^N."""
    if N < 1:
        raise ValueError("order must be at least 1")
    s = _sigma3(N)
    return QSeries([1] + [240 * s[n] for n in range(1, N + 1)], 0, N, modulus)


@lru_cache(maxsize=32)
def _j_cached(N: int, modulus: int | None) -> QSeries:
    d = _delta_over_q(N + 1, modulus)
    dinv = _inverse_coeffs(d, N + 2, modulus)
    e4 = e4_series(N + 1, modulus).coeffs
    e4 = e4 + [0] * (N + 2 - len(e4))
    cube = mul_coeffs(mul_coeffs(e4, e4, modulus)[: N + 2], e4, modulus)[: N + 2]
    return QSeries(mul_coeffs(cube, dinv, modulus)[: N + 2], -1, N, modulus)


def j_series(N: int, modulus: int | None = None) -> QSeries:
    """j = E_4^3 / Delta through q^N (over Z, or mod ``modulus``)."""
    if N < 1:
        raise ValueError("order must be at least 1")
    if N > MAX_ORDER:
        raise OrderOverflow(f"order {N} exceeds limit {MAX_ORDER}")
    return _j_cached(N, modulus)


# ---------------------------------------------------------------------------
# operators


def apply_up(s: QSeries, p: int) -> QSeries:
    """U(p): sum a(n) q^n  ->  sum a(pn) q^n."""
    lo = -((-s.val) // p)  # ceil(val / p)
    hi = s.order // p
    return QSeries([s[p * n] for n in range(lo, hi + 1)], lo, hi, s.modulus)


def apply_vp(s: QSeries, p: int) -> QSeries:
    """V(p): q -> q^p."""
    if s.order * p > MAX_ORDER:
        raise OrderOverflow(f"order {s.order * p} exceeds limit {MAX_ORDER}")
    if s.is_zero():
        return QSeries([], s.order * p + 1, s.order * p + p - 1, s.modulus)
    out = [0] * ((len(s.coeffs) - 1) * p + 1)
    out[::p] = s.coeffs
    # exponents between p*order and p*order + p - 1 are also known to vanish
    return QSeries(out, s.val * p, s.order * p + p - 1, s.modulus)


def poly_in_j(F, N: int, modulus: int | None = None) -> QSeries:
    """F(j(z)) through q^N by Horner's rule."""
    coeffs = F.coeffs if hasattr(F, "coeffs") else tuple(F)
    if not coeffs:
        return QSeries([], N + 1, N, modulus)
    m = len(coeffs) - 1
    j = j_series(max(1, N + m), modulus)
    acc = QSeries.constant(coeffs[-1], N + m, modulus)
    for c in reversed(coeffs[:-1]):
        acc = acc * j + c
    return acc.truncate(N)


def hecke_t0(F, p: int, N: int) -> QSeries:
    """F(j) | T_0(p) = p * F(j)|U(p) + F(j(pz)) over Z, through q^N."""
    f = poly_in_j(F, N * p)
    return (apply_up(f, p).scale(p) + apply_vp(f, p)).truncate(N)


LEHNER_MODULI = {2: 2**11, 3: 3**5, 5: 5**2, 7: 7, 11: 11}


def lehner_violations(nmax: int = 100) -> list[tuple[int, int]]:
    """(ell, n) with c(ell n) not divisible by LEHNER_MODULI[ell], for n <= nmax."""
    j = j_series(11 * nmax)
    return [(ell, n) for ell, m in LEHNER_MODULI.items() for n in range(1, nmax + 1) if j[ell * n] % m]
