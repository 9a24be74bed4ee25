"""Exact arithmetic: F_p, F_{p^2}, and arbitrary-precision binary floats.

The finite-field element classes are the public face of the field
arithmetic; the heavy kernels elsewhere in the package work on raw ``int``
residues and only convert at their boundaries.

``BigFixed`` is a (mantissa, exponent) binary number carrying its own
working precision.  Every operation truncates toward zero, so the relative
error of a single ``+``/``*`` is below ``2**(1 - prec)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math

__all__ = [
    "ZeroInverse",
    "PrecisionOverflow",
    "MAX_PRECISION",
    "FpElem",
    "Fp2Elem",
    "mod_inverse",
    "sqrt_mod_p",
    "kronecker",
    "smallest_nonresidue",
    "is_prime",
    "primes_in",
    "BigFixed",
    "BigComplex",
    "big_pi",
    "complex_exp",
]

MAX_PRECISION = 1 << 18


class ZeroInverse(ZeroDivisionError):
    pass


class PrecisionOverflow(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin below 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def mod_inverse(x, p: int | None = None):
    """Inverse of ``x`` modulo ``p``.

    Accepts an :class:`FpElem` (``p`` omitted) or a plain integer residue.
    """
    if isinstance(x, FpElem):
        return FpElem(mod_inverse(x.value, x.p), x.p)
    if p is None:
        raise TypeError("modulus required for integer input")
    if x % p == 0:
        raise ZeroInverse(f"{x} is not invertible mod {p}")
    return pow(x, -1, p)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod_p(a, p: int | None = None):
    """A square root of ``a`` mod an odd prime, or ``None`` for a non-residue.

    Tonelli-Shanks.  Accepts an :class:`FpElem` or an integer with ``p``.
    """
    if isinstance(a, FpElem):
        r = sqrt_mod_p(a.value, a.p)
        return None if r is None else FpElem(r, a.p)
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for n in range(2, p):
        if kronecker(n, p) == -1:
            return n
    raise ValueError(f"no quadratic non-residue mod {p}")


# ---------------------------------------------------------------------------
# finite fields


class FpElem:
    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError("mismatched moduli")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def inverse(self) -> "FpElem":
        return mod_inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * mod_inverse(o, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElem(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"


class Fp2Elem:
    """a + b*w in F_p[w]/(w^2 - n), n the smallest non-residue mod p."""

    __slots__ = ("a", "b", "p")

    def __init__(self, a: int, b: int, p: int):
        self.a = a % p
        self.b = b % p
        self.p = p

    @property
    def nonresidue(self) -> int:
        return smallest_nonresidue(self.p)

    @classmethod
    def from_int(cls, a: int, p: int) -> "Fp2Elem":
        return cls(a, 0, p)

    def _coerce(self, other):
        if isinstance(other, Fp2Elem):
            if other.p != self.p:
                raise ValueError("mismatched moduli")
            return other
        if isinstance(other, FpElem):
            return Fp2Elem(other.value, 0, self.p)
        if isinstance(other, int):
            return Fp2Elem(other, 0, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp2Elem(self.a - o.a, self.b - o.b, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Fp2Elem(-self.a, -self.b, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = smallest_nonresidue(self.p)
        return Fp2Elem(
            self.a * o.a + n * self.b * o.b, self.a * o.b + self.b * o.a, self.p
        )

    __rmul__ = __mul__

    def norm(self) -> int:
        return (self.a * self.a - smallest_nonresidue(self.p) * self.b * self.b) % self.p

    def frobenius(self) -> "Fp2Elem":
        return Fp2Elem(self.a, -self.b, self.p)

    def inverse(self) -> "Fp2Elem":
        nm = self.norm()
        if nm == 0:
            raise ZeroInverse("zero has no inverse in F_p^2")
        t = pow(nm, -1, self.p)
        return Fp2Elem(self.a * t, -self.b * t, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Fp2Elem(1, 0, self.p), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def in_base_field(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.p == o.p and self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.p))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"Fp2Elem({self.a}, {self.b}, {self.p})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a} + {self.b}*w" if self.a else f"{self.b}*w"


# ---------------------------------------------------------------------------
# binary floats


def _check_precision(prec: int) -> None:
    if prec > MAX_PRECISION:
        raise PrecisionOverflow(f"precision {prec} exceeds maximum {MAX_PRECISION}")
    if prec < 2:
        raise ValueError("precision must be at least 2 bits")


def _trunc_shift(m: int, s: int) -> int:
    """m * 2**-s rounded toward zero (s may be negative)."""
    if s <= 0:
        return m << -s
    return m >> s if m >= 0 else -((-m) >> s)


class BigFixed:
    """Binary number ``man * 2**exp`` with a declared precision in bits."""

    __slots__ = ("man", "exp", "prec")

    def __init__(self, man: int, exp: int, prec: int):
        extra = abs(man).bit_length() - prec
        if extra > 0:
            man = _trunc_shift(man, extra)
            exp += extra
        self.man = man
        self.exp = exp if man else 0
        self.prec = prec

    @classmethod
    def from_int(cls, n: int, prec: int) -> "BigFixed":
        return cls(n, 0, prec)

    @classmethod
    def from_fraction(cls, x, prec: int) -> "BigFixed":
        x = Fraction(x)
        if x == 0:
            return cls(0, 0, prec)
        shift = prec + x.denominator.bit_length() - abs(x.numerator).bit_length() + 1
        num = x.numerator << shift if shift >= 0 else x.numerator >> -shift
        q = abs(num) // x.denominator
        return cls(q if num >= 0 else -q, -shift, prec)

    @classmethod
    def from_float(cls, x: float, prec: int) -> "BigFixed":
        return cls.from_fraction(Fraction(x), prec)

    def with_prec(self, prec: int) -> "BigFixed":
        return BigFixed(self.man, self.exp, prec)

    def _prec2(self, other) -> int:
        return min(self.prec, other.prec)

    def _lift(self, other) -> "BigFixed":
        if isinstance(other, BigFixed):
            return other
        if isinstance(other, int):
            return BigFixed(other, 0, self.prec)
        if isinstance(other, (Fraction, float)):
            return BigFixed.from_fraction(other, self.prec)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        prec = self._prec2(other)
        if not other.man:
            return self.with_prec(prec)
        if not self.man:
            return other.with_prec(prec)
        # operand far below the other's last bit only matters for truncation
        hi, lo = (self, other) if self.top() >= other.top() else (other, self)
        floor_exp = hi.top() - prec - 4
        if lo.exp < floor_exp:
            lo_man = _trunc_shift(lo.man, floor_exp - lo.exp)
            lo_exp = floor_exp
        else:
            lo_man, lo_exp = lo.man, lo.exp
        e = min(hi.exp, lo_exp)
        return BigFixed((hi.man << (hi.exp - e)) + (lo_man << (lo_exp - e)), e, prec)

    __radd__ = __add__

    def __neg__(self):
        return BigFixed(-self.man, self.exp, self.prec)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return BigFixed(self.man * other.man, self.exp + other.exp, self._prec2(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.man:
            raise ZeroDivisionError("BigFixed division by zero")
        prec = self._prec2(other)
        shift = prec + other.man.bit_length() - abs(self.man).bit_length() + 2
        num = self.man << shift if shift >= 0 else _trunc_shift(self.man, -shift)
        q = abs(num) // abs(other.man)
        if (num < 0) != (other.man < 0):
            q = -q
        return BigFixed(q, self.exp - other.exp - shift, prec)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def ldexp(self, k: int) -> "BigFixed":
        return BigFixed(self.man, self.exp + k, self.prec)

    def sqrt(self) -> "BigFixed":
        if self.man < 0:
            raise ValueError("sqrt of negative BigFixed")
        if not self.man:
            return self
        shift = 2 * self.prec - self.man.bit_length() + 2
        if (self.exp - shift) % 2:
            shift += 1
        return BigFixed(math.isqrt(self.man << shift), (self.exp - shift) // 2, self.prec)

    def top(self) -> int:
        """Exponent of the leading bit, i.e. floor(log2|x|) + 1."""
        return self.exp + abs(self.man).bit_length()

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def __float__(self):
        if not self.man:
            return 0.0
        return math.ldexp(float(_trunc_shift(self.man, max(0, abs(self.man).bit_length() - 60))),
                          self.exp + max(0, abs(self.man).bit_length() - 60))

    def round(self) -> int:
        """Nearest integer (ties away from zero)."""
        if self.exp >= 0:
            return self.man << self.exp
        s = -self.exp
        m = abs(self.man)
        r = (m + (1 << (s - 1))) >> s
        return r if self.man >= 0 else -r

    def __abs__(self):
        return BigFixed(abs(self.man), self.exp, self.prec)

    def _cmp(self, other) -> int:
        d = (self - self._lift(other)).man
        return (d > 0) - (d < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (BigFixed, int, Fraction, float)):
            return self.to_fraction() == Fraction(other.to_fraction() if isinstance(other, BigFixed) else other)
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __bool__(self):
        return self.man != 0

    def __repr__(self):
        return f"BigFixed({float(self)!r}, prec={self.prec})"


class BigComplex:
    __slots__ = ("re", "im")

    def __init__(self, re: BigFixed, im: BigFixed):
        self.re = re
        self.im = im

    @property
    def prec(self) -> int:
        return min(self.re.prec, self.im.prec)

    @classmethod
    def from_parts(cls, re, im, prec: int) -> "BigComplex":
        def lift(x):
            if isinstance(x, BigFixed):
                return x.with_prec(prec)
            if isinstance(x, int):
                return BigFixed.from_int(x, prec)
            return BigFixed.from_fraction(x, prec)

        return cls(lift(re), lift(im))

    def _lift(self, other):
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, (BigFixed, int, Fraction, float)):
            zero = BigFixed(0, 0, self.prec)
            re = other if isinstance(other, BigFixed) else self.re._lift(other)
            return BigComplex(re, zero)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return BigComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return BigComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return BigComplex(-self.re, -self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return BigComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "BigComplex":
        return BigComplex(self.re, -self.im)

    def abs2(self) -> BigFixed:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> BigFixed:
        return self.abs2().sqrt()

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = o.abs2()
        n = self * o.conj()
        return BigComplex(n.re / d, n.im / d)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"BigComplex({complex(self)!r}, prec={self.prec})"


# ---------------------------------------------------------------------------
# constants and exp


def _atan_inv(n: int, bits: int) -> int:
    """arctan(1/n) * 2**bits by the alternating series, truncated."""
    one = 1 << bits
    term = one // n
    total, k, n2 = term, 1, n * n
    while term:
        term //= n2
        k += 2
        total += -(term // k) if k % 4 == 3 else term // k
    return total


@lru_cache(maxsize=None)
def _pi_fixed(bits: int) -> int:
    guard = 20
    b = bits + guard
    v = 16 * _atan_inv(5, b) - 4 * _atan_inv(239, b)
    return v >> guard


@lru_cache(maxsize=None)
def _ln2_fixed(bits: int) -> int:
    # ln 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 3^(2k+1))
    guard = 20
    b = bits + guard
    term = (1 << b) // 3
    total, k = term, 1
    while term:
        term //= 9
        total += term // (2 * k + 1)
        k += 1
    return (2 * total) >> guard


def big_pi(prec: int) -> BigFixed:
    """pi to ``prec`` bits (Machin's formula, cached per precision)."""
    _check_precision(prec)
    return BigFixed(_pi_fixed(prec + 2), -(prec + 2), prec)


def _to_fixed(x: BigFixed, bits: int) -> int:
    return _trunc_shift(x.man, -(x.exp + bits))


def complex_exp(z: BigComplex, prec: int | None = None) -> BigComplex:
    """e**z to ``prec`` bits.

    Real part reduced by multiples of ln 2, imaginary part by multiples of
    2*pi; the reduced argument is scaled by 2**-s, summed as a Taylor series
    and squared back ``s`` times.
    """
    if prec is None:
        prec = z.prec
    _check_precision(prec)
    if prec < 64:
        raise ValueError("complex_exp needs at least 64 bits")
    s = max(8, math.isqrt(prec) // 2)
    mag = max(z.re.top(), z.im.top(), 0)
    F = prec + s + mag + 40
    one = 1 << F
    X, Y = _to_fixed(z.re, F), _to_fixed(z.im, F)

    ln2 = _ln2_fixed(F)
    k = (X + ln2 // 2) // ln2
    X -= k * ln2
    twopi = 2 * _pi_fixed(F)
    m = (Y + twopi // 2) // twopi
    Y -= m * twopi

    # now |X| <= ln2/2, |Y| <= pi
    X >>= s
    Y >>= s
    sr, si = one, 0
    tr, ti = one, 0
    n = 1
    while tr or ti:
        tr, ti = (tr * X - ti * Y) >> F, (tr * Y + ti * X) >> F
        tr = tr // n if tr >= 0 else -((-tr) // n)
        ti = ti // n if ti >= 0 else -((-ti) // n)
        sr += tr
        si += ti
        n += 1
    for _ in range(s):
        sr, si = (sr * sr - si * si) >> F, (2 * sr * si) >> F
    return BigComplex(BigFixed(sr, k - F, prec), BigFixed(si, k - F, prec))
