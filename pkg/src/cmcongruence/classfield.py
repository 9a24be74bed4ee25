"""Binary quadratic forms, class numbers and Hurwitz class numbers.

Discriminants are passed as the positive integer D; the discriminant
itself is -D throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .arith import kronecker

__all__ = [
    "BadDiscriminant",
    "NotFundamental",
    "QuadForm",
    "Discriminant",
    "is_discriminant",
    "is_fundamental",
    "fundamental_part",
    "fundamental_discriminants",
    "reduced_forms",
    "class_number",
    "units_half",
    "hurwitz_h",
    "eisenstein_hp",
]


class BadDiscriminant(ValueError):
    pass


class NotFundamental(ValueError):
    pass


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


def is_discriminant(D: int) -> bool:
    return D > 0 and (-D) % 4 in (0, 1)


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    """True iff -D is a fundamental discriminant."""
    if D <= 0:
        return False
    if D % 4 == 3:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (1, 2) and _squarefree(m)
    return False


def fundamental_part(D: int) -> tuple[int, int]:
    """(D0, f) with -D = -D0 * f^2 and -D0 fundamental."""
    if not is_discriminant(D):
        raise BadDiscriminant(f"-{D} is not a discriminant")
    f = 1
    for g in range(math.isqrt(D), 0, -1):
        if D % (g * g) == 0 and is_fundamental(D // (g * g)):
            return D // (g * g), g
    raise BadDiscriminant(f"no fundamental part for -{D}")  # unreachable


@dataclass(frozen=True)
class Discriminant:
    D: int

    def __post_init__(self):
        if not is_discriminant(self.D):
            raise BadDiscriminant(f"-{self.D} is not a discriminant")

    @property
    def fundamental(self) -> bool:
        return is_fundamental(self.D)

    @property
    def conductor(self) -> int:
        return fundamental_part(self.D)[1]

    @property
    def field_discriminant(self) -> int:
        return fundamental_part(self.D)[0]


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    """Fundamental D with lo <= D <= hi."""
    return [D for D in range(max(lo, 3), hi + 1) if is_fundamental(D)]


@lru_cache(maxsize=4096)
def _reduced_forms(D: int) -> tuple[QuadForm, ...]:
    out = []
    amax = math.isqrt(D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b + D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            f = QuadForm(a, b, c)
            if f.is_reduced() and f.is_primitive():
                out.append(f)
    return tuple(out)


def reduced_forms(D: int) -> list[QuadForm]:
    """One reduced primitive form per class of discriminant -D."""
    if not is_discriminant(D):
        raise BadDiscriminant(f"-{D} is not a discriminant")
    return list(_reduced_forms(D))


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def units_half(D: int) -> int:
    """Half the number of units in the order of discriminant -D."""
    if not is_discriminant(D):
        raise BadDiscriminant(f"-{D} is not a discriminant")
    return {3: 3, 4: 2}.get(D, 1)


def hurwitz_h(m: int) -> Fraction:
    """Hurwitz class number H(m) = sum over m = f^2 m' of h(-m')/u(m')."""
    if not is_discriminant(m):
        raise BadDiscriminant(f"-{m} is not a discriminant")
    total = Fraction(0)
    f = 1
    while f * f <= m:
        if m % (f * f) == 0 and is_discriminant(m // (f * f)):
            mm = m // (f * f)
            total += Fraction(class_number(mm), units_half(mm))
        f += 1
    return total


def eisenstein_hp(D: int, p: int) -> Fraction:
    """H_p(D) = (1 - (-D/p)) h(-D) / (2 u(D)) for fundamental -D."""
    if not is_fundamental(D):
        raise NotFundamental(f"-{D} is not a fundamental discriminant")
    return Fraction(1 - kronecker(-D, p), 2) * Fraction(class_number(D), units_half(D))
