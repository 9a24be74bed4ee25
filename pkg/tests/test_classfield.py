from fractions import Fraction
import math

import pytest
import sympy
from hypothesis import given, strategies as st

from cmcongruence.classfield import (
    BadDiscriminant,
    Discriminant,
    NotFundamental,
    QuadForm,
    class_number,
    eisenstein_hp,
    fundamental_discriminants,
    fundamental_part,
    hurwitz_h,
    is_fundamental,
    reduced_forms,
)




def brute_h(D):
    # enumerate all reduced triples directly from the inequalities, independent of the library
    out = 0
    for a in range(1, math.isqrt(D) + 1):  # c >= a forces a^2 <= D
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a or (c == a and b < 0) or math.gcd(math.gcd(a, b), c) != 1:
                continue
            out += 1
    return out


def test_class_numbers_against_brute_force():
    for D in range(3, 800):
        if D % 4 in (0, 3):
            assert class_number(D) == brute_h(D), D


def test_known_class_numbers():
    assert [class_number(D) for D in (3, 4, 7, 8, 11, 19, 43, 67, 163)] == [1] * 9
    assert class_number(23) == 3
    assert class_number(239) == 15
    assert class_number(1991) == 56


def test_reduced_forms_are_reduced_and_primitive():
    for D in (23, 56, 239, 1000):
        for f in reduced_forms(D):
            assert f.disc == -D and f.is_reduced() and f.is_primitive()


def test_fundamental():
    listed = fundamental_discriminants(3, 500)
    for D in range(1, 501):
        d = -D
        want = (d % 4 == 1 and sympy.ntheory.factor_.core(D) == D) or (
            d % 16 in (8, 12) and sympy.ntheory.factor_.core(D // 4) == D // 4
        )
        assert is_fundamental(D) == want, D
        assert (D in listed) == want
    assert fundamental_part(12) == (3, 2)
    assert fundamental_part(4 * 27) == (3, 6)
    assert Discriminant(75).conductor == 5
    with pytest.raises(BadDiscriminant):
        reduced_forms(5)


def test_hurwitz_values():
    assert hurwitz_h(3) == Fraction(1, 3)
    assert hurwitz_h(4) == Fraction(1, 2)
    assert hurwitz_h(12) == Fraction(4, 3)
    assert hurwitz_h(15) == 2


@given(st.integers(1, 120))
def test_hurwitz_class_number_relation(n):
    # sum_{t^2 <= 4n} H(4n - t^2) = 2 sigma(n) - sum_{d | n} min(d, n/d), with H(0) = -1/12
    total = Fraction(0)
    t = -math.isqrt(4 * n)
    while t * t <= 4 * n:
        m = 4 * n - t * t
        total += Fraction(-1, 12) if m == 0 else hurwitz_h(m)
        t += 1
    divs = sympy.divisors(n)
    assert total == 2 * sum(divs) - sum(min(d, n // d) for d in divs)


def test_eisenstein_hp():
    assert eisenstein_hp(7, 13) == 1  # (1 + 1)/2 * h(-7)
    assert eisenstein_hp(3, 2) == Fraction(1, 3)
    assert eisenstein_hp(4, 2) == Fraction(1, 4)
    assert eisenstein_hp(7, 2) == 0
    with pytest.raises(NotFundamental):
        eisenstein_hp(12, 5)


def test_quadform_eval():
    f = QuadForm(2, 1, 3)
    assert f(1, 1) == 6 and f.disc == -23
