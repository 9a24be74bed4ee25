import pytest

from cmcongruence.arith import Fp2Elem, primes_in
from cmcongruence.poly import ModPolynomial
from cmcongruence.supersingular import (
    BadPrime,
    OracleBoundExceeded,
    hasse_polynomial,
    hasse_polynomial_powering,
    is_supersingular_oracle,
    ss_polynomials,
    supersingular_j_oracle,
)


def test_small_primes():
    for p in (5, 7, 11):
        assert ss_polynomials(p).s_tilde.degree == 0
    assert str(ss_polynomials(13).s) == "x - 5"
    assert str(ss_polynomials(17).s_tilde) == "x - 8"
    d2 = ss_polynomials(2)
    assert str(d2.s) == "x" and d2.roots == [Fp2Elem(0, 0, 2)]


def test_e0_e1():
    for p in primes_in(5, 200):
        d = ss_polynomials(p)
        assert d.e0 == (p % 3 == 2) and d.e1 == (p % 4 == 3)
        # total count of supersingular j: floor(p/12) + e0 + e1
        assert len(d.roots) == p // 12 + d.e0 + d.e1


def test_p79():
    d = ss_polynomials(79)
    assert d.s_tilde.degree == 6
    assert d.s.degree == 7
    assert Fp2Elem(64, 0, 79) in d.roots


def test_multinomial_matches_powering():
    for p in primes_in(5, 60):
        assert hasse_polynomial(p) == hasse_polynomial_powering(p)


def test_roots_match_point_counts():
    for p in (5, 7, 11, 13, 17, 29, 37, 59):
        assert set(ss_polynomials(p).roots) == supersingular_j_oracle(p)


def test_known_supersingular_values():
    # j = 0 is supersingular iff p = 2 mod 3, j = 1728 iff p = 3 mod 4
    for p in primes_in(5, 60):
        assert is_supersingular_oracle(0, p) == (p % 3 == 2)
        assert is_supersingular_oracle(1728, p) == (p % 4 == 3)


def test_conjugate_pairs():
    # S~_p has F_p coefficients, so its F_{p^2} roots are closed under Frobenius
    for p in (79, 101, 131, 197):
        roots = set(ss_polynomials(p).roots)
        assert {r.frobenius() for r in roots} == roots


def test_errors():
    with pytest.raises(BadPrime):
        ss_polynomials(15)
    with pytest.raises(OracleBoundExceeded):
        supersingular_j_oracle(61)


def test_cache_round_trip(tmp_path):
    from cmcongruence import cache

    cache.set_default_cache(tmp_path)
    ss_polynomials.cache_clear()
    a = ss_polynomials(101)
    ss_polynomials.cache_clear()
    b = ss_polynomials(101)
    assert (tmp_path / "ssp" / "101.json").exists()
    assert a.s_tilde == b.s_tilde and (a.e0, a.e1) == (b.e0, b.e1)
    assert isinstance(b.s_tilde, ModPolynomial)
    ss_polynomials.cache_clear()
