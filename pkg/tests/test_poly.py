import random

from hypothesis import given, settings, strategies as st

from cmcongruence.arith import Fp2Elem
from cmcongruence.poly import IntPolynomial, ModPolynomial, format_poly

PRIMES = [2, 3, 5, 7, 13, 79]


def polys(p, max_deg=12):
    return st.lists(st.integers(0, p - 1), min_size=0, max_size=max_deg + 1).map(lambda c: ModPolynomial(c, p))


prime_and_polys = st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(polys(p), polys(p)))


@settings(max_examples=200)
@given(prime_and_polys)
def test_division_identity(fg):
    f, g = fg
    if g.is_zero():
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@settings(max_examples=150)
@given(prime_and_polys)
def test_gcd_divides_both(fg):
    f, g = fg
    d = f.gcd(g)
    if d.is_zero():
        assert f.is_zero() and g.is_zero()
        return
    assert (f % d).is_zero() and (g % d).is_zero()


def fp2_brute_roots(f):
    p = f.p
    return {Fp2Elem(a, b, p) for a in range(p) for b in range(p) if not f.eval_fp2(Fp2Elem(a, b, p))}


def test_roots_fp2_against_brute_force():
    rng = random.Random(7)
    for p in (3, 5, 7, 13):
        for _ in range(120):
            f = ModPolynomial([rng.randrange(p) for _ in range(rng.randint(1, 6))] + [1], p)
            roots = f.roots_fp2()
            assert set(roots) == fp2_brute_roots(f)
            assert len(roots) == len(set(roots))


def test_multiplicities():
    p = 13
    f = ModPolynomial([-5, 1], p) ** 3 * ModPolynomial([-2, 1], p)
    assert f.multiplicity(ModPolynomial([-5, 1], p)) == 3
    assert f.root_multiplicity_fp2(Fp2Elem(5, 0, p)) == 3
    assert f.root_multiplicity_fp2(Fp2Elem(4, 0, p)) == 0
    assert not f.is_squarefree()


def test_integer_polynomials():
    P = IntPolynomial.from_roots([1, -2])
    assert P.coeffs == (-2, 1, 1)
    assert P(3) == 10
    assert P.derivative().coeffs == (1, 2)
    assert P.mod(5) == ModPolynomial([3, 1, 1], 5)


def test_formatting():
    assert format_poly([0, 1]) == "x"
    assert format_poly([-5, 1]) == "x - 5"
    assert str(ModPolynomial([8, 1], 13)) == "x - 5"
