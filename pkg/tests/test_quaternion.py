from fractions import Fraction
import itertools
import math

import numpy as np
import pytest

from cmcongruence.arith import kronecker, primes_in
from cmcongruence.classfield import class_number, fundamental_discriminants
from cmcongruence.quaternion import (
    QuaternionAlg,
    build_algebra,
    cusp_coefficient,
    deuring_cross_check,
    embedding_numbers,
    hilbert_symbol,
    inseparable_ideal,
    setup,
    theta_for,
)

PRIMES = primes_in(2, 200)


def local_solvable(a, b, p, k=3):
    """Does a x^2 + b y^2 = z^2 have a solution mod p^k with p not dividing all of x, y, z?"""
    m = p**k
    r = np.arange(m, dtype=np.int64)
    sq = set((r * r % m).tolist())
    sq_unit = set((r[r % p != 0] ** 2 % m).tolist())
    X, Y = np.meshgrid(r, r, indexing="ij")
    V = (a * X * X + b * Y * Y) % m
    prim = (X % p != 0) | (Y % p != 0)
    return bool(set(V[prim].tolist()) & sq) or bool(set(V[~prim].tolist()) & sq_unit)


def test_hilbert_symbol_examples():
    assert hilbert_symbol(-1, -1, math.inf) == -1
    assert hilbert_symbol(-1, -7, 7) == -1
    assert hilbert_symbol(-1, -7, 3) == 1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hilbert_symbol_against_local_search(p):
    for a in (-1, -2, -3, 2, 3, 5, -5, 7, -7, 6, -6, 10, -10, 14):
        for b in (-1, -2, -3, 3, -5, 7, -7, 5):
            want = 1 if local_solvable(a, b, p) else -1
            assert hilbert_symbol(a, b, p) == want, (a, b, p)


def test_product_formula():
    for a, b in itertools.product([-1, -2, -3, 5, -7, 6, -11, 13], repeat=2):
        places = {2, 3, 5, 7, 11, 13}
        prod = hilbert_symbol(a, b, math.inf)
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1


def test_algebras_ramify_exactly_at_p_and_infinity():
    for p in PRIMES:
        alg = build_algebra(p)
        assert alg.ramified_places() == {p, math.inf}
    assert build_algebra(2) == QuaternionAlg(1, 1)
    assert build_algebra(7) == QuaternionAlg(1, 7)
    assert build_algebra(79) == QuaternionAlg(1, 79)


def test_orders_are_maximal_orders():
    for p in PRIMES:
        R = setup(p).order
        assert R.reduced_discriminant() == p
        assert R.is_order()


def test_inseparable_ideal_all_p():
    for p in PRIMES:
        R = setup(p).order
        P = inseparable_ideal(R, p)
        assert P.index_in(R.lattice) == p * p
        assert P.contains_lattice(R.lattice.scaled(p))


def test_unit_counts():
    assert setup(2).w_R == 24
    assert setup(3).w_R == 12
    for p in PRIMES[2:]:
        assert setup(p).w_R in (2, 4, 6)


def test_trace_zero_lattice():
    for p in PRIMES:
        L = setup(p).lattice
        assert len(L.basis) == 3
        assert all(v[0] == 0 for v in L.basis)
        G = np.array([[float(c) for c in r] for r in L.gram])
        assert np.all(np.linalg.eigvalsh(G) > 0)
        assert L.gram_is_integral()
        assert L.gram_det == 4 * p * p  # recorded per p; consistent with level 4p
    theta = theta_for(2, 10)
    assert min(m for m in range(1, 11) if theta[m]) == 3


def test_theta_symmetry_and_constant():
    for p in (2, 3, 11, 13, 79):
        theta = theta_for(p, 300)
        assert theta[0] == 1
        assert all(theta[m] % 2 == 0 for m in range(1, 301))


def test_theta_against_box_count():
    for p, M in ((2, 60), (13, 120), (17, 260)):
        L = setup(p).lattice
        G2 = np.array([[int(2 * c) for c in r] for r in L.gram])
        lam = np.linalg.eigvalsh(G2 / 2.0).min()
        r = int(math.sqrt(M / lam)) + 1
        rng = np.arange(-r, r + 1)
        X = np.stack(np.meshgrid(rng, rng, rng, indexing="ij"), -1).reshape(-1, 3)
        vals = np.einsum("ni,ij,nj->n", X, G2, X) // 2
        want = np.bincount(vals[vals <= M], minlength=M + 1)
        assert list(theta_for(p, M).coeffs) == want.tolist()


def _r_elements_of_norm(R, n):
    """All elements of R with reduced norm n, by box search on the basis coordinates."""
    G = np.array([[float(c) for c in r] for r in R.norm_gram()])
    lam = np.linalg.eigvalsh(G).min()
    r = int(math.sqrt(n / lam)) + 1
    out = []
    for c in itertools.product(range(-r, r + 1), repeat=4):
        x = tuple(sum(ci * b[k] for ci, b in zip(c, R.basis)) for k in range(4))
        if R.algebra.norm(x) == n:
            out.append(x)
    return out


def _in_lattice(R, x):
    return x in R.lattice


def orbit_count(p, m):
    """Optimal embeddings of O_m into R up to conjugation by R^x, counted directly."""
    S = setup(p)
    R, alg = S.order, S.algebra
    units = _r_elements_of_norm(R, 1)
    # generator g of O_m: sqrt(-m)/2 if m = 0 mod 4, (1 + sqrt(-m))/2 otherwise
    t, n = (0, m // 4) if m % 4 == 0 else (1, (1 + m) // 4)
    gens = [x for x in _r_elements_of_norm(R, n) if 2 * x[0] == t]

    def optimal(x):
        s = tuple(2 * c for c in x)
        s = (s[0] - t,) + s[1:]  # s = sqrt(-m)
        f = 2
        while f * f <= m:
            if m % (f * f) == 0 and (m // (f * f)) % 4 in (0, 3):
                mm = m // (f * f)
                y = tuple(c / f for c in s)
                g = tuple(c / 2 for c in y) if mm % 4 == 0 else tuple(
                    (Fraction(1) + y[0]) / 2 if k == 0 else y[k] / 2 for k in range(4)
                )
                if _in_lattice(R, g):
                    return False
            f += 1
        return True

    gens = {x for x in gens if optimal(x)}
    seen, orbits = set(), 0
    for x in gens:
        if x in seen:
            continue
        orbits += 1
        for u in units:
            seen.add(alg.mul(alg.mul(u, x), alg.conj(u)))
    return orbits


@pytest.mark.parametrize("p,m", [(2, 3), (2, 4), (2, 8), (2, 11), (3, 3), (3, 8), (3, 11), (13, 7), (13, 8), (13, 20), (5, 3), (5, 12)])
def test_embedding_numbers_match_orbit_count(p, m):
    assert embedding_numbers(theta_for(p, 40))[m] == orbit_count(p, m)


def test_embedding_numbers_p2_m3():
    # a_R(3) = 8 vectors, 12 effective units, stabilizer of order 3: two orbits
    theta = theta_for(2, 10)
    assert theta[3] == 8
    assert embedding_numbers(theta)[3] == 2


def test_embedding_numbers_vanish_at_split_primes():
    for p in (5, 13, 23):
        emb = embedding_numbers(theta_for(p, 400))
        for m, h in emb.items():
            from cmcongruence.classfield import fundamental_part

            if kronecker(-fundamental_part(m)[0], p) == 1:
                assert h == 0


def test_p13_inert_is_twice_class_number():
    emb = embedding_numbers(theta_for(13, 300))
    for D in fundamental_discriminants(3, 300):
        if kronecker(-D, 13) == -1:
            assert emb[D] == 2 * class_number(D)


def test_deuring_aggregate_all_small_primes():
    for p in (3, 5, 7, 11, 17, 19, 23):
        for D in fundamental_discriminants(3, 150):
            if kronecker(-D, p) != 1:
                rep = deuring_cross_check(D, p)
                assert rep.multiplicity_total == class_number(D)


def test_deuring_p2_exploratory():
    rep = deuring_cross_check(3, 2)
    assert rep.epsilon == Fraction(1, 2) and rep.h_order == 2 and rep.per_curve == 1


def test_cusp_part_smaller_than_theta_coefficient():
    """Spec invariant: |c_L(D)| < a_R(D) for inert fundamental D <= 500 with a_R(D) > 0."""
    bad = []
    for p in (11, 17, 19, 23):
        theta = theta_for(p, 500)
        for D in fundamental_discriminants(3, 500):
            if kronecker(-D, p) == -1 and theta[D] > 0 and not abs(cusp_coefficient(theta, D)) < theta[D]:
                bad.append((p, D, theta[D], cusp_coefficient(theta, D)))
    assert not bad, f"|c_L(D)| >= a_R(D) at {bad}"
