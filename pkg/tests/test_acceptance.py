"""Acceptance experiments, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal
summary (and to stdout, visible with ``-s``).  Run on its own with

    pytest tests/test_acceptance.py -v
"""

from contextlib import contextmanager
from fractions import Fraction
import random
import time

import pytest

from cmcongruence.arith import kronecker, primes_in
from cmcongruence.classfield import class_number, eisenstein_hp, fundamental_discriminants
from cmcongruence.congruence import (
    certify_congruence,
    decile_densities,
    divisibility_check,
    hecke_identity,
    multiplicity_report,
    scan_surjectivity,
    uniform_range_check,
)
from cmcongruence.hilbert import hilbert_class_poly, hilbert_class_poly_with_residual
from cmcongruence.koike import delta_p, koike_series, verify_koike_corollary
from cmcongruence.congruence import express_in_j
from cmcongruence.qseries import apply_up, delta_series, j_series, lehner_violations, poly_in_j
from cmcongruence.quaternion import deuring_cross_check, growth_slope, theta_for
from cmcongruence.supersingular import ss_polynomials, supersingular_j_oracle

from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(n: int, title: str, limit: float | None = None):
    t0 = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - t0
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    except BaseException as exc:
        line = f"criterion {n:2d} FAIL  {title}: {str(exc).splitlines()[0][:160]}"
        ACCEPTANCE_LINES[n] = line
        print(line)
        raise
    line = f"criterion {n:2d} PASS  {title} ({time.perf_counter() - t0:.2f}s)"
    ACCEPTANCE_LINES[n] = line
    print(line)


def test_c01_j_expansion():
    with criterion(1, "j = q^-1 + 744 + 196884 q + ...", limit=1.0):
        s = j_series(200)
        assert (s[-1], s[0], s[1]) == (1, 744, 196884)
        assert s.order == 200


def test_c02_lehner():
    with criterion(2, "Lehner congruences for n <= 100", limit=5.0):
        bad = lehner_violations(100)
        assert bad == [], f"violations {bad[:5]}"


def test_c03_u13():
    with criterion(3, "(j - 744) | U(13) = -Delta mod 13 through 15 coefficients"):
        j = j_series(13 * 15, 13)
        lhs = apply_up(j - 744, 13)
        rhs = -delta_series(15, 13)
        assert lhs.agrees_with(rhs, 15)
        assert lhs.val == 1 and lhs.order >= 15


def test_c04_supersingular():
    with criterion(4, "deg S~_p = floor(p/12) for p <= 500, roots match point counts for p <= 60", limit=120.0):
        wrong = [p for p in primes_in(5, 500) if ss_polynomials(p).s_tilde.degree != p // 12]
        assert wrong == [], f"degree wrong at {wrong}"
        mismatch = [p for p in primes_in(5, 60) if set(ss_polynomials(p).roots) != supersingular_j_oracle(p)]
        assert mismatch == [], f"root sets differ at {mismatch}"


def test_c05_hilbert():
    with criterion(5, "H_3 = x; H_239 monic of degree 15 with residual < 0.01", limit=10.0):
        assert hilbert_class_poly(3).coeffs == (0, 1)
        P, resid, _ = hilbert_class_poly_with_residual(239)
        assert P.is_monic() and P.degree == 15
        assert resid < 0.01


def test_c06_counterexample():
    with criterion(6, "D=239, p=79: refused, series 44, 2, 62, multiplicity of 64 is 1", limit=30.0):
        cert = certify_congruence(239, 79)
        assert not cert.certified
        assert cert.series.coefficients(0, 2) == [44, 2, 62]
        rep = multiplicity_report(239, 79)
        assert rep.multiplicity(64) == 1
        assert (-15) % 79 == 64
        assert divisibility_check(239, 79, 1)
        assert not divisibility_check(239, 79, 2)


def test_c07_uniform_range():
    with criterion(7, "S_p^2 | H_D and constant congruence c_D(0) for D < 239", limit=900.0):
        tested, failures = uniform_range_check(239)
        assert tested > 0
        summary = ", ".join(f"({f.D},{f.p})" for f in failures[:12])
        assert not failures, f"{len(failures)} of {tested} pairs fail, e.g. {summary}"


SAMPLED_PAIRS = [(3, 5), (4, 7), (7, 11), (23, 5), (23, 7), (31, 13), (47, 13), (59, 11), (119, 11), (71, 17)]


def test_c08_hecke_identity():
    with criterion(8, "p F|U(p) = F|T0(p) - F(j(pz)) over Z through q^100 for 10 pairs"):
        for D, p in SAMPLED_PAIRS:
            lhs, t0, vp, G = hecke_identity(hilbert_class_poly(D), p, 100)
            assert lhs.order >= 100 and t0.order >= 100 and vp.order >= 100
            assert lhs == (t0 - vp).truncate(100), f"identity fails for D={D}, p={p}"
            assert G.degree == p * class_number(D)


def test_c09_koike():
    with criterion(9, "delta_p polynomial for small p; S~_p(j) d polynomial; corollary mod p^2", limit=120.0):
        for p in (2, 3, 5, 7, 11):
            assert delta_p(p).is_polynomial
        for p in (13, 17, 19, 23):
            S = ss_polynomials(p).s_tilde
            prod = (poly_in_j(S, 200, p) * koike_series(p, 200)).truncate(150)
            express_in_j(prod)  # raises NotPolynomial otherwise
        rng = random.Random(20240601)
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23):
            for _ in range(20):
                F = [rng.randint(-100, 100) for _ in range(rng.randint(1, 3) + 1)]
                assert verify_koike_corollary(F, p, 100), f"corollary fails for p={p}, F={F}"


def test_c10_theta_eisenstein():
    with criterion(10, "a_R(D) = 24/(p-1) H_p(D) at type-number-one p, D <= 200", limit=120.0):
        for p in (2, 3, 5, 7, 13):
            theta = theta_for(p, 200)
            for D in fundamental_discriminants(3, 200):
                if kronecker(-D, p) == 1:
                    continue
                assert theta[D] == Fraction(24, p - 1) * eisenstein_hp(D, p), f"p={p}, D={D}"


def test_c11_deuring():
    with criterion(11, "p=13: multiplicity of (x-5) = h(-D) = h(O_D,R)/2 for inert D <= 300", limit=300.0):
        n = 0
        for D in fundamental_discriminants(3, 300):
            if kronecker(-D, 13) != -1:
                continue
            rep = deuring_cross_check(D, 13)
            assert rep.per_curve == class_number(D), f"D={D}"
            assert 2 * rep.per_curve == rep.h_order, f"D={D}"
            n += 1
        assert n > 30


def test_c12_substitute_for_surjectivity():
    with criterion(12, "p=13 exception density non-increasing after first decile; cusp slope < 0.5"):
        exc = scan_surjectivity(13, 2, 1, 2000)
        dens = decile_densities(13, exc, 1, 2000)
        tail = dens[1:]
        assert all(a >= b for a, b in zip(tail, tail[1:])), f"densities {dens}"
        for p in (11, 17, 19, 23):
            slope, npts = growth_slope(p, 2000)
            assert npts > 100
            assert slope < 0.5, f"p={p}: slope {slope:.3f}"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
