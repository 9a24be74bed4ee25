import pytest
from hypothesis import given, settings, strategies as st

from cmcongruence.qseries import (
    OrderOverflow,
    QSeries,
    apply_up,
    apply_vp,
    delta_series,
    e4_series,
    hecke_t0,
    j_series,
    mul_coeffs,
    poly_in_j,
)

# OEIS A000521
J_COEFFS = [1, 744, 196884, 21493760, 864299970, 20245856256, 333202640600, 4252023300096]


def naive_j(N):
    """E_4^3 / Delta by schoolbook products and long division."""
    M = N + 2
    prod = [1] + [0] * M
    for n in range(1, M + 1):
        for _ in range(24):
            for k in range(M, n - 1, -1):
                prod[k] -= prod[k - n]
    sig = [0] + [sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, M + 1)]
    e4 = [1] + [240 * s for s in sig[1:]]

    def mul(a, b):
        out = [0] * (M + 1)
        for i, x in enumerate(a):
            for k, y in enumerate(b[: M + 1 - i]):
                out[i + k] += x * y
        return out

    num = mul(mul(e4, e4), e4)
    quo = []
    rem = num[:]
    for n in range(M + 1):
        c = rem[n]  # prod[0] == 1
        quo.append(c)
        for k in range(n, M + 1):
            rem[k] -= c * prod[k - n]
    return quo[: N + 2]  # coefficients of q^-1 .. q^N


def test_known_coefficients():
    s = j_series(6)
    assert s.coefficients(-1, 6) == J_COEFFS


def test_against_naive_product():
    assert j_series(60).coefficients(-1, 60) == naive_j(60)


def test_reduction_commutes():
    for m in (2, 13, 79, 6241):
        assert j_series(300, m).coefficients(-1, 300) == [c % m for c in j_series(300).coefficients(-1, 300)]


small_lists = st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=60)


@settings(max_examples=150)
@given(small_lists, small_lists, st.one_of(st.none(), st.sampled_from([2, 7, 79, 6241])))
def test_kronecker_product_matches_schoolbook(a, b, m):
    want = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            want[i + k] += x * y
    if m:
        want = [c % m for c in want]
    assert mul_coeffs(a, b, m) == want


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=40), st.integers(-3, 3))
def test_inverse_is_inverse(coeffs, val):
    coeffs = [1] + coeffs
    s = QSeries(coeffs, val, val + len(coeffs) - 1)
    one = s * s.inverse()
    assert one.agrees_with(QSeries.constant(1, one.order), one.order)


def test_order_bookkeeping():
    a = QSeries([1, 2, 3], -1, 5)
    b = QSeries([1, 1], 2, 10)
    assert (a * b).order == min(5 + 2, 10 - 1)
    with pytest.raises(IndexError):
        a[6]
    assert a[4] == 0


@given(st.lists(st.integers(-100, 100), min_size=1, max_size=50), st.integers(-5, 5), st.sampled_from([2, 3, 5, 13]))
def test_u_after_v_is_identity(coeffs, val, p):
    s = QSeries(coeffs, val, val + len(coeffs) + 3)
    assert apply_up(apply_vp(s, p), p) == s


def test_up_order_and_valuation():
    s = QSeries([1] * 30, -7, 22)
    u = apply_up(s, 5)
    assert u.val == -1 and u.order == 4


def test_u13_is_minus_delta():
    lhs = apply_up(j_series(13 * 15, 13) - 744, 13)
    assert lhs.agrees_with(-delta_series(15, 13), 15)


def test_delta_and_e4_start():
    assert delta_series(5).coefficients(1, 5) == [1, -24, 252, -1472, 4830]
    assert e4_series(3).coefficients(0, 3) == [1, 240, 2160, 6720]


def test_poly_in_j_horner():
    F = [5, -3, 1]  # j^2 - 3j + 5
    j = j_series(40)
    assert poly_in_j(F, 30).agrees_with((j * j - j.scale(3) + 5), 30)


def test_t0_maps_j_to_polynomial_in_j():
    # j | T_0(2) has principal part q^-2 only; it equals j^2 - 1488 j + const
    t = hecke_t0([0, 1], 2, 30)
    assert t.val == -2 and t[-2] == 1 and t[-1] == 0
    jj = j_series(40)
    diff = t - (jj * jj - jj.scale(1488)).truncate(30)
    assert diff.valuation in (0, None)
    assert all(diff[n] == 0 for n in range(1, 31))


def test_order_guard():
    with pytest.raises(OrderOverflow):
        j_series(10**9)


def test_json_round_trip():
    s = j_series(20)
    assert QSeries.from_json(s.to_json()) == s
