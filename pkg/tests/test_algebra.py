from fractions import Fraction as F

import pytest

from sympgt.algebra import (
    INF,
    LaurentPoly,
    QSeriesCtx,
    basic_hypergeometric_3phi2,
    big_q_hermite,
    expanding_bracket,
    q_binomial,
    q_factorial,
    q_hermite,
    q_pochhammer,
)

QS = [F(1, 3), F(1, 2), F(2, 5)]


def test_q_pochhammer_small():
    ctx = QSeriesCtx(F(1, 2))
    assert q_pochhammer(ctx, F(1, 3), 0) == 1
    assert q_pochhammer(ctx, F(1, 3), 1) == F(2, 3)
    assert q_pochhammer(ctx, F(1, 3), 2) == F(2, 3) * (1 - F(1, 6))


def test_q_pochhammer_infinite_truncation_stability():
    a = q_pochhammer(QSeriesCtx(0.4, truncation=60), 0.4, INF)
    b = q_pochhammer(QSeriesCtx(0.4, truncation=200), 0.4, INF)
    assert abs(a - b) < 1e-12


def test_q_pochhammer_infinite_exact_rejected():
    with pytest.raises(ValueError):
        q_pochhammer(QSeriesCtx(F(1, 2)), F(1, 3), INF)


@pytest.mark.parametrize("q", QS)
def test_q_binomial_symmetry_and_range(q):
    ctx = QSeriesCtx(q)
    for n in range(13):
        for k in range(n + 1):
            assert q_binomial(ctx, n, k) == q_binomial(ctx, n, n - k)
    with pytest.raises(ValueError):
        q_binomial(ctx, 3, -1)
    with pytest.raises(ValueError):
        q_binomial(ctx, 3, 4)


@pytest.mark.parametrize("q", QS)
def test_q_binomial_identities(q):
    ctx = QSeriesCtx(q)
    B = lambda n, k: q_binomial(ctx, n, k)
    for n in range(1, 11):
        for k in range(n + 1):
            # factorial form
            assert B(n, k) == q_factorial(ctx, n) / (q_factorial(ctx, k) * q_factorial(ctx, n - k))
            # Pascal recurrences, both arms
            if 1 <= k <= n - 1:
                assert B(n, k) == B(n - 1, k - 1) + q ** k * B(n - 1, k)
                assert B(n, k) == q ** (n - k) * B(n - 1, k - 1) + B(n - 1, k)
            # absorption
            if k >= 1:
                assert (1 - q ** k) * B(n, k) == (1 - q ** n) * B(n - 1, k - 1)


def test_q_factorial_classical_limit():
    import math

    ctx = QSeriesCtx(1 - 1e-9)
    for n in range(1, 9):
        assert abs(q_factorial(ctx, n) - math.factorial(n)) < 1e-5 * math.factorial(n)


def test_laurent_ring_axioms():
    x = LaurentPoly.variable(2, 0)
    y = LaurentPoly.variable(2, 1)
    p = 3 * x + y ** 2 - LaurentPoly.constant(2, F(1, 2))
    r = x * y - y
    s = x ** 3 + 2 * r
    assert (p + r) + s == p + (r + s)
    assert p * (r + s) == p * r + p * s
    assert p * r == r * p
    assert p - p == LaurentPoly.zero(2)
    assert p * LaurentPoly.one(2) == p


def test_laurent_inverse_and_eval():
    a = LaurentPoly.variable(1, 0)
    p = a ** 2 + a.substitute_inverse(1) ** 2
    assert p.evaluate((F(2),)) == F(17, 4)
    assert p.substitute_inverse(1) == p


def test_laurent_canonical_roundtrip():
    p = LaurentPoly(2, {(2, -1): F(3, 7), (0, 0): -2, (-1, 4): F(1, 2)})
    text = p.canonical()
    assert LaurentPoly.parse(text, 2) == p
    assert LaurentPoly.parse("0", 2) == LaurentPoly.zero(2)


@pytest.mark.parametrize("q", QS)
def test_q_hermite_palindromic(q):
    ctx = QSeriesCtx(q)
    for l in range(7):
        h = q_hermite(ctx, l)
        assert h.substitute_inverse(1) == h
        # top coefficient is monic
        assert h.coefficient((l,)) == 1


def test_q_hermite_q0_is_type_c_character_rank1():
    # at q=0 all q-binomials are 1, so H_l(a|0) = sum_{k=0}^{l} a^{2k-l}
    ctx = QSeriesCtx(F(0))
    for l in range(6):
        h = q_hermite(ctx, l)
        assert all(h.coefficient((2 * k - l,)) == 1 for k in range(l + 1))


def test_3phi2_terminating():
    ctx = QSeriesCtx(F(1, 2))
    q = F(1, 2)
    # a1 = q^{-2} makes the series terminate after 3 terms
    val = basic_hypergeometric_3phi2(ctx, (q ** -2, F(1, 3), F(1, 5)), (F(0), F(0)), q)
    s = F(0)
    term = F(1)
    for k in range(3):
        s += term
        num = (1 - q ** -2 * q ** k) * (1 - F(1, 3) * q ** k) * (1 - F(1, 5) * q ** k)
        term = term * num / (1 - q ** (k + 1)) * q
    assert val == s


@pytest.mark.parametrize("q", QS)
def test_big_q_hermite_two_routes_agree(q):
    ctx = QSeriesCtx(q)
    for t0 in (F(1, 3), F(7, 10)):
        for x in (F(2), F(3, 2), F(5, 7)):
            for l in range(6):
                assert big_q_hermite(ctx, l, t0, x, method="phi") == \
                    big_q_hermite(ctx, l, t0, x, method="expansion")


def test_big_q_hermite_small_t0_limit_is_q_hermite():
    # exact arithmetic avoids the catastrophic cancellation of the small-t0
    # regime; the limit t0 -> 0 recovers the one-parameter polynomials
    ctx = QSeriesCtx(F(1, 2))
    x = F(3)
    t0 = F(1, 10 ** 8)
    for l in range(6):
        h = q_hermite(ctx, l).evaluate((x,))
        v = big_q_hermite(ctx, l, t0, x, method="phi")
        assert abs(float(v - h)) < 1e-5 * max(1.0, abs(float(h)))


def test_expanding_bracket():
    ctx = QSeriesCtx(F(1, 2))
    t0, x = F(1, 3), F(2)
    assert expanding_bracket(ctx, x, t0, 0) == 1
    assert expanding_bracket(ctx, x, t0, 1) == x + 1 / x - t0 - 1 / t0
    v2 = (x + 1 / x - t0 - 1 / t0) * (x + 1 / x - t0 * F(1, 2) - 1 / (t0 * F(1, 2)))
    assert expanding_bracket(ctx, x, t0, 2) == v2
