from fractions import Fraction as F

import pytest

from sympgt.algebra import LaurentPoly, QSeriesCtx, q_hermite
from sympgt.characters import (
    cauchy_identity_check,
    monomial_symmetric,
    pieri_apply,
    pieri_coefficients,
    qwhittaker_kernel,
    qwhittaker_pattern_sum,
    qwhittaker_recursion,
    schur_typeA,
    symplectic_schur_patterns,
    symplectic_schur_tableaux,
    symplectic_schur_weyl,
)
from sympgt.combinatorics import partitions_max_weight

POINTS2 = [(F(2), F(3)), (F(1, 2), F(5)), (F(3, 7), F(7, 2)),
           (F(5, 3), F(2, 9)), (F(4), F(9, 5))]
POINTS3 = [(F(2), F(3), F(5)), (F(1, 2), F(3, 4), F(7, 5)),
           (F(5, 2), F(7, 3), F(9, 4)), (F(3), F(1, 5), F(8, 3)),
           (F(11, 6), F(13, 7), F(2, 11))]


def test_monomial_symmetric_examples():
    assert monomial_symmetric(1, (2,)) == LaurentPoly(1, {(2,): 1, (-2,): 1})
    m10 = monomial_symmetric(2, (1,))
    assert m10 == LaurentPoly(2, {(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1})
    m11 = monomial_symmetric(2, (1, 1))
    assert m11 == LaurentPoly(2, {(1, 1): 1, (1, -1): 1, (-1, 1): 1, (-1, -1): 1})
    assert len(m11.terms) == 4  # orbit deduplicated


def test_symplectic_schur_rank1_geometric():
    for l in range(5):
        expect = LaurentPoly(1, {(2 * k - l,): 1 for k in range(l + 1)})
        assert symplectic_schur_tableaux(1, (l,)) == expect
        for a in (F(2), F(3, 5), F(7, 4)):
            assert symplectic_schur_weyl(1, (l,), (a,)) == expect.evaluate((a,))


def test_symplectic_schur_11_example():
    s = symplectic_schur_tableaux(2, (1, 1))
    expect = LaurentPoly(2, {(1, 1): 1, (1, -1): 1, (-1, 1): 1, (-1, -1): 1, (0, 0): 1})
    assert s == expect


def test_weyl_vs_tableaux_vs_patterns():
    for n, points in ((2, POINTS2), (3, POINTS3)):
        for lam in partitions_max_weight(n, 4):
            st = symplectic_schur_tableaux(n, lam)
            assert symplectic_schur_patterns(n, lam) == st
            for a in points:
                assert symplectic_schur_weyl(n, lam, a) == st.evaluate(a)


def test_weyl_singular_point_raises():
    with pytest.raises(ZeroDivisionError):
        symplectic_schur_weyl(1, (2,), (F(1),))


def test_pattern_sum_rank1_is_q_hermite():
    ctx = QSeriesCtx(F(1, 3))
    assert qwhittaker_pattern_sum(2, (0,), ctx) == LaurentPoly.one(1)
    for l in range(6):
        assert qwhittaker_pattern_sum(2, (l,), ctx) == q_hermite(ctx, l)


@pytest.mark.parametrize("q", [F(1, 3), F(2, 5)])
def test_pattern_sum_equals_recursion(q):
    ctx = QSeriesCtx(q)
    for n in (2, 3):
        maxw = 5 if n == 2 else 3
        for lam in partitions_max_weight(n, maxw):
            assert qwhittaker_pattern_sum(2 * n, lam, ctx) == \
                qwhittaker_recursion(n, lam, ctx)


def test_kernel_no_interlacing_is_zero():
    ctx = QSeriesCtx(F(1, 3))
    assert qwhittaker_kernel(ctx, (5,), (1, 1), 2) == LaurentPoly.zero(1)


def test_q_to_zero_degenerates_to_symplectic_schur():
    ctx = QSeriesCtx(F(0))
    for n in (1, 2, 3):
        for lam in partitions_max_weight(n, 4):
            assert qwhittaker_recursion(n, lam, ctx) == symplectic_schur_tableaux(n, lam)


def test_wn_invariance():
    ctx = QSeriesCtx(F(2, 5))
    for n in (2, 3):
        for lam in partitions_max_weight(n, 3):
            p = qwhittaker_recursion(n, lam, ctx)
            assert p.permute_variables(tuple(range(1, n)) + (0,)) == p
            for i in range(1, n + 1):
                assert p.substitute_inverse(i) == p


def test_triangularity():
    ctx = QSeriesCtx(F(1, 3))
    for n in (2, 3):
        for lam in partitions_max_weight(n, 4):
            p = qwhittaker_recursion(n, lam, ctx)
            from sympgt.combinatorics import padded
            assert p.coefficient(padded(lam, n)) == 1


def test_pieri_rank1():
    ctx = QSeriesCtx(F(1, 2))
    a = F(3, 2)
    for k in range(1, 6):
        g = lambda mu: q_hermite(ctx, mu[0] if mu else 0).evaluate((a,))
        lhs = pieri_apply(1, (k,), ctx, g)
        assert lhs == (a + 1 / a) * q_hermite(ctx, k).evaluate((a,))


def test_pieri_eigenrelation_rank2():
    ctx = QSeriesCtx(F(1, 2))
    a = (F(2), F(3))
    lam = (2, 1)
    g = lambda mu: qwhittaker_recursion(2, mu, ctx).evaluate(a)
    lhs = pieri_apply(2, lam, ctx, g)
    ev = sum(x + 1 / x for x in a)
    assert lhs == ev * g(lam)


def test_pieri_zero_coefficients():
    ctx = QSeriesCtx(F(1, 2))
    coeffs = pieri_coefficients(2, (2, 2), ctx)
    assert (2, +1) not in coeffs   # equal parts kill the second up move
    coeffs0 = pieri_coefficients(2, (1,), ctx)
    assert (2, -1) not in coeffs0  # lambda_n = 0 kills the last down move


def test_schur_typeA():
    assert schur_typeA(1, (3,)) == LaurentPoly(1, {(3,): 1})
    s21 = schur_typeA(3, (2, 1))
    assert sum(s21.terms.values()) == 8
    assert s21.evaluate((F(1), F(1), F(1))) == 8


def test_cauchy_identity_truncation():
    # residual decays like (b*max(a,1/a))^M = (2/3)^M here
    r8 = cauchy_identity_check(1, 8, (F(1, 2),), (F(1, 3),))
    r12 = cauchy_identity_check(1, 12, (F(1, 2),), (F(1, 3),))
    assert r8 < (2 / 3) ** 9 / (1 - 2 / 3) * 4
    assert r12 < 0.3 * r8
    assert cauchy_identity_check(2, 6, (F(1, 2), F(2, 5)), (F(0), F(0))) == 0
