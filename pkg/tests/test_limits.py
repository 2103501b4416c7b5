"""Scaling-limit checks: lattice sums, Givental quadrature, Bessel route."""

import math

import pytest

from sympgt.algebra import QSeriesCtx
from sympgt.characters import qwhittaker_pattern_sum
from sympgt.limits import (ScalingCtx, bessel_k, convergence_table,
                           out_of_order, scaled_qwhittaker, so3_whittaker,
                           so_eigen_residual, so_whittaker)


def test_scaling_ctx_fields():
    s = ScalingCtx(0.1, (0.7,))
    assert s.m == 24
    assert math.isclose(s.q, math.exp(-0.1))
    assert math.isclose(s.A, -math.pi ** 2 / 0.6 - 0.5 * math.log(0.1 / (2 * math.pi)))
    with pytest.raises(ValueError):
        ScalingCtx(1.5, (0.7,))


def test_snap_distance():
    s = ScalingCtx(0.1, (0.7,))
    assert abs(s.snap_distance((0.55,)) - 0.05) < 1e-12
    assert s.snap_distance((0.3,)) < 1e-12


def test_z_shape_rejects_disordered():
    s = ScalingCtx(0.1, (0.7, 0.3))
    with pytest.raises(ValueError):
        s.z_shape(2, (0.0, 10.0))
    assert out_of_order((0.0, 1.0)) == (0,)
    assert out_of_order((-1.0,)) == (0,)
    assert out_of_order((2.0, 1.0)) == ()


def test_f_scaled_expansion():
    # f_1(y,eps) e^{-A} -> e^{e^{-y}} and f_2 -> 1 as eps -> 0
    s = ScalingCtx(0.02, (0.7,))
    target = math.exp(math.exp(-1.0))
    assert abs(s.f_scaled(1, 1.0) - target) / target < 3e-2
    assert abs(s.f_scaled(2, 1.0) - 1.0) < 3e-2


def test_bessel_symmetry_and_decay():
    assert abs(bessel_k(0.7j, 1.5) - bessel_k(-0.7j, 1.5)) < 1e-12
    assert abs(bessel_k(0.5, 2.0) - bessel_k(-0.5, 2.0)) < 1e-12
    assert bessel_k(0.3j, 10.0) / bessel_k(0.3j, 8.0) < math.exp(-1.9)


def test_givental_matches_bessel():
    for lam, x in [(0.7j, 0.5), (0.3j, -1.0), (0.5, 1.0)]:
        g = so_whittaker(1, lam, x)
        b = so3_whittaker(lam, x)
        assert abs(g - b) / abs(b) < 1e-8
        assert abs(g.imag) < 1e-12 * abs(g)


def test_givental_doubling_stable():
    g1 = so_whittaker(1, 0.7j, 0.5, nodes=2000)
    g2 = so_whittaker(1, 0.7j, 0.5, nodes=4000)
    assert abs(g1 - g2) < 1e-10


def test_givental_positive_at_zero_order():
    assert so_whittaker(1, 0.0, 0.3).real > 0


def test_so_eigen_residual():
    assert so_eigen_residual(0.7j, 0.3) < 1e-4
    assert so_eigen_residual(0.4, -0.5) < 1e-4


def test_rank_one_convergence_ladder():
    rows = convergence_table(1, (0.7,), [-1.0, 0.0, 1.0, 2.0], [0.1, 0.05, 0.02])
    by_x: dict = {}
    for r in rows:
        by_x.setdefault(r["x"], []).append(r["abs_error"])
        assert abs(r["value"].imag) < 1e-8 * abs(r["value"])
    for errs in by_x.values():
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 5e-2


def test_rank_two_matches_exact_character():
    # coarse mesh keeps the lattice small enough for the exact pattern sum
    eps = 0.5
    s = ScalingCtx(eps, (0.7, 0.3))
    x = (1.0, 0.2)
    z = s.z_shape(2, x)
    poly = qwhittaker_pattern_sum(4, z, QSeriesCtx(q=s.q))
    a = [complex(math.cos(eps * l), math.sin(eps * l)) for l in s.lam]
    direct = eps ** 4 * math.exp(4 * s.A) * poly.evaluate(a)
    val = scaled_qwhittaker(s, 2, x)
    assert abs(val - direct) < 1e-12 * abs(direct)


def test_rank_two_approaches_givental():
    target = so_whittaker(2, (0.7j, 0.3j), (1.0, 0.2), nodes=2400)
    errs = []
    for eps in (0.1, 0.05):
        s = ScalingCtx(eps, (0.7, 0.3))
        errs.append(abs(scaled_qwhittaker(s, 2, (1.0, 0.2)) - target))
    assert errs[0] > errs[1]
    assert errs[1] < 1e-2


def test_out_of_order_envelope():
    # |Psi| shrinks under exp(-c* e^{gap/2}) with c*=0.8 on out-of-order points
    s = ScalingCtx(0.1, (0.7, 0.3))
    seq = []
    for gap in (1.0, 2.0, 3.0):
        v = abs(scaled_qwhittaker(s, 2, (0.0, gap)))
        seq.append(math.log(v) + 0.8 * math.exp(gap / 2))
    assert seq[0] > seq[1] > seq[2]
    s1 = ScalingCtx(0.05, (0.7,))
    seq1 = [math.log(abs(scaled_qwhittaker(s1, 1, (x,)))) + 0.8 * math.exp(-x / 2)
            for x in (-1.0, -2.0, -3.0)]
    assert seq1[0] > seq1[1] > seq1[2]


def test_rank_limits_enforced():
    s = ScalingCtx(0.1, (0.7, 0.3, 0.1))
    with pytest.raises(ValueError):
        scaled_qwhittaker(s, 3, (2.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        so_whittaker(3, (0.7j, 0.3j, 0.1j), (2.0, 1.0, 0.0))
