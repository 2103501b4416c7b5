"""Scaling limits: lattice-rescaled characters converging to classical
so(2n+1) Whittaker functions, plus Givental-integral and Bessel numerics."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import mpmath as mp
import numpy as np

TWO_PI = 2.0 * math.pi


class ScalingCtx:
    """Lattice scaling at mesh eps: q = e^{-eps}, a_l = e^{i eps lam_l},
    shift m(eps) = -floor(log(eps)/eps) and normalizer
    A(eps) = -pi^2/(6 eps) - log(eps/2pi)/2."""

    def __init__(self, eps: float, lam: Sequence[float]):
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must lie in (0,1)")
        self.eps = float(eps)
        self.lam = tuple(float(l) for l in lam)
        self.q = math.exp(-eps)
        self.m = -math.floor(math.log(eps) / eps)
        if self.m < 1:
            raise ValueError("shift m(eps) must be >= 1")
        self.A = -math.pi ** 2 / (6.0 * eps) - 0.5 * math.log(eps / TWO_PI)
        self._L = np.zeros(1)
        self._memo: dict = {}
        self._psi1_table: dict = {}

    # -- log Pochhammer prefix sums ----------------------------------------
    def log_pochhammer(self, kmax: int) -> np.ndarray:
        """Array L with L[k] = log (q;q)_k for 0 <= k <= kmax."""
        if len(self._L) <= kmax:
            start = len(self._L)
            j = np.arange(start, kmax + 1, dtype=float)
            steps = np.log(-np.expm1(-self.eps * j))
            self._L = np.concatenate([self._L, self._L[-1] + np.cumsum(steps)])
        return self._L

    def log_qbinomial(self, n: int, k: int) -> float:
        if not 0 <= k <= n:
            raise ValueError("binomial index out of range")
        L = self.log_pochhammer(n)
        return L[n] - L[k] - L[n - k]

    def f_scaled(self, alpha: int, y: float) -> float:
        """f_alpha(y,eps) e^{-A(eps)}; tends to e^{e^{-y}} (alpha=1) or 1."""
        k = self._floor(y) + alpha * self.m
        if k < 0:
            raise ValueError("Pochhammer index negative; y too small")
        return math.exp(self.log_pochhammer(k)[k] - self.A)

    # -- lattice embedding ---------------------------------------------------
    def _floor(self, v: float) -> int:
        # nudge guards against 0.3/0.1 = 2.999... style representation error
        return math.floor(v / self.eps + 1e-9)

    def z_shape(self, n: int, x: Sequence[float]) -> tuple:
        """Top-level lattice shape for scaled coordinates x (length n)."""
        z = tuple(self._floor(x[i]) + (2 * n - 2 * i) * self.m
                  for i in range(n))
        if any(z[i] < z[i + 1] for i in range(n - 1)) or z[-1] < 0:
            raise ValueError("x too disordered for this eps: shape not a partition")
        return z

    def snap_distance(self, x: Sequence[float]) -> float:
        """Max distance from x to the eps-lattice points actually used."""
        return max(abs(xi - self.eps * self._floor(xi)) for xi in x)


def out_of_order(x: Sequence[float]) -> tuple:
    """Indices i (0-based) with x_i <= x_{i+1}, convention x_{n+1} = 0."""
    xs = list(x) + [0.0]
    return tuple(i for i in range(len(x)) if xs[i] <= xs[i + 1])


def _psi_rank_one(sctx: ScalingCtx, z: int) -> complex:
    tab = sctx._psi1_table
    if z not in tab:
        L = sctx.log_pochhammer(z)
        ks = np.arange(z + 1)
        logw = L[z] - L[ks] - L[z - ks] + sctx.A
        phase = np.exp(1j * sctx.eps * sctx.lam[0] * (2 * ks - z))
        tab[z] = complex(sctx.eps * np.sum(np.exp(logw) * phase))
    return tab[z]


def scaled_qwhittaker(sctx: ScalingCtx, n: int, x: Sequence[float]) -> complex:
    """Rescaled character eps^{n^2} e^{n^2 A} P_z(a;q) as the nested lattice
    sum, evaluated in log space.  Supported for n <= 2 (cost)."""
    if n not in (1, 2):
        raise ValueError("scaled sums implemented for n <= 2 only")
    if len(x) != n:
        raise ValueError("x must have length n")
    z = sctx.z_shape(n, x)
    if n == 1:
        return _psi_rank_one(sctx, z[0])
    return _psi_rank_two(sctx, z)


def _psi_rank_two(sctx: ScalingCtx, z: tuple) -> complex:
    if z in sctx._memo:
        return sctx._memo[z]
    eps, A, l2 = sctx.eps, sctx.A, sctx.lam[1]
    L = sctx.log_pochhammer(z[0])
    psit = np.array([_psi_rank_one(sctx, k) for k in range(z[0] + 1)])
    sz = z[0] + z[1]
    total = 0.0 + 0.0j
    for z31 in range(z[1], z[0] + 1):
        w_top1 = L[z[0] - z[1]] - L[z[0] - z31] - L[z31 - z[1]] + A
        for z32 in range(0, z[1] + 1):
            # pairing (z, z3): binom(z1-z2, z1-z31) binom(z2, z2-z32)
            w1 = w_top1 + L[z[1]] - L[z[1] - z32] - L[z32] + A
            s3 = z31 + z32
            ks = np.arange(z32, z31 + 1)
            # pairing (z3, z2): binom(z31-z32, z31-k)
            w2 = L[z31 - z32] - L[z31 - ks] - L[ks - z32] + A
            inner = np.sum(np.exp(w2 + 1j * eps * l2 * (s3 - ks)) * psit[ks])
            total += cmath.exp(1j * eps * l2 * (s3 - sz) + w1) * eps * inner
    val = complex(eps ** 2 * total)
    sctx._memo[z] = val
    return val


# ---------------------------------------------------------------------------
# classical Whittaker functions
# ---------------------------------------------------------------------------

def bessel_k(nu: complex, z: float) -> float:
    """Macdonald function K_nu(z) for z > 0 via the cosh-substituted integral
    K_nu(z) = int_0^inf e^{-z cosh u} cosh(nu u) du; real for imaginary nu."""
    if z <= 0:
        raise ValueError("z must be positive")
    # cut off where z cosh(u) > 60: the tail is below e^{-60}
    cut = float(mp.acosh(max(60.0 / z, 2.0)))
    val = mp.quad(lambda u: mp.exp(-z * mp.cosh(u)) * mp.cosh(nu * u),
                  [0, cut])
    return float(mp.re(val))


def so3_whittaker(lam: complex, x: float) -> float:
    """Closed form 2 K_{2 lam}(2 e^{-x/2}); for the scaling comparisons lam
    is purely imaginary (order i*mu) and the value is real."""
    return 2.0 * bessel_k(2 * lam, 2.0 * math.exp(-x / 2.0))


def _grid(lo: float, hi: float, nodes: int) -> np.ndarray:
    return np.linspace(lo, hi, nodes)


def so_whittaker(n: int, lam, x, nodes: int = 2000) -> complex:
    """Givental integral for the so(2n+1) Whittaker function, n <= 2.
    lam may be complex (imaginary values give the oscillatory regime)."""
    if n == 1:
        lam1 = complex(lam[0]) if isinstance(lam, (tuple, list)) else complex(lam)
        xv = float(x[0]) if isinstance(x, (tuple, list)) else float(x)
        half = 0.5 * (30.0 + abs(xv))
        u = _grid(xv / 2.0 - half, xv / 2.0 + half, nodes)
        f = np.exp(lam1 * (2 * u - xv) - np.exp(-u) - np.exp(u - xv))
        return complex(np.trapezoid(f, u))
    if n != 2:
        raise ValueError("Givental quadrature implemented for n <= 2 only")
    l1, l2 = complex(lam[0]), complex(lam[1])
    x1, x2 = float(x[0]), float(x[1])
    lo = min(x2, 0.0) - 15.0
    hi = max(x1, 0.0) + 15.0
    nn = max(80, nodes // 16)
    u = _grid(lo, hi, nn)
    # inner so3 values on the grid, one vectorized double integral
    half = 0.5 * (30.0 + max(abs(lo), abs(hi)))
    v = _grid((lo + hi) / 4.0 - half, (lo + hi) / 4.0 + half, nodes)
    f1 = np.exp(l1 * (2 * v[None, :] - u[:, None])
                - np.exp(-v[None, :]) - np.exp(v[None, :] - u[:, None]))
    psi1 = np.trapezoid(f1, v, axis=1)
    a = u[:, None, None]   # x^3_1
    b = u[None, :, None]   # x^3_2
    c = u[None, None, :]   # x^2_1
    expo = (l2 * (2 * (a + b) - (x1 + x2) - c)
            - np.exp(a - x1) - np.exp(x2 - a)
            - np.exp(-b) - np.exp(b - x2)
            - np.exp(b - c) - np.exp(c - a))
    integrand = np.exp(expo) * psi1[None, None, :]
    val = np.trapezoid(np.trapezoid(np.trapezoid(integrand, u, axis=2),
                                    u, axis=1), u, axis=0)
    return complex(val)


def so_eigen_residual(lam: complex, x: float, h: float = 1e-3,
                      nodes: int = 2000) -> float:
    """|H Psi - (lam^2/2) Psi| at rank one, H = d^2/dx^2 / 2 - e^{-x}/2,
    via 4th-order central differences."""
    pts = [so_whittaker(1, lam, x + k * h, nodes) for k in (-2, -1, 0, 1, 2)]
    d2 = (-pts[0] + 16 * pts[1] - 30 * pts[2] + 16 * pts[3] - pts[4]) / (12 * h * h)
    lhs = 0.5 * d2 - 0.5 * math.exp(-x) * pts[2]
    return abs(lhs - 0.5 * lam ** 2 * pts[2])


def convergence_table(n: int, lam: Sequence[float], xs: Sequence,
                      eps_list: Sequence[float]) -> list:
    """Rows (x, eps, scaled value, so-target, abs error, snap distance) for
    the imaginary-direction family; targets via Bessel (n=1) or Givental."""
    rows = []
    targets = {}
    for x in xs:
        xv = (float(x),) if n == 1 else tuple(float(v) for v in x)
        if n == 1:
            targets[xv] = so3_whittaker(1j * lam[0], xv[0])
        else:
            targets[xv] = so_whittaker(n, tuple(1j * l for l in lam), xv).real
    for eps in eps_list:
        sctx = ScalingCtx(eps, lam)
        for x in xs:
            xv = (float(x),) if n == 1 else tuple(float(v) for v in x)
            val = scaled_qwhittaker(sctx, n, xv)
            rows.append({"x": xv, "eps": eps, "value": val,
                         "target": targets[xv],
                         "abs_error": abs(val - targets[xv]),
                         "snap": sctx.snap_distance(xv)})
    return rows
