"""Characters and invariant functions: hyperoctahedral monomials, symplectic
Schur functions (Weyl ratio / tableau sum / pattern sum), type-A Schur
functions, q-deformed pattern characters with their level recursion, and the
Pieri difference operator."""
from __future__ import annotations

import threading
from itertools import permutations, product
from typing import Callable, Sequence

from .algebra import LaurentPoly, QSeriesCtx, Scalar, _f, is_exact, q_binomial, q_hermite
from .combinatorics import (
    canon,
    enumerate_patterns,
    enumerate_patterns_typeA,
    enumerate_tableaux,
    interlaces,
    interlacings,
    level_len,
    padded,
    part,
    partitions_max_weight,
)


# ---------------------------------------------------------------------------
# monomials and symplectic Schur
# ---------------------------------------------------------------------------

def monomial_symmetric(n: int, lam: Sequence[int]) -> LaurentPoly:
    """Sum of a^mu over the orbit of lam under permutations and sign flips
    of the exponents, each distinct exponent vector counted once."""
    lam = padded(lam, n)
    orbit = set()
    for perm in permutations(lam):
        for signs in product(*[(1, -1) if e else (1,) for e in perm]):
            orbit.add(tuple(s * e for s, e in zip(signs, perm)))
    return LaurentPoly(n, {mu: 1 for mu in orbit})


def symplectic_schur_weyl(n: int, lam: Sequence[int], a: Sequence[Scalar]) -> Scalar:
    """Weyl ratio of determinants at a point.  Requires a generic point
    (a_i not in {0, 1, -1}, a_i != a_j^{+-1}); raises on a vanishing
    denominator."""
    import numpy as np

    lam = padded(lam, n)
    if len(a) != n:
        raise ValueError("point has wrong arity")
    # 0-based column j holds exponent lambda_{j+1} + n - (j+1) + 1 = lam[j] + n - j
    exps_num = [lam[j] + n - j for j in range(n)]
    exps_den = [n - j for j in range(n)]

    def det(exps):
        rows = [[_f(ai) ** e - _f(ai) ** (-e) for e in exps] for ai in a]
        if all(is_exact(x) for row in rows for x in row):
            return _det_exact(rows)
        return np.linalg.det(np.array(rows, dtype=complex)) if any(
            isinstance(x, complex) for row in rows for x in row
        ) else np.linalg.det(np.array(rows, dtype=float))

    den = det(exps_den)
    if den == 0:
        raise ZeroDivisionError("denominator determinant vanishes at this point")
    return det(exps_num) / den


def _det_exact(rows):
    """Fraction-free Gaussian elimination (Bareiss) for exact entries."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def symplectic_schur_tableaux(n: int, lam: Sequence[int]) -> LaurentPoly:
    """Tableau generating function: sum over symplectic tableaux of shape lam
    of prod_i a_i^{(count of i) - (count of i-bar)}."""
    lam = canon(lam)
    if len(lam) > n:
        raise ValueError("shape has too many rows for the rank")
    total = LaurentPoly.zero(n)
    for T in enumerate_tableaux(lam, n):
        exps = tuple(T.count_letter(2 * i - 1) - T.count_letter(2 * i)
                     for i in range(1, n + 1))
        total = total + LaurentPoly.monomial(exps, 1)
    return total


def symplectic_schur_patterns(n: int, lam: Sequence[int]) -> LaurentPoly:
    """Pattern form of the tableau sum: weight a_i^{2|z^{2i-1}| - |z^{2i-2}|
    - |z^{2i}|} over patterns with bottom level lam."""
    total = LaurentPoly.zero(n)
    for p in enumerate_patterns(lam, 2 * n):
        sizes = [0] + [sum(lv) for lv in p.levels]
        exps = tuple(2 * sizes[2 * i - 1] - sizes[2 * i - 2] - sizes[2 * i]
                     for i in range(1, n + 1))
        total = total + LaurentPoly.monomial(exps, 1)
    return total


# ---------------------------------------------------------------------------
# q-deformed pattern characters
# ---------------------------------------------------------------------------

def slice_binomials(ctx: QSeriesCtx, k: int, lower: Sequence[int], upper: Sequence[int]) -> Scalar:
    """q-binomial product attached to the step from level k-1 to level k.
    Level k has l = level_len(k) coordinates; the last coordinate carries an
    extra binomial only on even levels."""
    l = level_len(k)
    w: Scalar = 1
    for i in range(l - 1):
        w = w * q_binomial(ctx, upper[i] - upper[i + 1], upper[i] - part(lower, i + 1))
    if k % 2 == 0:
        w = w * q_binomial(ctx, upper[l - 1], upper[l - 1] - part(lower, l))
    return w


def qwhittaker_pattern_sum(N: int, z: Sequence[int], ctx: QSeriesCtx) -> LaurentPoly:
    """Pattern character of N levels with bottom level z: sum over patterns of
    the q-binomial slice weights, with variable a_l carrying exponent
    (|z^{2l-1}| - |z^{2l-2}|) - (|z^{2l}| - |z^{2l-1}|) and, for odd N, the
    unmatched top slice contributing a_n^{|z^N| - |z^{N-1}|}."""
    nvars = (N + 1) // 2
    total = LaurentPoly.zero(nvars)
    for p in enumerate_patterns(z, N):
        sizes = [0] + [sum(lv) for lv in p.levels]
        coeff: Scalar = 1
        exps = [0] * nvars
        for k in range(1, N + 1):
            coeff = coeff * slice_binomials(ctx, k, p.levels[k - 2] if k > 1 else (), p.levels[k - 1])
            delta = sizes[k] - sizes[k - 1]
            exps[(k - 1) // 2] += delta if k % 2 else -delta
        total = total + LaurentPoly.monomial(tuple(exps), coeff)
    return total


def qwhittaker_kernel(ctx: QSeriesCtx, nu: Sequence[int], lam: Sequence[int], n: int) -> LaurentPoly:
    """Two-slice kernel Q(nu, lam) linking rank n-1 to rank n, a Laurent
    polynomial in the single variable a_n.  Zero when no middle level
    interlaces between nu and lam."""
    lam_p = padded(lam, n)
    nu_c = canon(nu)
    total = LaurentPoly.zero(1)
    for mu in interlacings(lam_p, n):
        if not interlaces(nu_c, mu):
            continue
        w: Scalar = 1
        for i in range(n - 1):
            w = w * q_binomial(ctx, lam_p[i] - lam_p[i + 1], lam_p[i] - mu[i])
            w = w * q_binomial(ctx, mu[i] - mu[i + 1], mu[i] - part(nu_c, i + 1))
        w = w * q_binomial(ctx, lam_p[n - 1], lam_p[n - 1] - mu[n - 1])
        total = total + LaurentPoly.monomial(
            (2 * sum(mu) - sum(nu_c) - sum(lam_p),), w)
    return total


_recursion_cache: dict = {}
_recursion_lock = threading.Lock()


def qwhittaker_recursion(n: int, lam: Sequence[int], ctx: QSeriesCtx) -> LaurentPoly:
    """Level recursion for the q-deformed character: rank 1 is the
    one-variable q-Hermite polynomial; rank n sums the kernel against the
    rank n-1 character.  Memoized across the shared cache."""
    lam = canon(lam)
    if len(lam) > n:
        raise ValueError("shape has too many rows for the rank")
    key = (n, lam, ctx.q, ctx.truncation)
    with _recursion_lock:
        hit = _recursion_cache.get(key)
    if hit is not None:
        return hit
    if n == 1:
        result = q_hermite(ctx, part(lam, 1))
    else:
        lam_p = padded(lam, n)
        result = LaurentPoly.zero(n)
        seen = set()
        for mu in interlacings(lam_p, n):
            for nu in interlacings(mu, n - 1):
                nu_c = canon(nu)
                if nu_c in seen:
                    continue
                seen.add(nu_c)
                ker = qwhittaker_kernel(ctx, nu_c, lam_p, n)
                if not ker:
                    continue
                lower = qwhittaker_recursion(n - 1, nu_c, ctx)
                lifted = LaurentPoly(n, {e + (0,): c for e, c in lower.terms.items()})
                kern_n = LaurentPoly(n, {(0,) * (n - 1) + e: c for e, c in ker.terms.items()})
                result = result + lifted * kern_n
    with _recursion_lock:
        _recursion_cache[key] = result
    return result


# ---------------------------------------------------------------------------
# Pieri operator
# ---------------------------------------------------------------------------

def pieri_coefficients(n: int, lam: Sequence[int], ctx: QSeriesCtx) -> dict:
    """Rates of the one-box moves lam -> lam +- e_i; a coefficient is exactly
    zero whenever the move leaves the partition cone (conventions lam_0 =
    infinity, lam_{n+1} = 0)."""
    lam = padded(lam, n)
    q = ctx.q
    coeffs = {}
    for i in range(1, n + 1):
        up = 1 if i == 1 else 1 - q ** (lam[i - 2] - lam[i - 1])
        down = (1 - q ** lam[n - 1]) if i == n else 1 - q ** (lam[i - 1] - lam[i])
        if up != 0:
            coeffs[(i, +1)] = up
        if down != 0:
            coeffs[(i, -1)] = down
    return coeffs


def pieri_apply(n: int, lam: Sequence[int], ctx: QSeriesCtx,
                g: Callable[[tuple], Scalar]) -> Scalar:
    """Apply the Pieri difference operator at lam to a function g on
    partitions: sum of rate * g(lam +- e_i) over the admissible moves."""
    lam_p = padded(lam, n)
    total: Scalar = 0
    for (i, s), c in pieri_coefficients(n, lam, ctx).items():
        mu = list(lam_p)
        mu[i - 1] += s
        total = total + c * g(canon(mu))
    return total


# ---------------------------------------------------------------------------
# type-A Schur and the truncated Cauchy identity
# ---------------------------------------------------------------------------

def schur_typeA(N: int, z: Sequence[int]) -> LaurentPoly:
    """Schur polynomial in N variables via Gelfand-Tsetlin patterns."""
    total = LaurentPoly.zero(N)
    for levels in enumerate_patterns_typeA(z, N):
        sizes = [0] + [sum(lv) for lv in levels]
        exps = tuple(sizes[k] - sizes[k - 1] for k in range(1, N + 1))
        total = total + LaurentPoly.monomial(exps, 1)
    return total


def cauchy_identity_check(n: int, M: int, a: Sequence[Scalar], b: Sequence[Scalar]) -> float:
    """Residual of the truncated symplectic Cauchy identity:

        prod_{i<j}(1 - b_i b_j) prod_{i,j} 1/((1 - b_i a_j)(1 - b_i a_j^{-1}))
            = sum_mu Sp_mu(a) S_mu(b),  truncated at |mu| <= M.
    """
    lhs: Scalar = 1
    for i in range(n):
        for j in range(i + 1, n):
            lhs = lhs * (1 - b[i] * b[j])
    for i in range(n):
        for j in range(n):
            lhs = lhs / ((1 - b[i] * a[j]) * (1 - b[i] / a[j]))
    rhs: Scalar = 0
    for mu in partitions_max_weight(n, M):
        rhs = rhs + symplectic_schur_tableaux(n, mu).evaluate(tuple(a)) \
            * schur_typeA(n, mu).evaluate(tuple(b))
    return abs(float(lhs - rhs))
