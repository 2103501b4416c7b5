"""End-to-end verification checks with pinned tolerances.

Each check returns a report dict with at least ``name``, ``passed`` and
``seconds``; soft checks additionally carry ``soft=True`` and never fail the
whole run.  The registry drives both the acceptance test suite and the
``verify all`` CLI subcommand, so a pass here is exactly a pass there.
"""
from __future__ import annotations

import math
import random
import time
from fractions import Fraction as F

import numpy as np

from .algebra import LaurentPoly, QSeriesCtx
from .berele import process_word
from .branching import BranchingPair, conjecture_checks, single_block_index
from .characters import (
    pieri_apply,
    qwhittaker_pattern_sum,
    qwhittaker_recursion,
    symplectic_schur_tableaux,
    symplectic_schur_weyl,
)
from .combinatorics import canon, interlacings, level_len, padded, partitions_max_weight
from .continuous import (
    ContinuousParams,
    phi,
    phi2_bessel,
    phi_eigen_residual,
    polymer_identity_check,
    verify_operator_identities,
)
from .dynamics import (
    SimConfig,
    build_generator,
    simulate,
    verify_intertwining_cascade,
    verify_intertwining_randomized,
)
from .limits import convergence_table
from .spectral import conjecture_distance, koornwinder_apply, law, moments, orthogonality_matrix


def _timed(fn):
    def wrapper():
        t0 = time.time()
        rep = fn()
        rep["seconds"] = round(time.time() - t0, 3)
        rep.setdefault("soft", False)
        return rep
    wrapper.__name__ = fn.__name__
    return wrapper


def _generic_points(n, count=5):
    """Rational points avoiding 0, +-1 and coincidences a_i = a_j^{+-1}."""
    base = [F(6, 5), F(3, 7), F(11, 4), F(5, 2), F(7, 3), F(9, 8), F(4, 9)]
    pts = []
    for s in range(count):
        pt = tuple(base[(s + i * count) % len(base)] + F(s, 13) for i in range(n))
        pts.append(pt)
    return pts


@_timed
def check_character_routes():
    """Determinant-ratio and tableau-sum characters agree exactly at rational
    points, rank <= 3, shape weight <= 6."""
    failures = []
    checked = 0
    for n in (1, 2, 3):
        pts = _generic_points(n)
        for lam in partitions_max_weight(n, 6):
            st = symplectic_schur_tableaux(n, lam)
            for a in pts:
                checked += 1
                if symplectic_schur_weyl(n, lam, a) != st.evaluate(a):
                    failures.append((n, lam, a))
    return {"name": "character-routes", "passed": not failures,
            "points_per_rank": 5, "evaluations": checked, "failures": failures}


@_timed
def check_two_route_equality():
    """Pattern sum over 2n levels equals the rank-n recursion as an exact
    Laurent polynomial identity."""
    failures = []
    checked = 0
    for q in (F(1, 3), F(2, 5)):
        ctx = QSeriesCtx(q)
        for n in (2, 3):
            for lam in partitions_max_weight(n, 5):
                checked += 1
                if qwhittaker_pattern_sum(2 * n, lam, ctx) != qwhittaker_recursion(n, lam, ctx):
                    failures.append((str(q), n, lam))
    return {"name": "two-route-equality", "passed": not failures,
            "shapes": checked, "failures": failures}


@_timed
def check_q_zero_degeneration():
    """At q = 0 the deformed character collapses exactly onto the symplectic
    Schur polynomial."""
    ctx = QSeriesCtx(F(0))
    failures = []
    for n in (1, 2, 3):
        for lam in partitions_max_weight(n, 4):
            if qwhittaker_recursion(n, lam, ctx) != symplectic_schur_tableaux(n, lam):
                failures.append((n, lam))
    return {"name": "q-zero-degeneration", "passed": not failures, "failures": failures}


@_timed
def check_pieri_identity():
    """One-box Pieri difference operator acts on the deformed character with
    exact eigenvalue sum(a_i + 1/a_i), rank <= 3, weight <= 5, rational
    points; equivalently the interior shape-chain generator rows sum to 0."""
    ctx = QSeriesCtx(F(1, 3))
    failures = []
    checked = 0
    for n in (1, 2, 3):
        pts = _generic_points(n, 3)
        polys = {}
        def g_at(a):
            def g(mu):
                mu = canon(mu)
                if mu not in polys:
                    polys[mu] = qwhittaker_recursion(n, mu, ctx)
                return polys[mu].evaluate(a)
            return g
        for z in partitions_max_weight(n, 5):
            for a in pts:
                checked += 1
                g = g_at(a)
                if pieri_apply(n, z, ctx, g) != sum(x + 1 / x for x in a) * g(z):
                    failures.append((n, z, a))
    return {"name": "pieri-identity", "passed": not failures,
            "evaluations": checked, "failures": failures}


@_timed
def check_koornwinder_eigenrelation():
    """The 2n-term difference operator acts on the recursion-defined character
    with eigenvalue q^{-lam_1} - 1, to 1e-10 relative at complex points."""
    tol = 1e-10
    pts = {1: [(0.7 + 0.2j,), (1.3 - 0.4j,), (0.4 + 0.9j,), (2.1 + 0.1j,), (0.9 - 0.7j,)],
           2: [(0.8 + 0.1j, 1.3 - 0.2j), (1.1 + 0.3j, 0.6 - 0.1j),
               (0.5 + 0.6j, 1.7 + 0.2j), (2.0 - 0.3j, 0.9 + 0.4j),
               (1.4 + 0.5j, 0.7 - 0.6j)]}
    worst = 0.0
    failures = []
    for n in (1, 2):
        q = 0.5 if n == 1 else 0.4
        ctx = QSeriesCtx(q)
        for lam in partitions_max_weight(n, 4):
            P = qwhittaker_recursion(n, lam, ctx)
            F_ = lambda pt: complex(P.evaluate(pt))
            ev = q ** -(lam[0] if lam else 0) - 1
            for a in pts[n]:
                rhs = ev * F_(a)
                rel = abs(koornwinder_apply(F_, a, n, q) - rhs) / max(abs(rhs), 1.0)
                worst = max(worst, rel)
                if rel > tol:
                    failures.append((n, lam, rel))
    return {"name": "koornwinder-eigenrelation", "passed": not failures,
            "tolerance": tol, "worst_relative": worst, "failures": failures}


@_timed
def check_branching_limit():
    """Small-t0 behaviour of the two-level branching polynomial: exact
    agreement with the kernel in the single-window case (the big-to-continuous
    q-Hermite connection sums telescope, so the distance is identically zero,
    stronger than the linear decay one would expect a priori), exact
    t0-independence for separated unit gaps, and exact leading coefficients
    for 100 random pairs."""
    ctx4 = QSeriesCtx(F(2, 5))
    pair = BranchingPair(3, (4, 3, 1), (4,))
    rep_a = conjecture_checks(pair, ctx4,
                              t0_ladder=[F(1, 1000), F(1, 10000), F(1, 100000)])
    errors = rep_a["single_block"]["errors"]
    decay_ok = single_block_index(pair) is not None and all(e == 0 for e in errors)

    pair_b = BranchingPair(5, (4, 4, 3, 1, 1), (3, 3, 2, 1))
    rep_b = conjecture_checks(pair_b, ctx4, t0_ladder=[F(3, 10), F(7, 10), F(13, 10)])
    gaps_ok = rep_b["unit_gaps"]["exact"]

    ctx3 = QSeriesCtx(F(1, 3))
    rng = random.Random(7)
    shapes = list(partitions_max_weight(5, 8))
    leading_ok, checked = True, 0
    while checked < 100:
        lam = canon(shapes[rng.randrange(len(shapes))])
        n = max(len(lam), 1) + rng.randrange(2)
        if len(lam) > n or n < 2:
            continue
        lam_p = padded(lam, n)
        mu = list(interlacings(lam_p, n))[0]
        nus = list(interlacings(mu, n - 1))
        nu = canon(nus[rng.randrange(len(nus))])
        try:
            p = BranchingPair(n, lam, nu)
        except ValueError:
            continue
        if not conjecture_checks(p, ctx3)["leading_term"]:
            leading_ok = False
        checked += 1
    return {"name": "branching-limit", "passed": decay_ok and gaps_ok and leading_ok,
            "single_window_errors": [float(e) for e in errors],
            "unit_gaps_exact": gaps_ok,
            "random_pairs": checked, "leading_term_ok": leading_ok}


@_timed
def check_insertion():
    """Reference insertion trace plus injectivity of word -> (tableau, shape
    path) over all rank-2 words of length 5 and rank-3 words of length 4."""
    rec = process_word("3~ 2 1~ 3~ 1 2 1", 3)
    example_ok = (rec.shapes == ((), (1,), (1, 1), (1, 1, 1), (2, 1, 1),
                                 (2, 1), (2, 2), (2, 2, 1))
                  and rec.tableau.rows == ((1, 3), (3, 6), (6,)))
    from itertools import product
    counts = {}
    for n, alphabet, length in ((2, 4, 5), (3, 6, 4)):
        seen = set()
        for w in product(range(1, alphabet + 1), repeat=length):
            r = process_word(w, n)
            seen.add((r.tableau.rows, r.shapes))
        counts[f"rank{n}"] = len(seen)
    inj_ok = counts["rank2"] == 4 ** 5 and counts["rank3"] == 6 ** 4
    return {"name": "insertion", "passed": example_ok and inj_ok,
            "example_ok": example_ok, "distinct_images": counts}


def _two_level_probes(N, shapes):
    probes = []
    for y in shapes:
        y = padded(y, level_len(N))
        for x in interlacings(y, level_len(N - 1)):
            probes.append((x, y))
    return probes


@_timed
def check_intertwining():
    """Exact intertwining of the single-level and cascade transition kernels
    with the shape-chain generator at rational parameters."""
    ctx = QSeriesCtx(F(1, 3))
    reports = {}
    ok = True
    for N, shapes, a in (
            (4, [(2, 1), (1, 1), (2, 0), (3, 1), (2, 2), (3, 0)], (F(6, 5), F(3, 7))),
            (5, [(2, 1, 0), (1, 1, 1), (2, 2, 1), (3, 1, 0), (2, 2, 2), (3, 2, 1),
                 (1, 0, 0), (2, 0, 0)], (F(6, 5), F(3, 7), F(5, 2)))):
        probes = _two_level_probes(N, shapes)
        res = verify_intertwining_randomized(N, probes, ctx, a)
        bad = [r for r in res if not r[-1]]
        ok = ok and len(probes) >= 20 and not bad
        reports[f"single-level-N{N}"] = {"probes": len(probes), "identities": len(res),
                                         "failures": len(bad)}
    casc_probes = []
    for z in [(1, 1), (2, 0), (2, 1), (2, 2), (3, 1)]:
        for y in interlacings(z, 2):
            for x in interlacings(y, 1):
                casc_probes.append((x, y, z))
    res = verify_intertwining_cascade(2, casc_probes, ctx, (F(6, 5), F(3, 7)))
    bad = [r for r in res if not r[-1]]
    ok = ok and len(casc_probes) >= 20 and not bad
    reports["cascade-n2"] = {"probes": len(casc_probes), "identities": len(res),
                             "failures": len(bad)}
    return {"name": "intertwining", "passed": ok, "reports": reports}


@_timed
def check_simulation_vs_law():
    """Empirical time-2 bottom-shape law at rank 1, a = 1, q = 1/2 against the
    truncated matrix exponential (TV <= 0.01) and the torus-integral law
    (TV <= 0.02), 1e5 replicas."""
    from scipy.linalg import expm
    cfg = SimConfig("randomized", 2, (1.0,), 0.5, 2.0, 100000, 20260826,
                    start=(), truncation=40)
    hist = simulate(cfg)
    total = sum(hist.values())
    emp = {z: c / total for z, c in hist.items()}
    gen = build_generator(2, 40, QSeriesCtx(F(1, 2)), (F(1),))
    row = expm(2.0 * gen.dense())[gen.index[()]]
    tv_expm = 0.5 * sum(abs(emp.get(z, 0.0) - row[j]) for j, z in enumerate(gen.states))
    tab = law(1, 2.0, (1.0,), 0.5, 40).table
    tv_law = 0.5 * sum(abs(emp.get(z, 0.0) - tab.get(z, 0.0))
                       for z in set(emp) | set(tab))
    return {"name": "simulation-vs-law", "passed": tv_expm <= 0.01 and tv_law <= 0.02,
            "replicas": cfg.replicas, "seed": cfg.seed,
            "tv_vs_expm": tv_expm, "tv_vs_torus_law": tv_law,
            "tolerances": {"expm": 0.01, "torus": 0.02}}


@_timed
def check_moments_three_way():
    """First and second q-moments at rank 1 by direct summation, operator
    powers and contour integrals, pairwise to 1e-6 relative."""
    tol = 1e-6
    worst = 0.0
    for k in (1, 2):
        m = moments(1, k, 1.0, (1.3,), 0.5)
        vals = [m["direct"], m["operator"], m["contour"]]
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, abs(vals[i] - vals[j]) / max(abs(vals[j]), 1.0))
    return {"name": "moments-three-way", "passed": worst <= tol,
            "tolerance": tol, "worst_relative": worst}


@_timed
def check_orthogonality():
    """Torus orthogonality of the recursion-defined family: rank 1 within
    1e-8 of the identity up to degree 4, rank 2 within 1e-6 up to weight 2."""
    shapes1 = [(k,) for k in range(5)]
    m1 = orthogonality_matrix(1, shapes1, 0.4)
    err1 = float(np.abs(m1 - np.eye(len(shapes1))).max())
    shapes2 = [canon(z) for z in partitions_max_weight(2, 2)]
    m2 = orthogonality_matrix(2, shapes2, 0.4)
    err2 = float(np.abs(m2 - np.eye(len(shapes2))).max())
    return {"name": "orthogonality", "passed": err1 <= 1e-8 and err2 <= 1e-6,
            "rank1_max_error": err1, "rank2_max_error": err2,
            "tolerances": {"rank1": 1e-8, "rank2": 1e-6}}


@_timed
def check_scaling_limit():
    """Rank-1 scaled character converges to the wall-potential eigenfunction:
    errors strictly decrease along eps in {0.1, 0.05, 0.02} and end below
    5e-2 at each x."""
    rows = convergence_table(1, 0.7, [-1.0, 0.0, 1.0, 2.0], [0.1, 0.05, 0.02])
    by_x = {}
    for r in rows:
        by_x.setdefault(r["x"], []).append(r["abs_error"])
    monotone = all(all(a > b for a, b in zip(errs, errs[1:])) for errs in by_x.values())
    final_ok = all(errs[-1] <= 5e-2 for errs in by_x.values())
    return {"name": "scaling-limit", "passed": monotone and final_ok,
            "monotone": monotone,
            "final_errors": {str(x): errs[-1] for x, errs in by_x.items()}}


@_timed
def check_continuous_kernels():
    """Level-2 eigenfunction matches its Bessel closed form to 1e-6 relative,
    kernel intertwinings hold to 1e-6 on 25-point grids, and the level-2
    eigen-residual stays below 1e-4."""
    lam = 0.8
    worst_bessel = 0.0
    for x in np.linspace(-2.0, 3.0, 11):
        a = phi(2, (lam,), float(x))
        b = phi2_bessel(lam, float(x))
        worst_bessel = max(worst_bessel, abs(a - b) / abs(b))
    pts = np.linspace(-1.0, 1.0, 5)
    grid1 = [((float(a),), (float(b),)) for a in pts for b in pts]
    grid2 = [((float(a), float(a) - 0.7), (float(b), float(b) - 1.1))
             for a in pts for b in pts]
    rep1 = verify_operator_identities(1, 0.7, grid1)
    rep2 = verify_operator_identities(2, 0.9, grid2)
    worst_nn = max(rep1["nn_max"], rep2["nn_max"])
    worst_nnm1 = rep2["nnm1_max"]
    eig = max(phi_eigen_residual(1, (0.8,), x) for x in (-0.5, 0.0, 1.0))
    passed = worst_bessel <= 1e-6 and worst_nn <= 1e-6 and worst_nnm1 <= 1e-6 and eig <= 1e-4
    return {"name": "continuous-kernels", "passed": passed,
            "bessel_worst_relative": worst_bessel,
            "intertwining_max": {"nn": worst_nn, "nnm1": worst_nnm1},
            "eigen_residual": eig}


@_timed
def check_polymer_identity():
    """Distributional identity between the hierarchy top and the integrated
    single-path partition function: KS gate 0.02 at one level, the two-level
    value reported but never gated."""
    rep1 = polymer_identity_check(1, (0.9,), 2.0, replicas=20000, seed=7)
    rep2 = polymer_identity_check(2, (0.9, 0.4), 2.0, replicas=20000, seed=8)
    return {"name": "polymer-identity", "passed": rep1["ks"] <= 0.02, "soft": True,
            "level1": {"ks": rep1["ks"], "pvalue": rep1["pvalue"]},
            "level2_reported": {"ks": rep2["ks"], "pvalue": rep2["pvalue"]},
            "note": rep2["conditional"]}


@_timed
def check_orthogonality_conjecture():
    """Reported coefficient distance between the small-t0 orthogonalized
    family and the recursion-defined character at rank 2; never a gate."""
    dists = {str(lam): conjecture_distance(2, lam, 0.4, 1e-3)
             for lam in [(1,), (1, 1), (2,)]}
    return {"name": "orthogonality-conjecture", "passed": True, "soft": True,
            "t0": 1e-3, "coefficient_distances": dists}


# (name, callable, included in --quick)
REGISTRY = [
    ("character-routes", check_character_routes, True),
    ("two-route-equality", check_two_route_equality, False),
    ("q-zero-degeneration", check_q_zero_degeneration, True),
    ("pieri-identity", check_pieri_identity, True),
    ("koornwinder-eigenrelation", check_koornwinder_eigenrelation, True),
    ("branching-limit", check_branching_limit, True),
    ("insertion", check_insertion, True),
    ("intertwining", check_intertwining, True),
    ("simulation-vs-law", check_simulation_vs_law, False),
    ("moments-three-way", check_moments_three_way, True),
    ("orthogonality", check_orthogonality, True),
    ("scaling-limit", check_scaling_limit, False),
    ("continuous-kernels", check_continuous_kernels, True),
    ("polymer-identity", check_polymer_identity, False),
    ("orthogonality-conjecture", check_orthogonality_conjecture, True),
]


def run_all(quick: bool = False, names=None) -> dict:
    """Run the registry (optionally the quick subset or a named subset) and
    return a machine-readable ledger."""
    selected = [(nm, fn) for nm, fn, q in REGISTRY
                if (names is None or nm in names) and (not quick or q or names)]
    reports = [fn() for _, fn in selected]
    hard_failures = [r["name"] for r in reports if not r["passed"] and not r["soft"]]
    return {"checks": reports, "passed": not hard_failures,
            "hard_failures": hard_failures, "quick": quick,
            "soft_failures": [r["name"] for r in reports
                              if not r["passed"] and r["soft"]]}
