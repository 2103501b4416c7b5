"""Command-line surface: exact character computations, verification reports,
insertion traces, simulators and limit tables.

Rationals are written ``p/q`` on the command line; flags that genuinely take
floats say so.  Every stochastic subcommand requires ``--seed`` and identical
flags + seed give byte-identical output.  Reports embed the truncation depths,
quadrature sizes, tolerances and seeds that produced them.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

SCHEMA = "sympgt-report/1"


# ---------------------------------------------------------------------------
# flag parsing helpers
# ---------------------------------------------------------------------------

def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {s!r}") from exc


def _shape(s: str) -> tuple:
    s = s.strip()
    if s in ("", "origin", "()"):
        return ()
    return tuple(int(x) for x in s.split(","))


def _floats(s: str) -> tuple:
    return tuple(float(x) for x in s.split(","))


def _rationals(s: str) -> tuple:
    return tuple(_rational(x) for x in s.split(","))


def _emit(payload, args, field_order=None):
    """Write a report as JSON (default) or CSV ('rows' key) to --output."""
    fmt = getattr(args, "format", "json")
    out = io.StringIO()
    if fmt == "json":
        json.dump(payload, out, indent=2, default=str)
        out.write("\n")
    else:
        rows = payload.get("rows", [])
        fields = field_order or (list(rows[0]) if rows else [])
        w = csv.writer(out, lineterminator="\n")
        for k, v in payload.items():
            if k != "rows":
                w.writerow([f"# {k}", v if not isinstance(v, dict) else json.dumps(v, default=str)])
        w.writerow(fields)
        for r in rows:
            w.writerow([r.get(f, "") for f in fields])
    text = out.getvalue()
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_compute(args) -> int:
    from .algebra import QSeriesCtx
    from .characters import (qwhittaker_pattern_sum, qwhittaker_recursion,
                             symplectic_schur_patterns, symplectic_schur_tableaux,
                             symplectic_schur_weyl)
    n, lam = args.n, args.lam
    if args.family == "schur":
        method = args.method or "tableaux"
        if method == "weyl":
            if not args.a:
                raise SystemExit("--method weyl needs --a (pointwise formula)")
            print(symplectic_schur_weyl(n, lam, args.a))
            return 0
        poly = {"tableaux": symplectic_schur_tableaux,
                "patterns": symplectic_schur_patterns}[method](n, lam)
    else:
        if args.q is None:
            raise SystemExit("qwhittaker needs --q")
        ctx = QSeriesCtx(args.q)
        method = args.method or "recursion"
        if method == "patterns":
            poly = qwhittaker_pattern_sum(2 * n, lam, ctx)
        elif method == "recursion":
            poly = qwhittaker_recursion(n, lam, ctx)
        else:
            raise SystemExit(f"method {method!r} does not apply to qwhittaker")
    print(poly.evaluate(args.a) if args.a else poly.canonical())
    return 0


def _cmd_berele(args) -> int:
    from .berele import process_word
    from .combinatorics import letter_str
    rec = process_word(args.word, args.n)
    words = rec.word
    if args.trace:
        for m in range(1, len(words) + 1):
            partial = process_word(words[:m], args.n)
            print(f"after {letter_str(words[m - 1])!s}:  shape {partial.shapes[-1]}")
            for row in partial.tableau.rows:
                print("  " + " ".join(letter_str(x) for x in row))
    print("word:   " + " ".join(letter_str(x) for x in words))
    print("shapes: " + " -> ".join(str(s) for s in rec.shapes))
    print("tableau:")
    for row in rec.tableau.rows:
        print("  " + " ".join(letter_str(x) for x in row))
    return 0


def _cmd_simulate(args) -> int:
    from .dynamics import SimConfig, simulate
    cfg = SimConfig(args.model, args.N, args.a, args.q, args.t,
                    args.replicas, args.seed, start=args.start,
                    truncation=args.truncation)
    hist = simulate(cfg)
    total = sum(hist.values())
    rows = [{"shape": ",".join(map(str, z)) or "0", "count": c,
             "frequency": c / total}
            for z, c in sorted(hist.items())]
    _emit({"schema": SCHEMA, "model": args.model, "N": args.N,
           "a": list(args.a), "q": args.q, "t": args.t,
           "replicas": args.replicas, "seed": args.seed,
           "truncation": args.truncation, "rows": rows},
          args, ["shape", "count", "frequency"])
    return 0


def _cmd_law(args) -> int:
    from .spectral import law
    table = law(args.n, args.t, args.a, args.q, args.window)
    rows = [{"shape": ",".join(map(str, z)) or "0", "probability": p,
             "noise_floor": table.noise.get(z, 0.0)}
            for z, p in sorted(table.table.items())]
    _emit({"schema": SCHEMA, "n": args.n, "t": args.t, "a": list(args.a),
           "q": args.q, "window": args.window,
           "mass_defect": table.mass_defect, "rows": rows},
          args, ["shape", "probability", "noise_floor"])
    return 0


def _cmd_moments(args) -> int:
    from .spectral import moments
    reps = {}
    for k in args.k:
        m = moments(args.n, k, args.t, args.a, args.q, window=args.window)
        vals = [m["direct"], m["operator"], m["contour"]]
        rel = max(abs(vals[i] - vals[j]) / max(abs(vals[j]), 1.0)
                  for i in range(3) for j in range(3))
        reps[str(k)] = {**m, "max_pairwise_relative": rel}
    _emit({"schema": SCHEMA, "n": args.n, "t": args.t, "a": list(args.a),
           "q": args.q, "window": args.window, "moments": reps}, args)
    return 0


def _cmd_limit(args) -> int:
    from .limits import convergence_table
    rows = convergence_table(args.n, args.lam, args.x, args.eps)
    out_rows = [{"x": r["x"], "eps": r["eps"],
                 "value_re": float(r["value"].real),
                 "value_im": float(r["value"].imag),
                 "target": r["target"], "abs_error": r["abs_error"],
                 "snap": r["snap"]} for r in rows]
    _emit({"schema": SCHEMA, "n": args.n, "lambda": list(args.lam),
           "rows": out_rows}, args,
          ["x", "eps", "value_re", "value_im", "target", "abs_error", "snap"])
    return 0


def _cmd_sde(args) -> int:
    import numpy as np
    from .continuous import ContinuousParams, sde_simulate, wedge_start
    params = ContinuousParams(len(args.lam), args.lam)
    x0 = args.start if args.start else wedge_start(args.N)
    rep = sde_simulate(args.N, params, x0, args.t, args.h,
                       args.replicas, args.seed)
    bottom = rep["bottom"]
    _emit({"schema": SCHEMA, "N": args.N, "lambda": list(args.lam),
           "t": args.t, "h": args.h, "replicas": args.replicas,
           "seed": args.seed, "flagged": rep["flagged"],
           "bottom_mean": [float(v) for v in np.mean(bottom, axis=0)],
           "bottom_std": [float(v) for v in np.std(bottom, axis=0)]}, args)
    return 0


def _cmd_polymer(args) -> int:
    from .continuous import polymer_identity_check
    rep = polymer_identity_check(args.N, args.lam, args.t,
                                 replicas=args.replicas, seed=args.seed)
    _emit({"schema": SCHEMA, "N": args.N, "lambda": list(args.lam),
           "t": args.t, "seed": args.seed, **rep}, args)
    return 0


def _cmd_verify(args) -> int:
    if args.what == "all":
        from .acceptance import run_all
        ledger = run_all(quick=args.quick)
        _emit({"schema": SCHEMA, **ledger}, args)
        return 0 if ledger["passed"] else 1

    if args.what == "branching":
        from .algebra import QSeriesCtx
        from .branching import BranchingPair, conjecture_checks
        pair = BranchingPair(args.n or max(len(args.lam), len(args.nu) + 1), args.lam, args.nu)
        rep = conjecture_checks(pair, QSeriesCtx(args.q), t0_ladder=args.t0_ladder)
        _emit({"schema": SCHEMA, "lambda": list(args.lam), "nu": list(args.nu),
               "q": str(args.q), "t0_ladder": [str(t) for t in args.t0_ladder],
               **{k: _jsonable(v) for k, v in rep.items()}}, args)
        return 0

    if args.what == "orthogonality":
        import numpy as np
        from .combinatorics import canon, partitions_max_weight
        from .spectral import orthogonality_matrix
        shapes = sorted({canon(z) for z in partitions_max_weight(args.n, args.max_weight)})
        m = orthogonality_matrix(args.n, shapes, args.q)
        dev = float(np.abs(m - np.eye(len(shapes))).max())
        _emit({"schema": SCHEMA, "n": args.n, "q": args.q,
               "max_weight": args.max_weight, "shapes": [list(s) for s in shapes],
               "max_deviation_from_identity": dev}, args)
        return 0

    # continuous
    import numpy as np
    from .continuous import phi, phi2_bessel, phi_eigen_residual, verify_operator_identities
    if args.which == "kernels":
        pts = np.linspace(-1.0, 1.0, 5)
        grid1 = [((float(a),), (float(b),)) for a in pts for b in pts]
        grid2 = [((float(a), float(a) - 0.7), (float(b), float(b) - 1.1))
                 for a in pts for b in pts]
        rank1 = verify_operator_identities(1, args.theta, grid1)
        rep = {"rank1": {"nn_max": rank1["nn_max"]},  # no lower level at rank 1
               "rank2": verify_operator_identities(2, args.theta, grid2)}
    elif args.which == "eigen":
        rep = {"eigen_residuals": {str(x): phi_eigen_residual(1, (args.theta,), x)
                                   for x in (-0.5, 0.0, 1.0)}}
    else:
        xs = np.linspace(-2.0, 3.0, 11)
        rep = {"closed_form_relative_errors": {
            f"{x:.1f}": abs(phi(2, (args.theta,), float(x)) - phi2_bessel(args.theta, float(x)))
                        / abs(phi2_bessel(args.theta, float(x)))
            for x in xs}}
    _emit({"schema": SCHEMA, "which": args.which, "theta": args.theta, **rep}, args)
    return 0


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_output_flags(p, default_fmt="json"):
    p.add_argument("--format", choices=["json", "csv"], default=default_fmt)
    p.add_argument("--output", help="write the report to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="sympgt", description=__doc__)
    top.add_argument("--threads", type=int, default=1,
                     help="internal parallelism hint (orchestration stays single-threaded)")
    sub = top.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("compute", help="exact character computations")
    p.add_argument("family", choices=["schur", "qwhittaker"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_shape, required=True)
    p.add_argument("--q", type=_rational)
    p.add_argument("--a", type=_rationals, help="rational evaluation point a1,a2,...")
    p.add_argument("--method", choices=["weyl", "tableaux", "patterns", "recursion"])
    p.set_defaults(fn=_cmd_compute)

    p = sub.add_parser("berele", help="insertion of a word, with shape path")
    p.add_argument("--word", required=True, help='e.g. "3~ 2 1~ 3~ 1 2 1"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=_cmd_berele)

    p = sub.add_parser("simulate", help="pattern dynamics, histogram of the bottom shape")
    p.add_argument("--model", choices=["berele", "randomized"], required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=_floats, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start", type=_shape, default=())
    p.add_argument("--truncation", type=int, default=60)
    _add_output_flags(p, "csv")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("law", help="bottom-shape law via torus quadrature")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--a", type=_floats, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--window", type=int, default=40)
    _add_output_flags(p, "csv")
    p.set_defaults(fn=_cmd_law)

    p = sub.add_parser("moments", help="q-moments by three routes")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=lambda s: tuple(int(x) for x in s.split(",")),
                   default=(1, 2))
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--a", type=_floats, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--window", type=int, default=40)
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_moments)

    p = sub.add_parser("limit", help="scaled-character convergence table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_floats, required=True)
    p.add_argument("--x", type=_floats, required=True)
    p.add_argument("--eps", type=_floats, required=True)
    _add_output_flags(p, "csv")
    p.set_defaults(fn=_cmd_limit)

    p = sub.add_parser("sde", help="interacting diffusions in the wall wedge")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_floats, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start", type=_shape, default=())
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_sde)

    p = sub.add_parser("polymer", help="partition-function identity check")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_floats, default=(0.9, 0.4))
    p.add_argument("--t", type=float, default=2.0)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(fn=_cmd_polymer)

    p = sub.add_parser("verify", help="verification reports and the full gate")
    vsub = p.add_subparsers(dest="what", required=True)

    v = vsub.add_parser("branching")
    v.add_argument("--lambda", dest="lam", type=_shape, required=True)
    v.add_argument("--nu", type=_shape, required=True)
    v.add_argument("--n", type=int)
    v.add_argument("--q", type=_rational, required=True)
    v.add_argument("--t0-ladder", dest="t0_ladder", type=_rationals, default=())
    _add_output_flags(v)
    v.set_defaults(fn=_cmd_verify)

    v = vsub.add_parser("orthogonality")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--q", type=float, required=True)
    v.add_argument("--max-weight", type=int, default=4)
    _add_output_flags(v)
    v.set_defaults(fn=_cmd_verify)

    v = vsub.add_parser("continuous")
    v.add_argument("--which", choices=["kernels", "eigen", "phi2"], required=True)
    v.add_argument("--theta", type=float, default=0.8,
                   help="drift/index parameter of the kernels")
    _add_output_flags(v)
    v.set_defaults(fn=_cmd_verify)

    v = vsub.add_parser("all")
    v.add_argument("--quick", action="store_true",
                   help="run the fast subset of the gate")
    _add_output_flags(v)
    v.set_defaults(fn=_cmd_verify)

    return top


_LIST_FLAGS = {"--x", "--eps", "--lambda", "--a", "--k"}


def _glue_negative_lists(argv):
    """Let comma lists start with a minus sign ('--x -1,0,1,2') by gluing the
    value onto its flag before argparse sees it."""
    import re
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok in _LIST_FLAGS and i + 1 < len(argv)
                and re.fullmatch(r"-[0-9][0-9.,/eE+-]*", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_lists(argv))
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
