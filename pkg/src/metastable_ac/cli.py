"""Command-line front end: ``metastable <command> [flags]``.

Exit codes: 0 success, 2 input error, 3 numeric failure, 4 invariant failure.
Results are computed in full before anything is written, and files are
replaced atomically, so a failed command leaves no output behind.
"""
import argparse
import os
import sys

import numpy as np

from .errors import InputError, InvariantError, MetastableError, NumericError
from .outputs import atomic_write, csv_text, to_json, validate


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("METASTABLE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"METASTABLE_SEED must be an integer, got {env!r}") from None


def _emit(args, text):
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _json(args, obj, schema):
    validate(obj, schema)
    return to_json(obj)


def _need_format(args, allowed):
    if args.format not in allowed:
        raise InputError(f"--format {args.format} is not available here; choose from {allowed}")


# ----------------------------------------------------------------- commands


def cmd_landscape(args):
    from .landscape import build_transition_graph, continue_to_gamma
    _need_format(args, ("json", "dot"))
    mode = "full" if args.full else "orbits"
    graph = build_transition_graph(args.n, mode)
    failed = []
    if args.gamma:
        def cont(points, kind):
            out = []
            for i, p in enumerate(points):
                try:
                    out.append(continue_to_gamma(p, args.gamma, step=args.step))
                except NumericError as exc:
                    failed.append({"kind": kind, "index": i, "family": p.family,
                                   "last_good_gamma": getattr(exc, "last_good_gamma", None),
                                   "message": str(exc)})
                    out.append(None)
            return out
        minima, saddles = cont(graph.minima, "minimum"), cont(graph.saddles, "saddle")
        if failed and not args.skip_failed:
            fams = sorted({f"{f['family']} (last good gamma {f['last_good_gamma']})" for f in failed})
            raise NumericError(f"{len(failed)} points failed to continue: {', '.join(fams)}")
    else:
        minima, saddles = graph.minima, graph.saddles
    if args.format == "dot":
        _emit(args, graph.to_dot())
        return 0

    def rows(points, kind):
        return [dict(p.to_dict(), multiplicity=graph.multiplicity.get((kind, i), 1))
                for i, p in enumerate(points) if p is not None]
    obj = {"n": args.n, "gamma": args.gamma, "mode": mode,
           "minima": rows(minima, "min"), "saddles": rows(saddles, "saddle"),
           "edges": [{"saddle": s, "lower": lo, "upper": hi} for s, lo, hi in graph.edges],
           "family_edges": [list(e) for e in graph.family_edges()], "failed": failed}
    if args.dot_out:
        atomic_write(args.dot_out, graph.to_dot())
    _emit(args, _json(args, obj, "landscape"))
    return 0


def cmd_hierarchy(args):
    from . import hierarchy as H
    _need_format(args, ("json", "dot"))
    bk = H.verify_Bk_hierarchy(args.n, args.gamma, step=args.step)
    a = H.verify_A_hierarchy(args.n) if args.n >= 8 else None
    tree = H.family_tree(args.n)
    if args.format == "dot":
        _emit(args, tree.to_dot())
        return 0
    obj = {"n": args.n, "gamma": args.gamma, "B_hierarchy": bk.to_dict(),
           "A_hierarchy": a.to_dict() if a else None, "disconnectivity": tree.to_dict()}
    if args.dot_out:
        atomic_write(args.dot_out, tree.to_dot())
    if args.moves_dot and args.n >= 8:
        atomic_write(args.moves_dot, _class_graph_dot(args.n))
    _emit(args, _json(args, obj, "hierarchy"))
    return 0


def _class_graph_dot(n):
    from .hierarchy import a_blocks, class_move_graph
    edges = class_move_graph(n)
    lines = [f"digraph interface_classes_n{n} {{", "  rankdir=LR;"]
    for b in a_blocks(n):
        lines.append(f'  "{b}";')
    for (a, b), h in sorted(edges.items()):
        lines.append(f'  "{a}" -> "{b}" [label="H1={float(h):.4g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_rates(args):
    from .rates import rate_table
    _need_format(args, ("json", "csv"))
    rows = rate_table(args.n, args.gamma, args.eps, step=args.step)
    if args.format == "csv":
        cols = ["transition", "n", "gamma", "eps", "saddle", "target", "arrhenius", "prefactor",
                "symmetry_factor", "time", "rate"]
        _emit(args, csv_text(cols, ([r[c] for c in cols] for r in rows)))
        return 0
    _emit(args, _json(args, {"rows": rows}, "rates"))
    return 0


def cmd_gap(args):
    from .rates import irrep_decomposition, spectral_gap
    _need_format(args, ("json", "csv"))
    est = spectral_gap(args.n, args.gamma, args.eps, q_y=args.qy, step=args.step)
    table = irrep_decomposition(args.n, args.gamma, args.eps, q_y=args.qy, step=args.step)
    if args.format == "csv":
        cols = ["irrep", "dim", "alpha_x", "alpha_y", "subspace_dim", "slowest_rate"]
        _emit(args, csv_text(cols, ([r[c] for c in cols] for r in table["irreps"])))
        return 0
    obj = {"n": args.n, "gamma": args.gamma, "eps": args.eps, "gap": est.rate,
           "estimate": est.to_dict(), "irreps": table["irreps"]}
    _emit(args, _json(args, obj, "gap"))
    return 0


def _start_config(kind, n, gamma):
    from .landscape import continue_to_gamma, representative
    from .simulate import alternating_word
    if kind == "block":
        p = representative(n, 0, "B")
    elif kind == "alternating":
        return alternating_word(n).astype(float)
    elif kind == "b1":
        p = representative(n, 1, "B")
    else:
        raise InputError(f"unknown start {kind!r}")
    return (continue_to_gamma(p, gamma) if gamma else p).coords


def cmd_simulate(args):
    from . import simulate as S
    from .model import Params
    seed = _seed(args)
    if args.kind == "sde":
        _need_format(args, ("csv",))
        params = Params(args.n, args.gamma, args.eps)
        x0 = _start_config(args.start, args.n, args.gamma)
        run = S.run_sde(params, x0, args.steps, dt=args.dt, seed=seed,
                        record_stride=args.record_stride, classify=args.labels)
        err = run.max_mass_error()
        if err > S.MASS_TOL:
            raise InvariantError(f"mass drifted by {err:.3e}")
        _emit(args, run.labels_csv() if args.labels else run.trajectory_csv())
        return 0
    if args.kind == "jump":
        _need_format(args, ("csv",))
        start = S.alternating_word(args.n) if args.start in ("alternating", None) else None
        if start is None:
            raise InputError("jump runs start from the alternating state")
        run = S.run_jump_chain(start, args.gamma, args.eps, args.events, seed)
        if args.trace_out:
            atomic_write(args.trace_out, run.trace_csv())
        _emit(args, run.events_csv())
        return 0
    if args.kind == "exit":
        _need_format(args, ("json",))
        from .symmetry import balanced_words
        params = Params(args.n, args.gamma, args.eps)
        x0 = _start_config(args.start, args.n, args.gamma)
        words = np.array(balanced_words(args.n), dtype=float)
        targets = [w for w in words if np.max(np.abs(w - x0)) > 0.5]
        if args.gamma:
            raise InputError("exit-time runs are implemented for gamma = 0 targets")
        eps_list = args.eps_list or [args.eps]
        study = S.mean_exit_time(params, x0, np.array(targets), eps_list, replicas=args.replicas,
                                 seed=seed, dt=args.dt, max_steps=args.max_steps,
                                 threads=args.threads)
        _emit(args, _json(args, study.to_dict(), "exit"))
        return 0
    raise InputError(f"unknown simulation kind {args.kind!r}")


def cmd_verify(args):
    from .verify import run_checks
    results = run_checks(args.check or None)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        raise InvariantError(f"failed checks: {', '.join(failed)}")
    return 0


# ------------------------------------------------------------------- parser


def _common(p, eps=True):
    p.add_argument("--n", type=int, default=8, help="ring size (even, >= 4, not a multiple of 3)")
    p.add_argument("--gamma", type=float, default=0.0, help="coupling")
    if eps:
        p.add_argument("--eps", type=float, default=0.05, help="noise intensity")
    p.add_argument("--seed", type=int, default=None, help="seed (falls back to METASTABLE_SEED)")
    p.add_argument("--out", default=None, help="output file (stdout if omitted)")
    p.add_argument("--format", default="json", choices=("json", "csv", "dot"))
    p.add_argument("--threads", type=int, default=1, help="worker threads for replicas")
    p.add_argument("--step", type=float, default=0.01, help="continuation step in gamma")


def build_parser():
    parser = argparse.ArgumentParser(prog="metastable", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("landscape", help="stationary points and transition graph")
    _common(p, eps=False)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--full", action="store_true", help="every point (n <= 10)")
    g.add_argument("--orbits", action="store_true", help="one point per symmetry orbit (default)")
    p.add_argument("--dot-out", default=None, help="also write the graph as DOT")
    p.add_argument("--skip-failed", action="store_true",
                   help="report points that fail to continue instead of aborting")
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("hierarchy", help="metastable hierarchies and disconnectivity tree")
    _common(p, eps=False)
    p.add_argument("--dot-out", default=None, help="also write the disconnectivity tree as DOT")
    p.add_argument("--moves-dot", default=None, help="write the interface-class move graph as DOT")
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("rates", help="Eyring-Kramers table")
    _common(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("gap", help="spectral gap and per-irrep decomposition")
    _common(p)
    p.add_argument("--qy", type=float, default=None, help="override the B_1 exit rate q_y")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("simulate", help="SDE, jump chain or exit-time runs")
    p.add_argument("kind", choices=("sde", "jump", "exit"))
    _common(p)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--record-stride", type=int, default=100)
    p.add_argument("--labels", action="store_true", help="write t,p,label rows instead of coordinates")
    p.add_argument("--start", default=None, choices=("block", "alternating", "b1"))
    p.add_argument("--events", type=int, default=10_000)
    p.add_argument("--trace-out", default=None, help="jump runs: also write the t,p,label trace")
    p.add_argument("--eps-list", type=float, nargs="*", default=None)
    p.add_argument("--replicas", type=int, default=200)
    p.add_argument("--max-steps", type=int, default=10_000_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--check", action="append", help="run only this check (repeatable)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.start is None:
        args.start = "alternating" if args.kind == "jump" else "block"
    if args.command == "simulate" and args.kind == "sde" and args.format == "json":
        args.format = "csv"
    if args.command == "simulate" and args.kind == "jump" and args.format == "json":
        args.format = "csv"
    try:
        if hasattr(args, "n"):
            from ._validation import check_eps, check_gamma, check_size
            check_size(args.n)
            check_gamma(args.gamma)
            if hasattr(args, "eps"):
                check_eps(args.eps)
        return args.func(args)
    except MetastableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
