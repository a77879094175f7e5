"""Command-line entry point: ``online-ramsey <subcommand> ...``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from fractions import Fraction

from . import __version__
from ._accel import backend_name
from .edge import (
    ClkParams,
    clk_achl_lb_exponent,
    clk_bal_ub_exponent,
    edge_threshold,
    separation_table,
    verify_clk_sequence,
)
from .envelope import EnvelopeError
from .graphs import GraphError, ordering_classes, parse_graph
from .matched import audit_witness_density, build_witness, export_witness_dot, m_r_matched
from .vertex import Lambda_root, youngest_vertex_minimizer_check, verify_equivalence_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "dot", "text")


def rational(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_int_list(text):
    values = []
    for part in text.split(","):
        value = parse_rational(part)
        if value.denominator != 1:
            raise argparse.ArgumentTypeError(f"not an integer: {part!r}")
        values.append(int(value))
    return values


def parse_grid(text):
    """``start:stop:step`` (inclusive) or a comma-separated list of rationals."""
    if ":" in text:
        start, stop, step = (parse_rational(p) for p in text.split(":"))
        if step <= 0:
            raise argparse.ArgumentTypeError("grid step must be positive")
        values = []
        value = start
        while value <= stop:
            values.append(value)
            value += step
        return values
    return [parse_rational(p) for p in text.split(",")]


def parse_range(text):
    if ":" in text:
        low, high = (int(p) for p in text.split(":"))
        return list(range(low, high + 1))
    return [int(p) for p in text.split(",")]


def load_graph(spec):
    """A builtin name, an inline edge list, or the path of an edge-list file."""
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as handle:
            return parse_graph(handle.read())
    return parse_graph(spec)


class Output:
    def __init__(self, args):
        self.args = args
        self.chunks = []

    def write(self, text):
        self.chunks.append(text if text.endswith("\n") else text + "\n")

    def flush(self):
        text = "".join(self.chunks)
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)


def banner(args):
    config = {k: _plain(v) for k, v in sorted(vars(args).items()) if k != "handler"}
    config["backend"] = backend_name()
    config["version"] = __version__
    print("# config " + json.dumps(config, sort_keys=True), file=sys.stderr)


def _plain(value):
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def dump_json(data):
    return json.dumps(data, indent=2, sort_keys=True)


def _format(args, default, allowed):
    fmt = args.format or default
    if fmt not in allowed:
        raise GraphError(f"format {fmt!r} is not available here; choose from {', '.join(allowed)}")
    return fmt


# ---------------------------------------------------------------------------
# subcommands


def cmd_threshold(args, out):
    graph = load_graph(args.graph)
    fmt = _format(args, "text", ("text", "json"))
    if args.kind == "vertex":
        result = Lambda_root(graph, args.r)
        data = {
            "graph": args.graph,
            "r": args.r,
            "theta_star": rational(result.theta_star),
            "m_r_star": rational(result.m_star),
            "p0": f"n^-{rational(result.theta_star)}",
            "ordering": list(result.ordering),
            "minimizing_subgraph": list(result.minimizing_subgraph),
            "envelope": result.envelope.to_pairs(),
            "note": "vertex Achlioptas and balanced Ramsey games share this threshold",
        }
        if fmt == "json":
            out.write(dump_json(data))
        else:
            out.write(
                f"theta* = {data['theta_star']}\nm^r* = {data['m_r_star']}\np0 = {data['p0']}\n"
                f"ordering (youngest first) = {data['ordering']}\n"
                f"minimizing subgraph = {data['minimizing_subgraph']}\n{data['note']}"
            )
        return EXIT_OK
    result = edge_threshold(graph, args.r, cap=args.edge_cap)
    data = {
        "graph": args.graph,
        "r": args.r,
        "m_r_star": rational(result.m_star),
        "exact": result.exact,
        "exponent": rational(result.exponent),
        "N0": f"n^({rational(result.exponent)})",
    }
    if not result.exact:
        data["note"] = result.note
    if fmt == "json":
        out.write(dump_json(data))
    else:
        qualifier = "" if result.exact else f" ({result.note})"
        out.write(f"m^r* = {data['m_r_star']}{qualifier}\nN0 = {data['N0']}")
    return EXIT_OK


def cmd_clk(args, out):
    fmt = _format(args, "text", ("text", "json", "csv"))
    if args.grid:
        parts = args.grid.split(",")
        if len(parts) != 3:
            raise GraphError("grid must look like l_lo:l_hi,k_lo:k_hi,r_lo:r_hi")
        rows = separation_table(*(parse_range(p) for p in parts))
    else:
        if args.l is None or args.k is None:
            raise GraphError("give -l and -k, or --grid")
        p = ClkParams(args.l, args.k, args.r).validate()
        rows = separation_table([p.ell], [p.k], [p.r])
    if fmt == "csv":
        out.write("l,k,r,ub_bal,lb_achl,separated")
        for row in rows:
            out.write(f"{row.ell},{row.k},{row.r},{rational(row.ub_bal)},{rational(row.lb_achl)},{str(row.separated).lower()}")
    elif fmt == "json":
        out.write(
            dump_json(
                [
                    {
                        "l": row.ell,
                        "k": row.k,
                        "r": row.r,
                        "ub_bal": rational(row.ub_bal),
                        "lb_achl": rational(row.lb_achl),
                        "separated": row.separated,
                    }
                    for row in rows
                ]
            )
        )
    else:
        for row in rows:
            verdict = "separated" if row.separated else "NOT separated"
            out.write(
                f"l={row.ell} k={row.k} r={row.r}: ub_bal = n^{rational(row.ub_bal)} ({float(row.ub_bal):.4f}), "
                f"lb_achl = n^{rational(row.lb_achl)} ({float(row.lb_achl):.4f}), {verdict}"
            )
    return EXIT_OK if all(row.separated for row in rows) else EXIT_FAILED


def cmd_witness(args, out):
    graph = load_graph(args.graph)
    classes = sorted(ordering_classes(graph).items())
    if args.pi == "auto":
        pi = Lambda_root(graph, args.r).ordering
    else:
        index = int(args.pi)
        if not 0 <= index < len(classes):
            raise GraphError(f"ordering index must be in 0..{len(classes) - 1}")
        pi = classes[index][1]
    witness = build_witness(graph, pi, args.r, kappa_cap=args.kappa_cap)
    audit = audit_witness_density(graph, pi, args.r, kappa_cap=args.kappa_cap)
    fmt = _format(args, "text", ("text", "json", "dot"))
    data = witness.to_json()
    summary = {
        "kappa": witness.matched.kappa,
        "edge_count": witness.matched.e,
        "m_r": rational(m_r_matched(witness.matched)),
        "theta_prime": rational(audit.theta_prime),
        "ordering": list(pi),
        "audit": "pass" if audit.passed else "fail",
    }
    if args.out and fmt != "dot":
        stem = args.out[:-5] if args.out.endswith(".json") else args.out
        with open(stem + ".dot", "w", encoding="utf-8", newline="\n") as handle:
            handle.write(export_witness_dot(witness))
        with open(stem + ".json", "w", encoding="utf-8", newline="\n") as handle:
            handle.write(dump_json({**data, **summary}) + "\n")
        args.out = None
    if fmt == "dot":
        out.write(export_witness_dot(witness))
    elif fmt == "json":
        out.write(dump_json({**data, **summary}))
    else:
        out.write(
            f"kappa = {summary['kappa']}\nedges = {summary['edge_count']}\nm^r = {summary['m_r']}\n"
            f"theta' = {summary['theta_prime']}\nordering = {summary['ordering']}\naudit: {summary['audit']}"
        )
        for name, ok in audit.checks.items():
            out.write(f"  [{'pass' if ok else 'FAIL'}] {name}")
    return EXIT_OK if audit.passed else EXIT_FAILED


def cmd_verify(args, out):
    from .matched import audit_all_orderings
    from .vertex import small_graphs_with_edges

    fmt = _format(args, "text", ("text", "json"))
    results = []
    rs = args.r_list
    if args.suite == "equivalence":
        for r in rs:
            report = verify_equivalence_suite(args.max_vertices, (r,))
            results.append((report.name, report.passed, report.checks, report.counterexample))
    elif args.suite == "witness-density":
        for r in rs:
            for graph in small_graphs_with_edges(args.max_vertices):
                audit = audit_all_orderings(graph, r, kappa_cap=args.kappa_cap)
                failed = [a for a in audit.audits if not a.passed]
                detail = None
                if failed:
                    detail = f"ordering {failed[0].pi}: {failed[0].checks}"
                elif not audit.lowest_threshold_matches:
                    detail = "lowest appearance threshold differs from theta*"
                results.append((f"witness {graph!r} r={r}", audit.passed, len(audit.audits), detail))
    elif args.suite == "lemma8":
        graph = load_graph(args.graph)
        for r in rs:
            report = youngest_vertex_minimizer_check(graph, r)
            results.append((report.name, report.passed, report.checks, report.counterexample))
    else:
        if args.l is None or args.k is None:
            raise GraphError("clk-sequence needs -l and -k")
        for r in rs:
            check = verify_clk_sequence(ClkParams(args.l, args.k, r), orderings=args.orderings, seed=args.seed or 0)
            results.append(
                (f"clk-sequence l={args.l} k={args.k} r={r}", check.ok, check.orderings, f"ratio {rational(check.ratio)}")
            )
    passed = all(ok for _, ok, _, _ in results)
    if fmt == "json":
        out.write(
            dump_json(
                {
                    "suite": args.suite,
                    "passed": passed,
                    "results": [
                        {"name": n, "passed": ok, "checks": c, "detail": d} for n, ok, c, d in results
                    ],
                }
            )
        )
    else:
        for name, ok, checks, detail in results:
            line = f"[{'pass' if ok else 'FAIL'}] {name} ({checks} checks)"
            if detail:
                line += f": {detail}"
            out.write(line)
        out.write("all passed" if passed else "FAILED")
    return EXIT_OK if passed else EXIT_FAILED


def _require_seed(args):
    if args.seed is None:
        raise GraphError("--seed is required for reproducible simulations")


def cmd_simulate(args, out):
    from .game import GameConfig, run_trial
    from .game.engine import make_target
    from .game.sweep import SWEEP_HEADER, SurvivalEstimate, censored_median, parallel_map, trial_seed

    _require_seed(args)
    graph = load_graph(args.graph)
    fmt = _format(args, "json", ("json", "csv", "text"))
    base = GameConfig(
        graph,
        args.r,
        args.n,
        args.theta,
        args.variant,
        0,
        args.strategy_theta,
        args.full_candidates,
        args.witness_check,
        args.transcript,
    ).validate()
    target = make_target(base)

    def one(trial):
        config = dataclasses.replace(base, seed=trial_seed(args.seed, args.n, 0, trial))
        return run_trial(config, target)

    results = parallel_map(one, range(args.trials), args.threads)
    violations = sum(r.violations for r in results)
    survivals = sum(1 for r in results if r.survived)
    median = censored_median([r.loss_step for r in results], args.n // args.r)
    exploratory = target.theta != base.theta
    if fmt == "csv":
        out.write(SWEEP_HEADER)
        out.write(
            SurvivalEstimate(args.variant, args.graph, args.r, args.n, args.theta, args.trials, survivals, median).csv_row()
        )
    else:
        data = {
            "variant": args.variant,
            "graph": args.graph,
            "r": args.r,
            "n": args.n,
            "theta": rational(args.theta),
            "strategy_theta": rational(target.theta),
            "exploratory": exploratory,
            "seed": args.seed,
            "trials": args.trials,
            "survivals": survivals,
            "median_loss_step": median,
            "witness_check": args.witness_check,
            "violations": violations,
            "negative_witness_trials": sum(1 for r in results if r.negative_witness),
            "identity_failures": sum(r.identity_failures for r in results),
            "aborted_trials": sum(1 for r in results if r.status == "aborted"),
            "copies_checked": sum(r.copies_checked for r in results),
            "loss_steps": [r.loss_step for r in results],
        }
        if args.transcript:
            data["transcripts"] = [r.transcript for r in results]
        if fmt == "json":
            out.write(dump_json(data))
        else:
            for key, value in data.items():
                if key not in ("loss_steps", "transcripts"):
                    out.write(f"{key} = {value}")
    return EXIT_FAILED if violations else EXIT_OK


def cmd_sweep(args, out):
    _require_seed(args)
    fmt = _format(args, "csv", ("csv", "json", "text"))
    if args.variant == "edge-star":
        from .game.sweep import edge_star_games

        report = edge_star_games(
            args.k, args.r, args.n, args.trials, args.seed, args.step_exponents or (), args.threads
        )
        summary = {variant: fit for variant, fit in report.fits.items()}
        if fmt == "json":
            out.write(
                dump_json(
                    {
                        "k": args.k,
                        "r": args.r,
                        "n": args.n,
                        "trials": args.trials,
                        "seed": args.seed,
                        "medians": {v: {str(n): m for n, m in ms.items()} for v, ms in report.medians.items()},
                        "fitted_exponents": summary,
                    }
                )
            )
        else:
            out.write(report.csv())
        for variant, fit in summary.items():
            shown = "n/a" if fit is None else f"{fit:.4f}"
            print(f"# fitted exponent {variant}: {shown}", file=sys.stderr)
        return EXIT_OK
    from .game.sweep import run_sweep

    if args.graph is None or args.theta is None:
        raise GraphError("vertex sweeps need --graph and --theta")
    graph = load_graph(args.graph)
    result = run_sweep(
        graph,
        args.r,
        args.variant,
        args.n,
        args.theta,
        args.trials,
        args.seed,
        args.graph,
        args.threads,
        args.strategy_theta,
        args.full_candidates,
    )
    if fmt == "json":
        out.write(
            dump_json(
                {
                    "rows": [
                        {
                            "variant": e.variant,
                            "F": e.graph,
                            "r": e.r,
                            "n": e.n,
                            "theta": rational(e.theta),
                            "trials": e.trials,
                            "survivals": e.survivals,
                            "rate": e.rate,
                            "median_loss_step": e.median_loss_step,
                        }
                        for e in result.estimates
                    ],
                    "crossings": {str(n): c for n, c in result.crossings.items()},
                }
            )
        )
    else:
        out.write(result.csv())
    for n, value in result.crossings.items():
        shown = "none in grid" if value is None else f"{value:.4f}"
        print(f"# survival crosses 1/2 at n={n}: theta = {shown}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help="output format (default depends on the subcommand)")
    common.add_argument("--out", help="write the main output to this file")
    common.add_argument("--threads", type=int, default=1, help="worker threads for simulations")
    common.add_argument("--seed", type=int, help="master seed (required for simulate and sweep)")

    parser = argparse.ArgumentParser(prog="online-ramsey", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", parents=[common], help="threshold exponents of the vertex or edge game")
    p.add_argument("kind", choices=("vertex", "edge"))
    p.add_argument("--graph", required=True, help='builtin name such as "K3", "S 3", or an edge-list file')
    p.add_argument("-r", type=int, default=2)
    p.add_argument("--edge-cap", type=int, default=7, help="largest edge count for exact edge enumeration")
    p.set_defaults(handler=cmd_threshold)

    p = sub.add_parser("clk", parents=[common], help="bounds for clusters of cycles and their separation")
    p.add_argument("-l", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("-r", type=int, default=2)
    p.add_argument("--grid", help="ranges l_lo:l_hi,k_lo:k_hi,r_lo:r_hi")
    p.set_defaults(handler=cmd_clk)

    p = sub.add_parser("witness", parents=[common], help="build and audit the grey-black witness graph")
    p.add_argument("--graph", required=True)
    p.add_argument("-r", type=int, default=2)
    p.add_argument("--pi", default="auto", help="'auto' or an ordering-class index")
    p.add_argument("--kappa-cap", type=int, default=31)
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=("equivalence", "witness-density", "lemma8", "clk-sequence"))
    p.add_argument("-r", dest="r_list", type=parse_int_list, default=[2], help="r value(s), comma separated")
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--graph", default="K3")
    p.add_argument("-l", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--orderings", type=int, default=20)
    p.add_argument("--kappa-cap", type=int, default=31)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="play seeded vertex games")
    p.add_argument("--variant", choices=("vertex-balanced", "vertex-achlioptas"), default="vertex-balanced")
    p.add_argument("--graph", required=True)
    p.add_argument("-r", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=parse_rational, required=True)
    p.add_argument("--strategy-theta", type=parse_rational, help="theta used by the strategy (default theta*)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--witness-check", action="store_true")
    p.add_argument("--full-candidates", action="store_true", help="use every ordered subgraph, not only connected ones")
    p.add_argument("--transcript", action="store_true", help="include per-step transcripts in JSON output")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", parents=[common], help="survival-rate sweeps and edge star games")
    p.add_argument("--variant", choices=("vertex-balanced", "vertex-achlioptas", "edge-star"), default="vertex-balanced")
    p.add_argument("--graph")
    p.add_argument("-r", type=int, default=2)
    p.add_argument("-k", "--k", type=int, default=3, help="star size for edge-star")
    p.add_argument("--n", type=parse_int_list, required=True, help="comma-separated sizes, e.g. 1e3,1e4")
    p.add_argument("--theta", type=parse_grid, help="start:stop:step or a comma-separated list")
    p.add_argument("--step-exponents", type=parse_grid, help="edge-star: survival at n^a steps for each a")
    p.add_argument("--strategy-theta", type=parse_rational)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--full-candidates", action="store_true")
    p.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    banner(args)
    out = Output(args)
    try:
        code = args.handler(args, out)
    except (GraphError, EnvelopeError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
