"""Command-line orchestrator.

Subcommands:
  partition  one circuit -> stage metrics + overhead report (table/json/csv/dot)
  bench      a directory of circuits -> one CSV row each, failures isolated
  verify     variance-bound presets; --full runs the full-scale budgets
  fixtures   write generated chain benchmark circuits

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 input or
verification failure, 2 infeasible qubit cap.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time

from . import __version__
from .clustering import InfeasibleCapError, PipelineResult, run_pipeline
from .fixtures import ising_chain
from .graph import UnknownGateWeightError, build_cut_graph, to_dot
from .overhead import BENCH_CSV_HEADER, build_report
from .qasm import QasmError, parse_qasm_file, to_qasm

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _merge_config(args: argparse.Namespace, config: dict) -> argparse.Namespace:
    # config file supplies defaults; explicit flags win
    for key, value in config.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and args._explicit.get(attr) is not True:
            setattr(args, attr, value)
    return args


class _TrackingParser(argparse.ArgumentParser):
    """Remembers which destinations were set on the command line."""

    def parse_args(self, argv=None, namespace=None):  # type: ignore[override]
        namespace = super().parse_args(argv, namespace)
        explicit = {}
        argv = sys.argv[1:] if argv is None else argv
        for action in self._subparser_actions():
            for opt in action.option_strings:
                if any(a == opt or a.startswith(opt + "=") for a in argv):
                    explicit[action.dest] = True
        namespace._explicit = explicit
        return namespace

    def _subparser_actions(self):
        stack = [self]
        while stack:
            parser = stack.pop()
            for action in parser._actions:
                if isinstance(action, argparse._SubParsersAction):
                    stack.extend(action.choices.values())
                elif action.option_strings:
                    yield action


def _run_file(path: str, args) -> tuple[PipelineResult, object, object]:
    circuit = parse_qasm_file(path)
    graph = build_cut_graph(circuit)
    result = run_pipeline(graph, args.max_qubits, order=args.order,
                          restarts=args.restarts, seed=args.seed)
    report = build_report(result.clustering, graph, eps=args.eps)
    return result, report, graph


def cmd_partition(args) -> int:
    if args.max_qubits < 1:
        return _fail(f"infeasible qubit cap {args.max_qubits}", EXIT_INFEASIBLE)
    try:
        result, report, graph = _run_file(args.file, args)
    except InfeasibleCapError as exc:
        return _fail(f"infeasible qubit cap: {exc}", EXIT_INFEASIBLE)
    except (QasmError, UnknownGateWeightError, OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_ERROR)

    name = os.path.splitext(os.path.basename(args.file))[0]
    if args.format == "table":
        _print_table(name, result)
    elif args.format == "json":
        payload = {
            "name": name,
            "max_qubits": args.max_qubits,
            "stages": [s.to_json_dict() for s in result.stages],
            "report": report.to_json_dict(),
            "clustering": result.clustering.to_json_dict(),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif args.format == "csv":
        print("stage,lq,ld,r,wall_time_s")
        for s in result.stages:
            print(f"{s.stage},{s.lq:.6f},{s.ld:.6f},{s.r},{s.wall_time_s:.4f}")
    elif args.format == "dot":
        sys.stdout.write(to_dot(graph, result.clustering))
    return EXIT_OK


def _print_table(name: str, result: PipelineResult) -> None:
    print(f"circuit: {name}")
    header = f"{'stage':<8}{'L_Q':>10}{'L_D':>10}{'R':>6}{'time[s]':>10}"
    print(header)
    print("-" * len(header))
    for s in result.stages:
        print(f"{s.stage:<8}{s.lq:>10.2f}{s.ld:>10.2f}{s.r:>6}{s.wall_time_s:>10.4f}")


def cmd_bench(args) -> int:
    if args.max_qubits < 1:
        return _fail(f"infeasible qubit cap {args.max_qubits}", EXIT_INFEASIBLE)
    try:
        files = sorted(
            os.path.join(args.dir, f) for f in os.listdir(args.dir)
            if f.endswith(".qasm")
        )
    except OSError as exc:
        return _fail(str(exc), EXIT_ERROR)
    if not files:
        return _fail("no circuits found", EXIT_ERROR)

    def one(path: str) -> str:
        name = os.path.splitext(os.path.basename(path))[0]
        start = time.perf_counter()
        try:
            _, report, _ = _run_file(path, args)
        except Exception as exc:  # isolate per-file failures
            reason = str(exc).replace(",", ";").replace("\n", " ")
            return f"{name},,,,,,,{reason}"
        elapsed = time.perf_counter() - start
        return report.csv_row(name, wall_time_s=elapsed)

    workers = min(len(files), args.jobs or os.cpu_count() or 1)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(one, files))
    print(BENCH_CSV_HEADER)
    for row in rows:
        print(row)
    failures = sum(1 for row in rows if row.split(",")[1] == "")
    if failures == len(rows):
        return _fail("no circuit processed successfully", EXIT_ERROR)
    return EXIT_OK


_CI_PRESETS = ((3, 0.2, 20), (4, 0.2, 20))
_FULL_PRESETS = ((3, 0.03, 100), (4, 0.03, 100), (3, 0.01, 100), (4, 0.01, 100))


def cmd_verify(args) -> int:
    from .cutsim import ExperimentConfig, variance_experiment

    presets = _FULL_PRESETS if args.full else _CI_PRESETS
    summaries = []
    for label, (partitions, eps, reps) in enumerate(presets, start=1):
        reps = reps if args.repetitions is None else args.repetitions
        config = ExperimentConfig(partitions=partitions, eps=eps, repetitions=reps,
                                  seed=args.seed if args.seed is not None else 0)
        try:
            summary = variance_experiment(config)
        except ValueError as exc:
            return _fail(str(exc), EXIT_ERROR)
        summaries.append((label, summary))
        verdict = "pass" if summary.within_bound else "FAIL"
        print(f"preset ({label}): partitions={partitions} eps={eps} "
              f"n_total={summary.n_total} std={summary.std:.6f} [{verdict}]",
              file=sys.stderr)
    payload = {"presets": [dict(label=label, **s.to_json_dict())
                           for label, s in summaries]}
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.errors_csv:
        with open(args.errors_csv, "w", encoding="utf-8") as fh:
            fh.write("preset,repetition,error\n")
            for label, s in summaries:
                for rep, err in enumerate(s.errors):
                    fh.write(f"{label},{rep},{err!r}\n")
    if all(s.within_bound for _, s in summaries):
        return EXIT_OK
    return _fail("observed standard deviation exceeded eps", EXIT_ERROR)


def cmd_fixtures(args) -> int:
    try:
        widths = [int(w) for w in args.widths.split(",")]
        os.makedirs(args.out, exist_ok=True)
        for width in widths:
            circuit = ising_chain(width, depth=args.depth, seed=args.seed or 0)
            path = os.path.join(args.out, f"{circuit.name}.qasm")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(to_qasm(circuit))
            print(path)
    except (ValueError, OSError) as exc:
        return _fail(str(exc), EXIT_ERROR)
    return EXIT_OK


def build_parser() -> _TrackingParser:
    parser = _TrackingParser(prog="cutplan",
                             description="overhead-aware circuit cut planner")
    parser.add_argument("--version", action="version", version=f"cutplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-qubits", "-D", type=int, default=30,
                       help="qubit cap per partition (default 30)")
        p.add_argument("--eps", type=float, default=None,
                       help="target standard deviation; adds shot budgets")
        p.add_argument("--order", choices=("weighted", "random"), default="weighted")
        p.add_argument("--restarts", type=int, default=1,
                       help="random-order restarts, best result kept")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", default=None, help="JSON file with flag defaults")

    p = sub.add_parser("partition", help="partition one circuit")
    p.add_argument("file")
    common(p)
    p.add_argument("--format", choices=("table", "json", "csv", "dot"), default="table")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("bench", help="partition every .qasm in a directory")
    p.add_argument("dir")
    common(p)
    p.add_argument("--jobs", type=int, default=None, help="parallel workers")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run the variance-bound experiment")
    p.add_argument("--full", action="store_true",
                   help="full-scale budgets (3/4 partitions at eps 0.03 and 0.01)")
    p.add_argument("--repetitions", type=int, default=None,
                   help="override repetitions per preset")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--errors-csv", default=None,
                   help="write per-repetition errors to this CSV file")
    p.add_argument("--config", default=None, help="JSON file with flag defaults")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixtures", help="emit generated chain circuits")
    p.add_argument("--out", required=True)
    p.add_argument("--widths", default="8,16,34", help="comma-separated qubit counts")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            args = _merge_config(args, _load_config(args.config))
        except (OSError, json.JSONDecodeError) as exc:
            return _fail(f"bad config file: {exc}", EXIT_ERROR)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
