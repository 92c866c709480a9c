"""Command-line front end.

Subcommands: characterize, compose, synthesize, conform, query, repl, oracle.
Global flags (before the subcommand): --format text|csv|json, --seed N,
--tolerance X.  Exit codes: 0 success, 1 usage, 2 parse error, 3 validation
or file error, 4 conformance failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .compose import build_system_model
from .characterize import build_component_model
from .core import ParallelPolicy
from .engine import run_query_on_model, load_query_inputs
from .errors import ParseError, QuarcError, ValidationError
from .relpoly import poly_eval
from .render import (
    format_probability,
    model_dump_cells,
    model_stats_line,
    render_conformance,
    render_model,
    render_result_table,
    render_system_spec,
    render_table,
)
from .simulate import (
    simulate_mode_reliability,
    simulate_state_probability,
    spawn_seeds,
)
from .sqdl import (
    parse_component_specs,
    parse_query_document,
    parse_system_file,
    parse_system_qrspec,
    render_system_qrspec,
)
from .synthesize import check_conformance, emit_system_qrspec, structural_reliability

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CONFORMANCE = 4


class UsageError(QuarcError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None


def _load_specs(path: str) -> dict:
    try:
        specs = parse_component_specs(_read(path))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.message}", exc.line, exc.column) from None
    return {c.name: c for c in specs}


def _load_graph(path: str, specs: dict):
    try:
        return parse_system_file(_read(path), known_components=list(specs))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc.message}", exc.line, exc.column) from None


def _policy(value: str | None) -> ParallelPolicy | None:
    return None if value is None else ParallelPolicy(value)


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="quarc",
        description="Quality and reliability composition over series-parallel systems.",
    )
    parser.add_argument(
        "--format", choices=("text", "csv", "json"), default="text",
        help="output format (default: text)",
    )
    parser.add_argument("--seed", type=int, default=0, help="simulation seed")
    parser.add_argument(
        "--tolerance", type=float, default=1e-9,
        help="reliability tolerance for conformance checks",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("characterize", help="dump one component's state machine")
    p.add_argument("--qrspec", required=True, help="component specification file")
    p.add_argument("--component", required=True, help="component name")

    p = sub.add_parser("compose", help="build and dump the composed system model")
    p.add_argument("--system", required=True, help="system structure file")
    p.add_argument("--qrspec", required=True, help="component specification file")
    p.add_argument("--parallel-mode", choices=("max", "ordered"), default=None)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--dump-states", action="store_true")
    group.add_argument("--stats", action="store_true")

    p = sub.add_parser("synthesize", help="derive the abstract system specification")
    p.add_argument("--system", required=True)
    p.add_argument("--qrspec", required=True)
    p.add_argument("--parallel-mode", choices=("max", "ordered"), default=None)
    p.add_argument("--name", default=None, help="system name for the emitted spec")
    p.add_argument(
        "--emit-sqr", action="store_true",
        help="print machine-readable .sqr instead of a table",
    )

    p = sub.add_parser("conform", help="check the derived spec against a stated one")
    p.add_argument("--system", required=True)
    p.add_argument("--qrspec", required=True)
    p.add_argument("--expected", required=True, help="stated system spec (.sqr)")
    p.add_argument("--parallel-mode", choices=("max", "ordered"), default=None)

    p = sub.add_parser("query", help="run the query blocks of an .sqdl file")
    p.add_argument("--file", required=True, help="query document")
    p.add_argument("--system", default=None, help="override the queries' system file")
    p.add_argument("--qrspec", default=None, help="override the queries' qrspec file")

    sub.add_parser("repl", help="interactive query loop")

    p = sub.add_parser("oracle", help="compare analytic values against simulation")
    p.add_argument("--system", required=True)
    p.add_argument("--qrspec", required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--limit", type=int, default=None, help="only the first N states")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (try --help)")
        return _dispatch(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, QuarcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _dispatch(args) -> int:
    if args.command == "characterize":
        specs = _load_specs(args.qrspec)
        if args.component not in specs:
            raise ValidationError(f"no component named {args.component}")
        model = build_component_model(specs[args.component])
        sys.stdout.write(render_model(model, args.format))
        return EXIT_OK

    if args.command == "compose":
        specs = _load_specs(args.qrspec)
        graph = _load_graph(args.system, specs)
        model = build_system_model(graph, specs, _policy(args.parallel_mode))
        if args.stats:
            print(model_stats_line(model))
            print("note: edge counts use one-component-at-a-time transition semantics")
        else:
            sys.stdout.write(render_model(model, args.format))
        return EXIT_OK

    if args.command == "synthesize":
        specs = _load_specs(args.qrspec)
        graph = _load_graph(args.system, specs)
        model = build_system_model(graph, specs, _policy(args.parallel_mode))
        name = args.name or Path(args.system).stem
        spec = emit_system_qrspec(graph, specs, model, name=name)
        if args.emit_sqr:
            sys.stdout.write(render_system_qrspec(spec))
        else:
            sys.stdout.write(render_system_spec(spec, args.format))
        return EXIT_OK

    if args.command == "conform":
        specs = _load_specs(args.qrspec)
        graph = _load_graph(args.system, specs)
        model = build_system_model(graph, specs, _policy(args.parallel_mode))
        derived = emit_system_qrspec(graph, specs, model)
        try:
            expected = parse_system_qrspec(_read(args.expected))
        except ParseError as exc:
            raise ParseError(
                f"{args.expected}: {exc.message}", exc.line, exc.column
            ) from None
        report = check_conformance(derived, expected, tolerance=args.tolerance)
        sys.stdout.write(render_conformance(report, args.format))
        return EXIT_OK if report.passed else EXIT_CONFORMANCE

    if args.command == "query":
        return _run_query_file(args)

    if args.command == "repl":
        return _repl(args)

    if args.command == "oracle":
        return _oracle(args)

    raise UsageError(f"unknown command {args.command}")


def _run_query_file(args) -> int:
    text = _read(args.file)
    try:
        queries = parse_query_document(text)
    except ParseError as exc:
        raise ParseError(f"{args.file}: {exc.message}", exc.line, exc.column) from None
    base = Path(args.file).resolve().parent
    for query in queries:
        if args.system is not None and args.system != query.system_file:
            print(
                f"warning: overriding system file {query.system_file} "
                f"with {args.system}",
                file=sys.stderr,
            )
            query = _override(query, system_file=args.system)
        if args.qrspec is not None and args.qrspec != query.qrspec_file:
            print(
                f"warning: overriding qrspec file {query.qrspec_file} "
                f"with {args.qrspec}",
                file=sys.stderr,
            )
            query = _override(query, qrspec_file=args.qrspec)
        graph, specs = load_query_inputs(query, base)
        model = build_system_model(graph, specs)
        table = run_query_on_model(query, model, graph, specs)
        sys.stdout.write(render_result_table(table, args.format))
    return EXIT_OK


def _override(query, **changes):
    import dataclasses

    return dataclasses.replace(query, **changes)


def _repl(args) -> int:
    interactive = sys.stdin.isatty()
    if interactive:
        print("enter query blocks (end_query runs them); quit/exit leaves")
    buffer: list[str] = []
    prompt_shown = False
    for line in sys.stdin:
        stripped = line.strip()
        if not buffer and stripped in ("quit", "exit"):
            break
        buffer.append(line)
        if not (stripped == "end_query" or stripped.endswith(" end_query")):
            continue
        block = "".join(buffer)
        buffer = []
        try:
            queries = parse_query_document(block)
            for query in queries:
                graph, specs = load_query_inputs(query, Path.cwd())
                model = build_system_model(graph, specs)
                table = run_query_on_model(query, model, graph, specs)
                sys.stdout.write(render_result_table(table, args.format))
                sys.stdout.flush()
        except (ParseError, ValidationError, QuarcError) as exc:
            print(f"error: {exc}", file=sys.stderr)
    return EXIT_OK


def _oracle(args) -> int:
    specs = _load_specs(args.qrspec)
    graph = _load_graph(args.system, specs)
    model = build_system_model(graph, specs)
    order = [c.name for c in model.components]
    assignment = model.reliability_assignment()
    states = model.states[: args.limit] if args.limit else model.states
    seeds = spawn_seeds(args.seed, 2 * len(states))
    rows = []
    worst = 0.0
    for i, st in enumerate(states):
        analytic_p = poly_eval(st.expr, assignment)
        est_p = simulate_state_probability(
            model, st.config, trials=args.trials, seed=seeds[2 * i]
        )
        analytic_r = structural_reliability(graph, specs, st.config, order)
        est_r = simulate_mode_reliability(
            graph, specs, st.config, trials=args.trials, seed=seeds[2 * i + 1],
            component_order=order,
        )
        dev_p = abs(analytic_p - est_p.value)
        dev_r = abs(analytic_r - est_r.value)
        worst = max(
            worst,
            dev_p / est_p.stderr if est_p.stderr else (1.0 if dev_p > 1e-12 else 0.0),
            dev_r / est_r.stderr if est_r.stderr else (1.0 if dev_r > 1e-12 else 0.0),
        )
        rows.append(
            [
                st.config.text,
                format_probability(analytic_p),
                format_probability(est_p.value),
                format_probability(est_p.stderr),
                format_probability(analytic_r),
                format_probability(est_r.value),
                format_probability(est_r.stderr),
            ]
        )
    headers = [
        "Config",
        "P analytic",
        "P simulated",
        "P stderr",
        "R analytic",
        "R simulated",
        "R stderr",
    ]
    if args.format == "json":
        import json

        doc = [
            dict(zip(["config", "p", "p_sim", "p_err", "r", "r_sim", "r_err"], row))
            for row in rows
        ]
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        from .render import _csv_text

        sys.stdout.write(_csv_text(headers, rows))
    else:
        print(render_table(headers, rows))
        print(f"trials per estimate: {args.trials}, worst deviation: {worst:.2f} stderr")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
