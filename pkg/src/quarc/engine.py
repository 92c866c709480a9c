"""Query execution: build the system model, filter its states, project fields.

A query names the system structure and component specification files, the
fields to report, and where-constraints.  `reliability` filters on the
structural mode reliability (path success probability), `operate_prob` on the
state's operating probability; `failure` counts fully failed components and
`suspend` counts suspended slots.  Quality constraints come in two shapes:
a bare input list demands a nonzero output at every listed level, while an
input list with output bounds is checked at each of the state's own levels
against the bound paired with the largest queried input below it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .compose import build_system_model
from .core import Configuration, ParallelPolicy, QRModel, SystemGraph
from .errors import QuarcError
from .quality import QualityMap
from .relpoly import poly_eval
from .sqdl import Query, parse_component_specs, parse_system_file
from .synthesize import structural_reliability


def failure_count(config: Configuration) -> int:
    """Number of components whose whole segment has failed."""
    return sum(1 for seg in config.segments if set(seg) == {"0"})


def suspend_count(config: Configuration) -> int:
    """Number of suspended mode slots across the whole configuration."""
    return sum(seg.count("Y") for seg in config.segments)


@dataclass(frozen=True)
class ResultRow:
    config: Configuration
    mode_statuses: tuple[tuple[str, ...], ...]
    input_levels: tuple[float, ...]
    output_values: tuple[float, ...]
    reliability: float
    operate_prob: float
    failures: int
    suspensions: int


@dataclass(frozen=True)
class ResultTable:
    query_name: str
    columns: tuple[str, ...]
    component_names: tuple[str, ...]
    rows: tuple[ResultRow, ...]
    max_failures: int | None = None
    inadmissible: tuple[str, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.rows)


def load_query_inputs(
    query: Query, base_dir: Path | str | None = None
) -> tuple[SystemGraph, dict]:
    """Read and parse the two files a query names, relative to base_dir."""
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    spec_path = base / query.qrspec_file
    system_path = base / query.system_file
    try:
        specs = parse_component_specs(spec_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise QuarcError(f"cannot read qrspec file {spec_path}: {exc}") from None
    by_name = {c.name: c for c in specs}
    try:
        graph = parse_system_file(
            system_path.read_text(encoding="utf-8"), known_components=list(by_name)
        )
    except OSError as exc:
        raise QuarcError(f"cannot read system file {system_path}: {exc}") from None
    return graph, by_name


def run_query(
    query: Query,
    base_dir: Path | str | None = None,
    policy: ParallelPolicy | None = None,
) -> ResultTable:
    """Execute a parsed query end to end."""
    graph, specs = load_query_inputs(query, base_dir)
    model = build_system_model(graph, specs, policy)
    return run_query_on_model(query, model, graph, specs)


def run_query_on_model(
    query: Query, model: QRModel, graph: SystemGraph, specs: dict
) -> ResultTable:
    c = query.constraints
    assignment = model.reliability_assignment()
    order = [comp.name for comp in model.components]
    survivors: list[ResultRow] = []
    for state in model.states:
        reliability = structural_reliability(graph, specs, state.config, order)
        if c.reliability_min is not None and reliability < c.reliability_min:
            continue
        if c.reliability_max is not None and reliability > c.reliability_max:
            continue
        prob = poly_eval(state.expr, assignment)
        if c.operate_prob_min is not None and prob < c.operate_prob_min:
            continue
        if c.operate_prob_max is not None and prob > c.operate_prob_max:
            continue
        failures = failure_count(state.config)
        if c.failure_min is not None and failures < c.failure_min:
            continue
        if c.failure_max is not None and failures > c.failure_max:
            continue
        suspensions = suspend_count(state.config)
        if c.suspend_min is not None and suspensions < c.suspend_min:
            continue
        if c.suspend_max is not None and suspensions > c.suspend_max:
            continue
        if not _quality_admits(state.quality, c):
            continue
        quality = state.quality
        if c.input_levels is not None:
            quality = quality.clipped(min(c.input_levels))
        survivors.append(
            ResultRow(
                config=state.config,
                mode_statuses=tuple(
                    tuple(status.letter for status in seg)
                    for seg in state.config.statuses()
                ),
                input_levels=quality.levels,
                output_values=quality.outputs,
                reliability=reliability,
                operate_prob=prob,
                failures=failures,
                suspensions=suspensions,
            )
        )
    survivors.sort(key=lambda r: (-r.operate_prob, r.config.text))

    max_failures = max((r.failures for r in survivors), default=None) if survivors else None
    inadmissible = []
    for i, comp in enumerate(model.components):
        dead = "0" * comp.mode_count
        if not any(r.config.segments[i] == dead for r in survivors):
            inadmissible.append(comp.name)
    return ResultTable(
        query_name=query.name,
        columns=query.select_fields,
        component_names=tuple(order),
        rows=tuple(survivors),
        max_failures=max_failures,
        inadmissible=tuple(inadmissible),
    )


def _quality_admits(quality: QualityMap, c) -> bool:
    if c.input_levels is None:
        return True
    if c.output_min is None and c.output_max is None:
        return all(quality.lookup(level) > 0 for level in c.input_levels)
    queried = sorted(zip(c.input_levels, range(len(c.input_levels))), reverse=True)
    floor = min(c.input_levels)

    def bound_at(level: float, bounds) -> float | None:
        if level < floor:
            return None
        for q_level, idx in queried:
            if q_level <= level:
                return bounds[idx]
        return None

    for level, value in quality.pairs:
        if c.output_min is not None:
            b = bound_at(level, c.output_min)
            if b is not None and value < b:
                return False
        if c.output_max is not None:
            b = bound_at(level, c.output_max)
            if b is not None and value > b:
                return False
    return True
