"""Shared domain types: components, system graphs, configurations, models.

A configuration assigns one status per operating-mode slot.  Within one
component's segment the legal shapes are "(0|Y)* 1 X*" (some prefix of the
mode chain is exhausted, one mode operates, later modes are not yet availed)
or "(0|Y)+" (the whole chain is exhausted: the component is dead).
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .quality import QualityMap, canonicalize_quality_map
from .relpoly import RelExpr

_SEGMENT_RE = re.compile(r"[0Y]*1X*\Z|[0Y]+\Z")


class ModeStatus(enum.Enum):
    OPERATING = "1"
    FAILED = "0"
    NOT_AVAILED = "X"
    SUSPENDED = "Y"

    @property
    def letter(self) -> str:
        return _STATUS_LETTERS[self]


_STATUS_LETTERS = {
    ModeStatus.OPERATING: "OP",
    ModeStatus.FAILED: "FL",
    ModeStatus.NOT_AVAILED: "NA",
    ModeStatus.SUSPENDED: "SU",
}


def is_valid_segment(segment: str) -> bool:
    """True iff the slot string is a legal single-component configuration."""
    return bool(segment) and _SEGMENT_RE.match(segment) is not None


def segment_operating_slot(segment: str) -> int | None:
    """0-based index of the operating slot, or None for a dead segment."""
    pos = segment.find("1")
    return pos if pos >= 0 else None


@dataclass(frozen=True)
class Configuration:
    """Per-component segments of mode-slot statuses, in model component order."""

    segments: tuple[str, ...]

    @property
    def text(self) -> str:
        return "".join(self.segments)

    def replace(self, index: int, segment: str) -> "Configuration":
        parts = list(self.segments)
        parts[index] = segment
        return Configuration(tuple(parts))

    def statuses(self) -> tuple[tuple[ModeStatus, ...], ...]:
        return tuple(tuple(ModeStatus(ch) for ch in seg) for seg in self.segments)

    def __str__(self) -> str:
        return self.text


def validate_configuration(config: Configuration, mode_counts: Sequence[int]) -> None:
    if len(config.segments) != len(mode_counts):
        raise ValidationError(
            f"expected {len(mode_counts)} segments, got {len(config.segments)}"
        )
    for seg, d in zip(config.segments, mode_counts):
        if len(seg) != d:
            raise ValidationError(f"segment {seg!r} has {len(seg)} slots, expected {d}")
        if not is_valid_segment(seg):
            raise ValidationError(f"invalid segment {seg!r}")


@dataclass(frozen=True)
class ComponentSpec:
    """One component: per-mode reliabilities and per-mode quality maps."""

    name: str
    reliabilities: tuple[float, ...]
    quality: tuple[QualityMap, ...]

    @property
    def mode_count(self) -> int:
        return len(self.reliabilities)


def validate_component_spec(
    name: str,
    reliabilities: Sequence[float],
    quality: Sequence[QualityMap | Iterable[tuple[float, float]]],
) -> ComponentSpec:
    """Check invariants and canonicalize the quality maps."""
    if not name:
        raise ValidationError("component name must be non-empty")
    if len(reliabilities) < 1:
        raise ValidationError(f"component {name} needs at least one operating mode")
    if len(quality) != len(reliabilities):
        raise ValidationError(
            f"component {name}: {len(reliabilities)} modes but "
            f"{len(quality)} quality maps"
        )
    for k, z in enumerate(reliabilities, start=1):
        if not 0.0 < z <= 1.0:
            raise ValidationError(
                f"component {name} mode {k}: reliability {z:g} outside (0,1]"
            )
    maps = tuple(
        m if isinstance(m, QualityMap) else canonicalize_quality_map(m)
        for m in quality
    )
    return ComponentSpec(name, tuple(float(z) for z in reliabilities), maps)


class ParallelPolicy(enum.Enum):
    MAX = "max"
    ORDERED = "ordered"


@dataclass(frozen=True)
class SystemGraph:
    """Labeled DAG of component instances between one input and one output node."""

    input_node: str
    output_node: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    labels: Mapping[str, str]
    policy: ParallelPolicy = ParallelPolicy.MAX
    paths: tuple[tuple[str, ...], ...] = ()

    def component_paths(self) -> tuple[tuple[str, ...], ...]:
        """Component-name sequence of each input-to-output path, in rank order."""
        return tuple(tuple(self.labels[v] for v in path) for path in self.paths)

    def component_order(self) -> tuple[str, ...]:
        """Distinct component names by first appearance along the ranked paths."""
        seen: list[str] = []
        for path in self.component_paths():
            for name in path:
                if name not in seen:
                    seen.append(name)
        return tuple(seen)


def validate_system_graph(
    input_node: str,
    output_node: str,
    vertices: Sequence[str],
    edges: Sequence[tuple[str, str]],
    labels: Mapping[str, str],
    policy: ParallelPolicy = ParallelPolicy.MAX,
    known_components: Iterable[str] | None = None,
) -> SystemGraph:
    """Check structure (single I/O, acyclic, fully path-covered) and rank paths.

    Paths are enumerated depth-first following edge declaration order; that
    rank doubles as the precedence used by the ordered parallel policy.
    """
    if input_node == output_node:
        raise ValidationError("input and output nodes must differ")
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise ValidationError("duplicate vertex declaration")
    if input_node in vset or output_node in vset:
        raise ValidationError("input/output nodes must not be labeled vertices")
    for v in vertices:
        if v not in labels:
            raise ValidationError(f"vertex {v} has no component label")
    if known_components is not None:
        known = set(known_components)
        for v in vertices:
            if labels[v] not in known:
                raise ValidationError(f"vertex {v}: unknown component {labels[v]}")

    nodes = vset | {input_node, output_node}
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for src, dst in edges:
        if src not in nodes or dst not in nodes:
            missing = src if src not in nodes else dst
            raise ValidationError(f"edge references undeclared node {missing}")
        if src == output_node or dst == input_node:
            raise ValidationError(f"edge ({src},{dst}) runs against the input/output")
        if src == input_node and dst == output_node:
            raise ValidationError("edge connects input directly to output")
        adjacency[src].append(dst)

    # three-color DFS for cycles over the vertex subgraph
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}

    def visit(node: str) -> None:
        color[node] = GRAY
        for nxt in adjacency[node]:
            if color[nxt] == GRAY:
                raise ValidationError(f"cycle detected through {nxt}")
            if color[nxt] == WHITE:
                visit(nxt)
        color[node] = BLACK

    for n in sorted(nodes):
        if color[n] == WHITE:
            visit(n)

    paths: list[tuple[str, ...]] = []
    stack: list[str] = []

    def walk(node: str) -> None:
        for nxt in adjacency[node]:
            if nxt == output_node:
                paths.append(tuple(stack))
            else:
                stack.append(nxt)
                walk(nxt)
                stack.pop()

    walk(input_node)
    if not paths:
        raise ValidationError("no path from input to output")
    on_path = {v for path in paths for v in path}
    dangling = sorted(vset - on_path)
    if dangling:
        raise ValidationError(f"vertex {dangling[0]} lies on no input-to-output path")

    return SystemGraph(
        input_node=input_node,
        output_node=output_node,
        vertices=tuple(vertices),
        edges=tuple(edges),
        labels=dict(labels),
        policy=policy,
        paths=tuple(paths),
    )


@dataclass(frozen=True)
class ModelState:
    config: Configuration
    quality: QualityMap
    expr: RelExpr


@dataclass(frozen=True)
class QRModel:
    """State machine over mode-slot configurations with quality and probability.

    States are sorted by configuration text; edges are index pairs labeled by
    kind (failure vs suspend) in the two edge sets.
    """

    components: tuple[ComponentSpec, ...]
    states: tuple[ModelState, ...]
    initial: int
    failure_edges: frozenset[tuple[int, int]]
    suspend_edges: frozenset[tuple[int, int]]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_index", {st.config: i for i, st in enumerate(self.states)}
        )

    @property
    def mode_counts(self) -> tuple[int, ...]:
        return tuple(c.mode_count for c in self.components)

    @property
    def variables(self) -> tuple[tuple[str, int], ...]:
        return tuple(
            (c.name, k) for c in self.components for k in range(1, c.mode_count + 1)
        )

    def state_index(self, config: Configuration) -> int:
        try:
            return self._index[config]
        except KeyError:
            raise ValidationError(f"no state with configuration {config.text}") from None

    def reliability_assignment(self) -> dict[tuple[str, int], float]:
        """Variable assignment taken straight from the component reliabilities."""
        return {
            (c.name, k): c.reliabilities[k - 1]
            for c in self.components
            for k in range(1, c.mode_count + 1)
        }

    def component(self, name: str) -> ComponentSpec:
        for c in self.components:
            if c.name == name:
                return c
        raise ValidationError(f"model has no component named {name}")


@dataclass(frozen=True)
class SystemModeEntry:
    """One composite operating mode of a system-level specification."""

    mode_tuple: tuple[int, ...]
    reliability: float
    quality: QualityMap


@dataclass(frozen=True)
class SystemQRSpec:
    """Abstract system-level specification: per composite mode, reliability and quality."""

    name: str
    component_names: tuple[str, ...]
    mode_counts: tuple[int, ...]
    modes: tuple[SystemModeEntry, ...]

    @property
    def input_levels(self) -> tuple[float, ...]:
        levels = {level for entry in self.modes for level in entry.quality.levels}
        return tuple(sorted(levels, reverse=True))

    def entry(self, mode_tuple: tuple[int, ...]) -> SystemModeEntry | None:
        for e in self.modes:
            if e.mode_tuple == mode_tuple:
                return e
        return None
