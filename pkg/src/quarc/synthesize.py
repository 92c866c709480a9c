"""Reverse synthesis of system-level specifications and conformance checking.

The full model is abstracted to failure-only behavior (suspend moves are a
designer's choice, not part of the fault-tolerance contract), each remaining
state is labeled with its composite mode tuple, and every mode gets the
structural reliability obtained from the system graph: the probability that
at least one input-to-output path fully succeeds given each component's
current-mode reliability.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import (
    ComponentSpec,
    Configuration,
    QRModel,
    SystemGraph,
    SystemModeEntry,
    SystemQRSpec,
    segment_operating_slot,
)
from .errors import ValidationError
from .relpoly import path_success_expr, poly_eval


def abstract_failure_model(model: QRModel) -> QRModel:
    """Sub-model reachable from the initial state through failure edges only."""
    succ: dict[int, list[int]] = {}
    for i, j in model.failure_edges:
        succ.setdefault(i, []).append(j)
    kept = {model.initial}
    frontier = [model.initial]
    while frontier:
        node = frontier.pop()
        for nxt in succ.get(node, ()):
            if nxt not in kept:
                kept.add(nxt)
                frontier.append(nxt)
    order = sorted(kept, key=lambda i: model.states[i].config.segments)
    renumber = {old: new for new, old in enumerate(order)}
    return QRModel(
        components=model.components,
        states=tuple(model.states[i] for i in order),
        initial=renumber[model.initial],
        failure_edges=frozenset(
            (renumber[i], renumber[j])
            for i, j in model.failure_edges
            if i in kept and j in kept
        ),
        suspend_edges=frozenset(),
    )


def mode_tuple(config: Configuration) -> tuple[int, ...]:
    """Composite mode of a configuration: mode index per component, 0 if dead."""
    modes = []
    for segment in config.segments:
        k = segment_operating_slot(segment)
        modes.append(0 if k is None else k + 1)
    return tuple(modes)


def structural_reliability(
    graph: SystemGraph,
    specs: Mapping[str, ComponentSpec] | Sequence[ComponentSpec],
    config: Configuration,
    component_order: Sequence[str] | None = None,
) -> float:
    """Probability that some input-to-output path fully succeeds.

    Each component contributes the reliability of its operating mode, or 0
    when its segment is dead (fully failed and/or suspended) — a suspended
    component blocks its paths even though its probability factor is 1.
    Components shared between paths are counted once (idempotent algebra).
    """
    if not isinstance(specs, Mapping):
        specs = {c.name: c for c in specs}
    if component_order is None:
        component_order = graph.component_order()
    if len(component_order) != len(config.segments):
        raise ValidationError(
            f"configuration has {len(config.segments)} segments for "
            f"{len(component_order)} components"
        )
    assignment: dict[str, float] = {}
    for name, segment in zip(component_order, config.segments):
        k = segment_operating_slot(segment)
        assignment[name] = 0.0 if k is None else specs[name].reliabilities[k]
    expr = path_success_expr([set(path) for path in graph.component_paths()])
    return poly_eval(expr, assignment)


def emit_system_qrspec(
    graph: SystemGraph,
    specs: Mapping[str, ComponentSpec] | Sequence[ComponentSpec],
    model: QRModel,
    name: str = "system",
) -> SystemQRSpec:
    """Abstract the model and list every composite mode with its reliability and map."""
    if not isinstance(specs, Mapping):
        specs = {c.name: c for c in specs}
    abstract = abstract_failure_model(model)
    order = [c.name for c in abstract.components]
    entries = []
    for st in abstract.states:
        entries.append(
            SystemModeEntry(
                mode_tuple=mode_tuple(st.config),
                reliability=structural_reliability(graph, specs, st.config, order),
                quality=st.quality,
            )
        )
    entries.sort(key=lambda e: e.mode_tuple, reverse=True)
    return SystemQRSpec(
        name=name,
        component_names=tuple(order),
        mode_counts=abstract.mode_counts,
        modes=tuple(entries),
    )


@dataclass(frozen=True)
class ModeMismatch:
    mode_tuple: tuple[int, ...]
    field_name: str
    expected: object
    actual: object


@dataclass(frozen=True)
class ConformanceReport:
    passed: bool
    matched: tuple[tuple[int, ...], ...]
    missing: tuple[tuple[int, ...], ...]
    extra: tuple[tuple[int, ...], ...]
    mismatches: tuple[ModeMismatch, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def check_conformance(
    derived: SystemQRSpec, given: SystemQRSpec, tolerance: float = 1e-9
) -> ConformanceReport:
    """Compare a synthesized specification against a stated one, mode by mode.

    Reliabilities must agree within the tolerance and quality maps must be
    identical after canonicalization.  Differing component universes yield a
    structural mismatch report rather than an exception.
    """
    notes = []
    if sorted(derived.component_names) != sorted(given.component_names) or dict(
        zip(derived.component_names, derived.mode_counts)
    ) != dict(zip(given.component_names, given.mode_counts)):
        notes.append(
            "component universes differ: "
            f"derived {_universe(derived)} vs given {_universe(given)}"
        )
        return ConformanceReport(
            passed=False,
            matched=(),
            missing=tuple(e.mode_tuple for e in given.modes),
            extra=tuple(e.mode_tuple for e in derived.modes),
            mismatches=(),
            notes=tuple(notes),
        )

    reorder = [given.component_names.index(n) for n in derived.component_names]

    def align(t: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(t[i] for i in reorder)

    given_by_tuple = {align(e.mode_tuple): e for e in given.modes}
    matched, missing, mismatches = [], [], []
    seen = set()
    for entry in derived.modes:
        other = given_by_tuple.get(entry.mode_tuple)
        if other is None:
            continue
        seen.add(entry.mode_tuple)
        ok = True
        if abs(entry.reliability - other.reliability) > tolerance:
            mismatches.append(
                ModeMismatch(entry.mode_tuple, "reliability", other.reliability, entry.reliability)
            )
            ok = False
        if entry.quality != other.quality:
            mismatches.append(
                ModeMismatch(entry.mode_tuple, "quality", other.quality, entry.quality)
            )
            ok = False
        if ok:
            matched.append(entry.mode_tuple)
    missing = [t for t in given_by_tuple if t not in {e.mode_tuple for e in derived.modes}]
    extra = [e.mode_tuple for e in derived.modes if e.mode_tuple not in given_by_tuple]
    passed = not mismatches and not missing and not extra
    return ConformanceReport(
        passed=passed,
        matched=tuple(matched),
        missing=tuple(missing),
        extra=tuple(extra),
        mismatches=tuple(mismatches),
        notes=tuple(notes),
    )


def _universe(spec: SystemQRSpec) -> str:
    return ",".join(
        f"{n}({d})" for n, d in zip(spec.component_names, spec.mode_counts)
    )
