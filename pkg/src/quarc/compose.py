"""Series and parallel composition of models, and whole-system construction.

Composition pairs up operand states whose configurations agree on every
shared component, keeps one segment per distinct component, and regenerates
the one-component-at-a-time transition structure.  Only the quality maps
differ between the two operators: series chains the upstream output through
the downstream map, parallel merges redundant branch maps under the chosen
policy.
"""
from __future__ import annotations

from typing import Mapping, Sequence

from .characterize import assemble_model, build_component_model, state_expr
from .core import (
    ComponentSpec,
    Configuration,
    ParallelPolicy,
    QRModel,
    SystemGraph,
)
from .errors import ValidationError
from .quality import EMPTY_MAP, QualityMap, canonicalize_quality_map


def chain_series_maps(upstream: QualityMap, downstream: QualityMap) -> QualityMap:
    """Feed each upstream output through the downstream lookup."""
    pairs = []
    for level, out in upstream.pairs:
        chained = downstream.lookup(out)
        if chained > 0:
            pairs.append((level, chained))
    return canonicalize_quality_map(pairs)


def merge_parallel_maps(
    a: QualityMap, b: QualityMap, policy: ParallelPolicy = ParallelPolicy.MAX
) -> QualityMap:
    """Merge two redundant branch maps.

    MAX takes the better output at every level of either branch.  ORDERED
    reports the first branch whenever it is alive at all and falls back to
    the second only when the first is dead.
    """
    if policy is ParallelPolicy.ORDERED:
        return a if a else b
    levels = sorted({level for level, _ in a.pairs + b.pairs}, reverse=True)
    pairs = []
    for level in levels:
        out = max(a.lookup(level), b.lookup(level))
        if out > 0:
            pairs.append((level, out))
    return canonicalize_quality_map(pairs)


def compose_series(left: QRModel, right: QRModel) -> QRModel:
    return _compose(left, right, chain_series_maps)


def compose_parallel(
    left: QRModel, right: QRModel, policy: ParallelPolicy = ParallelPolicy.MAX
) -> QRModel:
    def merge(a: QualityMap, b: QualityMap) -> QualityMap:
        return merge_parallel_maps(a, b, policy)

    return _compose(left, right, merge)


def _compose(left: QRModel, right: QRModel, combine) -> QRModel:
    by_name = {c.name: c for c in left.components}
    for c in right.components:
        if c.name in by_name and by_name[c.name] != c:
            raise ValidationError(f"component {c.name} has conflicting definitions")
    components = left.components + tuple(
        c for c in right.components if c.name not in by_name
    )
    shared = [
        i for i, c in enumerate(right.components) if c.name in by_name
    ]
    left_pos = {c.name: i for i, c in enumerate(left.components)}
    fresh = [i for i in range(len(right.components)) if i not in shared]

    def projection(config: Configuration) -> tuple[str, ...]:
        return tuple(config.segments[i] for i in shared)

    def left_projection(config: Configuration) -> tuple[str, ...]:
        return tuple(
            config.segments[left_pos[right.components[i].name]] for i in shared
        )

    groups: dict[tuple[str, ...], list] = {}
    for st in right.states:
        groups.setdefault(projection(st.config), []).append(st)

    quality_of: dict[Configuration, QualityMap] = {}
    for a in left.states:
        for b in groups.get(left_projection(a.config), []):
            config = Configuration(
                a.config.segments + tuple(b.config.segments[i] for i in fresh)
            )
            quality_of[config] = combine(a.quality, b.quality)
    return assemble_model(components, quality_of)


def build_system_model(
    graph: SystemGraph,
    specs: Mapping[str, ComponentSpec] | Sequence[ComponentSpec],
    policy: ParallelPolicy | None = None,
) -> QRModel:
    """Compose the whole system by path enumeration.

    Each input-to-output path folds its component models in series, then the
    path models fold in parallel in path rank order (which is what the
    ordered policy keys on).
    """
    if not isinstance(specs, Mapping):
        specs = {c.name: c for c in specs}
    if policy is None:
        policy = graph.policy
    for vertex in graph.vertices:
        if graph.labels[vertex] not in specs:
            raise ValidationError(
                f"vertex {vertex}: no specification for component {graph.labels[vertex]}"
            )
    component_models = {
        name: build_component_model(specs[name])
        for name in {graph.labels[v] for v in graph.vertices}
    }
    path_models = []
    for path in graph.component_paths():
        model = component_models[path[0]]
        for name in path[1:]:
            model = compose_series(model, component_models[name])
        path_models.append(model)
    system = path_models[0]
    for nxt in path_models[1:]:
        system = compose_parallel(system, nxt, policy)
    return system


def models_equivalent(a: QRModel, b: QRModel) -> bool:
    """Equality up to component reordering.

    True iff, after permuting segments into sorted component-name order, the
    two models have identical state sets (configuration, canonical quality
    map, canonical expression), the same initial state, and the same
    kind-labeled transition relation.
    """
    names_a = sorted(c.name for c in a.components)
    names_b = sorted(c.name for c in b.components)
    if names_a != names_b:
        return False

    def canonical(model: QRModel):
        order = sorted(range(len(model.components)), key=lambda i: model.components[i].name)
        comps = tuple(model.components[i] for i in order)

        if order == list(range(len(order))):
            def permute(config: Configuration) -> tuple[str, ...]:
                return config.segments
        else:
            def permute(config: Configuration) -> tuple[str, ...]:
                return tuple(config.segments[i] for i in order)

        states = {
            permute(st.config): (st.quality, st.expr) for st in model.states
        }
        edges = set()
        for kind, pairs in (("F", model.failure_edges), ("C", model.suspend_edges)):
            for i, j in pairs:
                edges.add(
                    (kind, permute(model.states[i].config), permute(model.states[j].config))
                )
        return comps, states, permute(model.states[model.initial].config), edges

    return canonical(a) == canonical(b)
