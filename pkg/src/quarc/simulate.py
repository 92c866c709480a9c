"""Seeded Monte-Carlo cross-validation of the analytic probabilities.

Suspensions are designer choices, never sampled: a trial fixes the suspended
slots up front (taken from the target configuration) and samples every other
mode slot independently as operating-vs-failed.  The realized component state
is the first slot that neither failed nor was suspended.  The generator is
numpy's PCG64, seeded explicitly, so runs are reproducible across platforms;
per-case child seeds are spawned deterministically from the root seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import ComponentSpec, Configuration, QRModel, SystemGraph
from .errors import ValidationError
from .core import segment_operating_slot


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    trials: int


def _slot_offsets(mode_counts: Sequence[int]) -> list[int]:
    offsets = [0]
    for d in mode_counts:
        offsets.append(offsets[-1] + d)
    return offsets


def schedule_from_config(config: Configuration) -> frozenset[int]:
    """Flat indices of the suspended slots of a configuration."""
    schedule = set()
    base = 0
    for seg in config.segments:
        for i, ch in enumerate(seg):
            if ch == "Y":
                schedule.add(base + i)
        base += len(seg)
    return frozenset(schedule)


def simulate_state_probability(
    model: QRModel,
    target: Configuration,
    schedule: frozenset[int] | None = None,
    trials: int = 100_000,
    seed: int = 0,
) -> Estimate:
    """Estimate how often sampled failures realize the target configuration."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    derived = schedule_from_config(target)
    if schedule is None:
        schedule = derived
    elif schedule != derived:
        raise ValidationError(
            "target configuration is inconsistent with the suspension schedule"
        )

    reliabilities = np.array(
        [z for c in model.components for z in c.reliabilities]
    )
    offsets = _slot_offsets(model.mode_counts)
    need_true: list[int] = []
    need_false: list[int] = []
    for ci, seg in enumerate(target.segments):
        base = offsets[ci]
        k = segment_operating_slot(seg)
        upto = len(seg) if k is None else k
        for j in range(upto):
            if base + j not in schedule:
                need_false.append(base + j)
        if k is not None:
            need_true.append(base + k)

    rng = np.random.Generator(np.random.PCG64(seed))
    ok = rng.random((trials, len(reliabilities))) < reliabilities
    match = np.ones(trials, dtype=bool)
    if need_true:
        match &= ok[:, need_true].all(axis=1)
    if need_false:
        match &= ~ok[:, need_false].any(axis=1)
    return _estimate(match)


def simulate_mode_reliability(
    graph: SystemGraph,
    specs: Mapping[str, ComponentSpec] | Sequence[ComponentSpec],
    config: Configuration,
    trials: int = 100_000,
    seed: int = 0,
    component_order: Sequence[str] | None = None,
) -> Estimate:
    """Estimate the probability that at least one input-to-output path succeeds.

    Each live component succeeds with its current-mode reliability; dead
    components (fully failed or suspended) always fail.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if not isinstance(specs, Mapping):
        specs = {c.name: c for c in specs}
    if component_order is None:
        component_order = graph.component_order()
    if len(component_order) != len(config.segments):
        raise ValidationError(
            f"configuration has {len(config.segments)} segments for "
            f"{len(component_order)} components"
        )
    success_prob = []
    for name, seg in zip(component_order, config.segments):
        k = segment_operating_slot(seg)
        success_prob.append(0.0 if k is None else specs[name].reliabilities[k])
    probs = np.array(success_prob)
    position = {name: i for i, name in enumerate(component_order)}

    rng = np.random.Generator(np.random.PCG64(seed))
    ok = rng.random((trials, len(probs))) < probs
    any_path = np.zeros(trials, dtype=bool)
    for path in graph.component_paths():
        cols = sorted({position[name] for name in path})
        any_path |= ok[:, cols].all(axis=1)
    return _estimate(any_path)


def _estimate(outcomes: np.ndarray) -> Estimate:
    n = outcomes.shape[0]
    p = float(outcomes.mean())
    return Estimate(value=p, stderr=float(np.sqrt(p * (1.0 - p) / n)), trials=n)


def spawn_seeds(root_seed: int, count: int) -> list[int]:
    """Deterministic child seeds for sharded or per-case simulation."""
    return [
        int(s.generate_state(1)[0]) for s in np.random.SeedSequence(root_seed).spawn(count)
    ]
