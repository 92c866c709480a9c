"""Quality maps: guaranteed output value per input quality level.

A map is a list of (level, output) pairs with strictly decreasing levels and
strictly decreasing outputs, each output attached to the smallest level that
achieves it.  The empty map is the all-zero map of a dead or fully suspended
unit.  Looking up an input quality q yields the output paired with the
largest level <= q, and 0 when q falls below every level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError

Pair = tuple[float, float]


@dataclass(frozen=True)
class QualityMap:
    """Canonical input-level to output-value map (build via canonicalize_quality_map)."""

    pairs: tuple[Pair, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.pairs)

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(level for level, _ in self.pairs)

    @property
    def outputs(self) -> tuple[float, ...]:
        return tuple(value for _, value in self.pairs)

    def lookup(self, q: float) -> float:
        """Output guaranteed at input quality q (0 below the bottom level)."""
        for level, value in self.pairs:
            if level <= q:
                return value
        return 0.0

    def clipped(self, min_level: float) -> "QualityMap":
        """Restriction to levels >= min_level (used for display only)."""
        return QualityMap(tuple(p for p in self.pairs if p[0] >= min_level))


EMPTY_MAP = QualityMap()


def canonicalize_quality_map(pairs: Iterable[Pair]) -> QualityMap:
    """Normalize raw (level, output) pairs into a canonical QualityMap.

    Zero-output pairs are dropped; duplicate outputs collapse onto the
    smallest level that achieves them; levels end up strictly decreasing.
    Rejects a pair whose output exceeds its level, conflicting duplicate
    levels, and maps whose output increases as the level decreases.
    """
    seen: dict[float, float] = {}
    for level, value in pairs:
        level = float(level)
        value = float(value)
        if level <= 0:
            raise ValidationError(f"quality level must be positive, got {level:g}")
        if value < 0:
            raise ValidationError(f"quality output must be non-negative, got {value:g}")
        if value > level:
            raise ValidationError(
                f"quality output {value:g} exceeds its input level {level:g}"
            )
        if level in seen and seen[level] != value:
            raise ValidationError(
                f"conflicting outputs {seen[level]:g} and {value:g} for level {level:g}"
            )
        seen[level] = value

    # smallest level per distinct non-zero output
    best: dict[float, float] = {}
    for level, value in seen.items():
        if value == 0.0:
            continue
        if value not in best or level < best[value]:
            best[value] = level

    ordered = sorted(((level, value) for value, level in best.items()), reverse=True)
    for (hi_level, hi_value), (lo_level, lo_value) in zip(ordered, ordered[1:]):
        if lo_value >= hi_value:
            raise ValidationError(
                f"output {lo_value:g} at level {lo_level:g} is not below "
                f"output {hi_value:g} at level {hi_level:g}"
            )
    return QualityMap(tuple(ordered))


def format_quality_values(values: Iterable[float]) -> str:
    """Render a level/output list like <50,30,20>; empty lists render as <0>."""
    items = [format_number(v) for v in values]
    if not items:
        return "<0>"
    return "<" + ",".join(items) + ">"


def format_number(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return f"{v:g}"
