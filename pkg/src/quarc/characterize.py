"""Build the degradation state machine of a single component.

A component with d operating modes yields every legal segment of length d
(2^(d+1) - 1 of them).  From a state operating in mode k there are exactly
two successors: the mode fails (slot k -> 0) or is suspended by the designer
(slot k -> Y); either way mode k+1 takes over when it exists.  Dead states
have no successors.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .core import (
    ComponentSpec,
    Configuration,
    ModelState,
    QRModel,
    is_valid_segment,
    segment_operating_slot,
)
from .quality import EMPTY_MAP, QualityMap
from .relpoly import RelExpr


def segment_after_failure(segment: str) -> str | None:
    """Successor segment when the operating mode fails; None if dead."""
    return _advance(segment, "0")


def segment_after_suspend(segment: str) -> str | None:
    """Successor segment when the operating mode is suspended; None if dead."""
    return _advance(segment, "Y")


def _advance(segment: str, mark: str) -> str | None:
    k = segment_operating_slot(segment)
    if k is None:
        return None
    nxt = segment[:k] + mark
    if k + 1 < len(segment):
        nxt += "1" + "X" * (len(segment) - k - 2)
    return nxt


def enumerate_segments(d: int) -> list[str]:
    """All valid segments of length d, sorted (count is 2^(d+1) - 1)."""
    live = [
        "".join(prefix) + "1" + "X" * (d - k - 1)
        for k in range(d)
        for prefix in _dead_words(k)
    ]
    dead = ["".join(w) for w in _dead_words(d) if w]
    return sorted(live + dead)


def _dead_words(length: int) -> Iterable[tuple[str, ...]]:
    if length == 0:
        yield ()
        return
    for rest in _dead_words(length - 1):
        yield ("0",) + rest
        yield ("Y",) + rest


@lru_cache(maxsize=8192)
def _segment_terms(segment: str) -> tuple[tuple[int, int], ...]:
    # expanded product over one segment's slots, variables as local bit masks;
    # every slot contributes a distinct variable, so no like terms arise
    terms = [(0, 1)]
    for slot, ch in enumerate(segment):
        bit = 1 << slot
        if ch == "1":
            terms = [(mask | bit, coeff) for mask, coeff in terms]
        elif ch == "0":
            terms = [
                pair
                for mask, coeff in terms
                for pair in ((mask, coeff), (mask | bit, -coeff))
            ]
    return tuple(terms)


class _ExprBuilder:
    """Turns configurations into canonical expressions over one variable universe."""

    def __init__(self, components: Sequence[ComponentSpec]):
        self.offsets = []
        self.slot_vars: list[tuple[str, int]] = []
        offset = 0
        for spec in components:
            self.offsets.append(offset)
            for k in range(1, spec.mode_count + 1):
                self.slot_vars.append((spec.name, k))
            offset += spec.mode_count
        self._vars_of_mask: dict[int, tuple] = {0: ()}

    def _vars(self, mask: int) -> tuple:
        cached = self._vars_of_mask.get(mask)
        if cached is None:
            cached = tuple(
                sorted(
                    self.slot_vars[b] for b in range(mask.bit_length()) if mask >> b & 1
                )
            )
            self._vars_of_mask[mask] = cached
        return cached

    def expr(self, config: Configuration) -> RelExpr:
        terms = [(0, 1)]
        for offset, segment in zip(self.offsets, config.segments):
            seg_terms = _segment_terms(segment)
            if seg_terms == ((0, 1),):
                continue
            if terms == [(0, 1)]:
                terms = [(mask << offset, coeff) for mask, coeff in seg_terms]
            else:
                terms = [
                    (mask | (seg_mask << offset), coeff * seg_coeff)
                    for mask, coeff in terms
                    for seg_mask, seg_coeff in seg_terms
                ]
        monomials = [(self._vars(mask), coeff) for mask, coeff in terms]
        monomials.sort(key=lambda item: item[0])
        return RelExpr(tuple(monomials))


def state_expr(components: Sequence[ComponentSpec], config: Configuration) -> RelExpr:
    """Operating-probability polynomial of a configuration.

    Product over slots: r for an operating slot, (1 - r) for a failed one,
    1 for not-availed and suspended slots; expanded and normalized.
    """
    return _ExprBuilder(components).expr(config)


def expression_text(components: Sequence[ComponentSpec], config: Configuration) -> str:
    """Factored rendering of a state expression, e.g. (1-r_{3,1}).r_{3,2}.r_{2,1}."""
    factors = []
    for spec, segment in zip(components, config.segments):
        sub = _subscript(spec.name)
        for slot, ch in enumerate(segment):
            if ch == "1":
                factors.append(f"r_{{{sub},{slot + 1}}}")
            elif ch == "0":
                factors.append(f"(1-r_{{{sub},{slot + 1}}})")
    return ".".join(factors) if factors else "1"


def _subscript(name: str) -> str:
    if len(name) > 1 and name[0] == "C" and name[1:].isdigit():
        return name[1:]
    return name


def assemble_model(
    components: Sequence[ComponentSpec],
    quality_of: dict[Configuration, QualityMap],
) -> QRModel:
    """Assemble a model from per-configuration quality maps.

    Configurations must cover the full product of valid segments.  States are
    sorted by configuration text; edges are generated per live segment (one
    failure and one suspend move per operating component, one component moving
    at a time).
    """
    configs = sorted(quality_of, key=lambda c: c.segments)
    builder = _ExprBuilder(components)
    states = tuple(
        ModelState(c, quality_of[c], builder.expr(c)) for c in configs
    )
    index = {st.config: i for i, st in enumerate(states)}
    fail: set[tuple[int, int]] = set()
    susp: set[tuple[int, int]] = set()
    for i, st in enumerate(states):
        for ci, segment in enumerate(st.config.segments):
            f = segment_after_failure(segment)
            if f is None:
                continue
            fail.add((i, index[st.config.replace(ci, f)]))
            s = segment_after_suspend(segment)
            susp.add((i, index[st.config.replace(ci, s)]))
    initial = Configuration(
        tuple("1" + "X" * (c.mode_count - 1) for c in components)
    )
    return QRModel(
        components=tuple(components),
        states=states,
        initial=index[initial],
        failure_edges=frozenset(fail),
        suspend_edges=frozenset(susp),
    )


def build_component_model(spec: ComponentSpec) -> QRModel:
    """Characterize one component as its full degradation state machine."""
    quality_of: dict[Configuration, QualityMap] = {}
    for segment in enumerate_segments(spec.mode_count):
        assert is_valid_segment(segment)
        k = segment_operating_slot(segment)
        qmap = spec.quality[k] if k is not None else EMPTY_MAP
        quality_of[Configuration((segment,))] = qmap
    return assemble_model([spec], quality_of)
