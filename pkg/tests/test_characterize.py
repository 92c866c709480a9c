from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from quarc import (
    Configuration,
    build_component_model,
    expression_text,
    poly_eval,
    state_expr,
)
from quarc.characterize import (
    enumerate_segments,
    segment_after_failure,
    segment_after_suspend,
)
from quarc.core import is_valid_segment
from conftest import make_component
from tables import COMPONENT_C1, COMPONENT_C2, COMPONENT_C3


def _check_component_table(model, expected):
    assert len(model.states) == len(expected)
    assignment = model.reliability_assignment()
    for st_ in model.states:
        levels, outputs, expr_text, value = expected[st_.config.text]
        assert st_.quality.levels == tuple(float(q) for q in levels)
        assert st_.quality.outputs == tuple(float(q) for q in outputs)
        assert expression_text(model.components, st_.config) == expr_text
        assert poly_eval(st_.expr, assignment) == pytest.approx(value, abs=1e-12)


def test_component_c1_matches_reference_rows(c1):
    model = build_component_model(c1)
    _check_component_table(model, COMPONENT_C1)
    by_text = {model.states[i].config.text: i for i in range(len(model.states))}
    fail = {
        (model.states[i].config.text, model.states[j].config.text)
        for i, j in model.failure_edges
    }
    susp = {
        (model.states[i].config.text, model.states[j].config.text)
        for i, j in model.suspend_edges
    }
    assert fail == {("1X", "01"), ("01", "00"), ("Y1", "Y0")}
    assert susp == {("1X", "Y1"), ("01", "0Y"), ("Y1", "YY")}
    assert model.states[model.initial].config.text == "1X"
    assert by_text["1X"] == model.initial


def test_component_c2_matches_reference_rows(c2):
    model = build_component_model(c2)
    _check_component_table(model, COMPONENT_C2)
    assert len(model.failure_edges) == 1
    assert len(model.suspend_edges) == 1


def test_component_c3_matches_reference_rows(c3):
    model = build_component_model(c3)
    _check_component_table(model, COMPONENT_C3)


def brute_force_segments(d):
    valid = []
    for word in itertools.product("10XY", repeat=d):
        seg = "".join(word)
        live = [i for i, ch in enumerate(seg) if ch == "1"]
        if len(live) > 1:
            continue
        if live:
            k = live[0]
            ok = all(ch in "0Y" for ch in seg[:k]) and all(
                ch == "X" for ch in seg[k + 1 :]
            )
        else:
            ok = all(ch in "0Y" for ch in seg)
        if ok:
            valid.append(seg)
    return sorted(valid)


@pytest.mark.parametrize("d", range(1, 7))
def test_state_count_matches_brute_force(d):
    segments = enumerate_segments(d)
    assert segments == brute_force_segments(d)
    assert len(segments) == 2 ** (d + 1) - 1
    assert all(is_valid_segment(s) for s in segments)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_component_model_size_and_degrees(d):
    spec = make_component(
        "A", [0.5] * d, [[(10 * (j + 2), 5)] for j in range(d)]
    )
    model = build_component_model(spec)
    assert len(model.states) == 2 ** (d + 1) - 1
    out_degree = {i: 0 for i in range(len(model.states))}
    for i, _ in model.failure_edges:
        out_degree[i] += 1
    for i, _ in model.suspend_edges:
        out_degree[i] += 1
    for i, st_ in enumerate(model.states):
        live = "1" in st_.config.text
        assert out_degree[i] == (2 if live else 0)


def test_segment_moves():
    assert segment_after_failure("1X") == "01"
    assert segment_after_failure("01") == "00"
    assert segment_after_failure("Y1") == "Y0"
    assert segment_after_suspend("1X") == "Y1"
    assert segment_after_suspend("01") == "0Y"
    assert segment_after_suspend("Y1") == "YY"
    assert segment_after_failure("00") is None
    assert segment_after_suspend("YY") is None
    assert segment_after_failure("1XX") == "01X"


def test_state_expr_reference_values(c1):
    assignment = {("C1", 1): 0.8, ("C1", 2): 0.7}
    cases = {
        "Y1": 0.70,
        "YY": 1.00,
        "00": 0.06,
        "1X": 0.80,
        "0Y": 0.20,
    }
    for text, value in cases.items():
        e = state_expr([c1], Configuration((text,)))
        assert poly_eval(e, assignment) == pytest.approx(value)


def test_pure_failure_terminals_sum_to_one(c1, c2, c3):
    for spec in (c1, c2, c3):
        model = build_component_model(spec)
        assignment = model.reliability_assignment()
        reachable = {model.initial}
        frontier = [model.initial]
        succ = {}
        for i, j in model.failure_edges:
            succ.setdefault(i, []).append(j)
        while frontier:
            node = frontier.pop()
            for nxt in succ.get(node, ()):
                if nxt not in reachable:
                    reachable.add(nxt)
                    frontier.append(nxt)
        total = sum(
            poly_eval(model.states[i].expr, assignment) for i in reachable
        )
        assert total == pytest.approx(1.0, abs=1e-12)


@given(st.integers(1, 4), st.data())
def test_expression_value_in_unit_interval(d, data):
    segment = data.draw(st.sampled_from(enumerate_segments(d)))
    rel = data.draw(
        st.lists(
            st.floats(min_value=0.0, max_value=1.0), min_size=d, max_size=d
        )
    )
    spec = make_component("A", [0.5] * d, [[(10, 5)] for _ in range(d)])
    e = state_expr([spec], Configuration((segment,)))
    value = poly_eval(e, {("A", k + 1): rel[k] for k in range(d)})
    assert -1e-9 <= value <= 1 + 1e-9
