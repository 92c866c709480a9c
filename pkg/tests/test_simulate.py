from __future__ import annotations

import pytest

from quarc import (
    Configuration,
    ValidationError,
    build_component_model,
    build_system_model,
    poly_eval,
    simulate_mode_reliability,
    simulate_state_probability,
    structural_reliability,
)
from quarc.simulate import schedule_from_config, spawn_seeds

TRIALS = 200_000


def test_component_failure_state_probability(c1):
    model = build_component_model(c1)
    est = simulate_state_probability(
        model, Configuration(("01",)), trials=TRIALS, seed=11
    )
    assert est.trials == TRIALS
    assert est.value == pytest.approx(0.14, abs=4 * est.stderr)
    assert est.stderr > 0


def test_series_live_state_probability(specs, graph_s):
    model = build_system_model(graph_s, specs)
    est = simulate_state_probability(
        model, Configuration(("1X", "1")), trials=TRIALS, seed=12
    )
    assert est.value == pytest.approx(0.855, abs=4 * est.stderr)


def test_fully_suspended_component_is_certain(c1):
    model = build_component_model(c1)
    est = simulate_state_probability(
        model, Configuration(("YY",)), trials=1000, seed=13
    )
    assert est.value == 1.0
    assert est.stderr == 0.0


def test_schedule_must_match_target(c1):
    model = build_component_model(c1)
    with pytest.raises(ValidationError, match="inconsistent"):
        simulate_state_probability(
            model, Configuration(("Y1",)), schedule=frozenset(), trials=10, seed=0
        )
    explicit = simulate_state_probability(
        model, Configuration(("Y1",)), schedule=frozenset({0}), trials=5000, seed=3
    )
    assert explicit.value == pytest.approx(0.7, abs=4 * explicit.stderr)


def test_schedule_from_config():
    assert schedule_from_config(Configuration(("Y1", "0", "0Y"))) == frozenset({0, 4})


def test_mode_reliability_three_path_structure(specs, graph_sp):
    est = simulate_mode_reliability(
        graph_sp, specs, Configuration(("1X", "1", "1X")), trials=TRIALS, seed=21
    )
    assert est.value == pytest.approx(0.990, abs=4 * est.stderr)
    est = simulate_mode_reliability(
        graph_sp, specs, Configuration(("00", "1", "1X")), trials=TRIALS, seed=22
    )
    assert est.value == pytest.approx(0.950, abs=4 * est.stderr)


def test_mode_reliability_parallel_pair(specs, graph_p):
    est = simulate_mode_reliability(
        graph_p, specs, Configuration(("00", "1")), trials=TRIALS, seed=23
    )
    assert est.value == pytest.approx(0.950, abs=4 * est.stderr)


def test_all_dead_reliability_is_zero(specs, graph_sp):
    est = simulate_mode_reliability(
        graph_sp, specs, Configuration(("00", "0", "YY")), trials=1000, seed=24
    )
    assert est.value == 0.0


def test_simulation_is_deterministic(specs, graph_p):
    model = build_system_model(graph_p, specs)
    config = Configuration(("01", "1"))
    a = simulate_state_probability(model, config, trials=50_000, seed=42)
    b = simulate_state_probability(model, config, trials=50_000, seed=42)
    c = simulate_state_probability(model, config, trials=50_000, seed=43)
    assert a == b
    assert a != c


def test_spawn_seeds_are_deterministic_and_distinct():
    a = spawn_seeds(7, 10)
    b = spawn_seeds(7, 10)
    assert a == b
    assert len(set(a)) == 10
    assert spawn_seeds(8, 10) != a


def test_every_parallel_pair_state_agrees_with_analytics(specs, graph_p):
    model = build_system_model(graph_p, specs)
    assignment = model.reliability_assignment()
    order = [c.name for c in model.components]
    seeds = spawn_seeds(99, 2 * len(model.states))
    for i, st in enumerate(model.states):
        analytic = poly_eval(st.expr, assignment)
        est = simulate_state_probability(
            model, st.config, trials=60_000, seed=seeds[2 * i]
        )
        tol = 4 * max(est.stderr, (analytic * (1 - analytic) / est.trials) ** 0.5)
        assert est.value == pytest.approx(analytic, abs=max(tol, 1e-3))
        rel = structural_reliability(graph_p, specs, st.config, order)
        est_r = simulate_mode_reliability(
            graph_p, specs, st.config, trials=60_000, seed=seeds[2 * i + 1],
            component_order=order,
        )
        tol = 4 * max(est_r.stderr, (rel * (1 - rel) / est_r.trials) ** 0.5)
        assert est_r.value == pytest.approx(rel, abs=max(tol, 1e-3))
