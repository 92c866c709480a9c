#!/usr/bin/env python3
"""Characterize single components as degradation state machines.

A component declares, per operating mode, a reliability and a map from input
quality levels to guaranteed output values.  Characterization unfolds that
declaration into every reachable status assignment of the mode slots: the
component starts in its first mode, a failure (F) or a designer-issued
suspension (C) hands control to the next mode, and a component whose modes
are all failed or suspended is dead.
"""
from quarc import build_component_model, validate_component_spec
from quarc.render import render_model

video_hi = validate_component_spec(
    "C1",
    [0.8, 0.7],
    [
        [(50, 40), (30, 25), (20, 10)],  # preferred mode
        [(50, 35), (30, 25), (20, 10)],  # fallback mode
    ],
)
relay = validate_component_spec("C2", [0.95], [[(40, 30), (10, 10)]])

print("Two-mode component: 2^(2+1) - 1 = 7 states")
print("  1X = first mode operating, second not yet availed;")
print("  01 = first failed, second operating;  Y1 = first suspended;")
print("  00 / 0Y / Y0 / YY = dead combinations.\n")
model = build_component_model(video_hi)
print(render_model(model))

print("\nA state's operating probability multiplies r per operating slot")
print("and (1-r) per failed slot; suspended and not-availed slots do not")
print("bet on chance, so they contribute 1.  Note state YY has probability")
print("1.00: suspending everything is a choice, not a random event.\n")

print("Single-mode component: three states")
print(render_model(build_component_model(relay)))

edges = sorted(
    (model.states[i].config.text, model.states[j].config.text)
    for i, j in model.failure_edges
)
print("\nFailure transitions of C1:", edges)
edges = sorted(
    (model.states[i].config.text, model.states[j].config.text)
    for i, j in model.suspend_edges
)
print("Suspend transitions of C1:", edges)
