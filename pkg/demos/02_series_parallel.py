#!/usr/bin/env python3
"""Compose component machines in series and in parallel.

Series: the downstream component consumes the upstream output quality (a
lookup against its level list), and a dead stage kills the whole chain.
Parallel: redundant branches merge their maps, either taking the best output
at every level (max policy) or reporting the first-ranked branch that is
still alive (ordered policy).  State pairing, transitions and probability
expressions are identical for both operators; only the quality math differs.
"""
from quarc import (
    Configuration,
    ParallelPolicy,
    build_component_model,
    compose_parallel,
    compose_series,
    models_equivalent,
    validate_component_spec,
)
from quarc.render import render_model

c1 = validate_component_spec(
    "C1", [0.8, 0.7],
    [[(50, 40), (30, 25), (20, 10)], [(50, 35), (30, 25), (20, 10)]],
)
c2 = validate_component_spec("C2", [0.95], [[(40, 30), (10, 10)]])
c3 = validate_component_spec(
    "C3", [0.9, 0.8],
    [[(50, 45), (20, 20), (10, 5)], [(50, 40), (20, 15), (10, 5)]],
)
m1, m2, m3 = map(build_component_model, (c1, c2, c3))

print("C3 feeding C2 in series (21 states; config = C3 segment + C2 slot):")
chain = compose_series(m3, m2)
print(render_model(chain))
live = chain.states[chain.state_index(Configuration(("1X", "1")))]
print("\nChain lookup detail at full quality: C3 turns 50 into 45, and the")
print("C2 map reads 45 through its 40 level, so the chain guarantees",
      live.quality.lookup(50))

print("\nC1 beside C2, best-output policy:")
best = compose_parallel(m1, m2, ParallelPolicy.MAX)
print(render_model(best))

print("\nSame pair, ordered policy (C1 ranks first):")
print(render_model(compose_parallel(m1, m2, ParallelPolicy.ORDERED)))

print("\nAlgebra sanity checks:")
print("  parallel is idempotent:",
      models_equivalent(compose_parallel(m2, m2), m2))
twice = compose_series(m2, m2)
live = twice.states[twice.state_index(Configuration(("1",)))]
print("  series is not: C2 after C2 only guarantees",
      dict(live.quality.pairs), "because 40 -> 30 -> 10")
print("  series is not commutative:",
      not models_equivalent(compose_series(m2, m3), compose_series(m3, m2)))
print("  series distributes over parallel:",
      models_equivalent(
          compose_series(m1, compose_parallel(m2, m3)),
          compose_parallel(compose_series(m1, m2), compose_series(m1, m3)),
      ))
