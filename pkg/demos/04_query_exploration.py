#!/usr/bin/env python3
"""Explore a system's state space with structured queries.

A query block names the system and component files, selects output fields,
and constrains reliability (path success probability), operating probability
(chance of residing in the state), failure and suspension counts, and the
quality the state must guarantee.  The engine builds the composed model,
filters states, and reports the survivors sorted by operating probability.
"""
import tempfile
from pathlib import Path

from quarc import parse_query_document, run_query
from quarc.render import render_result_table

QRSPEC = """
component C1
  mode 1 reliability 0.8
  mode 2 reliability 0.7
  quality 1: 50->40, 30->25, 20->10
  quality 2: 50->35, 30->25, 20->10
end
component C2
  mode 1 reliability 0.95
  quality 1: 40->30, 10->10
end
"""

SYSTEM = """
input I1
output O1
vertex V1 : C1
vertex V2 : C2
edge I1 V1
edge I1 V2
edge V1 O1
edge V2 O1
"""

QUERIES = """
begin_query HighReliabilityModes
    select
        - input_quality
        - output_quality
        - operating_mode
        - reliability
    from
        - system pair.sys
        - qrspec pair.qr
    where
        - input_quality { 30 }
        - reliability
            - minimum 0.85
        - failure
            - maximum 2
        - control
            - maximum 0
end_query

begin_query QualityFloorWithOneSuspension
    select
        - operating_mode
        - operate_prob
        - failure
    from
        - system pair.sys
        - qrspec pair.qr
    where
        - input_quality { 40,30,15,5 }
        - output_quality
            - minimum { 30,25,10,5 }
        - reliability
            - minimum 0.95
        - suspend
            - maximum 1
end_query
"""

with tempfile.TemporaryDirectory() as tmp:
    base = Path(tmp)
    (base / "pair.qr").write_text(QRSPEC)
    (base / "pair.sys").write_text(SYSTEM)
    for query in parse_query_document(QUERIES):
        table = run_query(query, base)
        print(render_result_table(table))
        print()

print("The first query keeps only no-suspension states that guarantee a")
print("nonzero output at level 30 with path reliability at least 0.85.")
print("The second query shows which degradation states still meet a full")
print("quality floor; its footnote reports how many complete component")
print("failures the constraints tolerate, and which component may never")
print("fail outright (here: the one carrying the reliability guarantee).")
