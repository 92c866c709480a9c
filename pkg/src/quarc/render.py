"""Text, CSV and JSON rendering of model dumps, query results and reports."""
from __future__ import annotations

import csv
import io
import json
from typing import Mapping, Sequence

from .characterize import expression_text
from .core import QRModel, SystemQRSpec
from .engine import ResultTable
from .quality import format_number, format_quality_values
from .relpoly import poly_eval
from .synthesize import ConformanceReport


def format_probability(v: float) -> str:
    if abs(v) < 5e-10:
        v = 0.0
    text = f"{v:.9f}".rstrip("0").rstrip(".")
    return text if text else "0"


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines.append(fmt.format(*headers).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append(fmt.format(*row).rstrip())
    return "\n".join(lines)


def _csv_text(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# model dumps (characterize / compose --dump-states)


def model_dump_cells(model: QRModel) -> tuple[list[str], list[list[str]]]:
    headers = ["State", "Config", "Input Quality", "Output Quality", "Expression", "Value"]
    assignment = model.reliability_assignment()
    rows = []
    for i, st in enumerate(model.states, start=1):
        mark = "*" if i - 1 == model.initial else ""
        rows.append(
            [
                f"s{i}{mark}",
                st.config.text,
                format_quality_values(st.quality.levels),
                format_quality_values(st.quality.outputs),
                expression_text(model.components, st.config),
                format_probability(poly_eval(st.expr, assignment)),
            ]
        )
    return headers, rows


def render_model(model: QRModel, fmt: str = "text") -> str:
    headers, rows = model_dump_cells(model)
    if fmt == "csv":
        return _csv_text(headers, rows)
    if fmt == "json":
        assignment = model.reliability_assignment()
        doc = {
            "components": [c.name for c in model.components],
            "initial": model.states[model.initial].config.text,
            "states": [
                {
                    "config": st.config.text,
                    "input_quality": list(st.quality.levels),
                    "output_quality": list(st.quality.outputs),
                    "expression": expression_text(model.components, st.config),
                    "value": poly_eval(st.expr, assignment),
                }
                for st in model.states
            ],
            "failure_edges": sorted(
                [model.states[i].config.text, model.states[j].config.text]
                for i, j in model.failure_edges
            ),
            "suspend_edges": sorted(
                [model.states[i].config.text, model.states[j].config.text]
                for i, j in model.suspend_edges
            ),
        }
        return json.dumps(doc, indent=2) + "\n"
    return render_table(headers, rows) + "\n"


def model_stats_line(model: QRModel) -> str:
    return (
        f"states={len(model.states)} "
        f"failure_edges={len(model.failure_edges)} "
        f"suspend_edges={len(model.suspend_edges)}"
    )


# ---------------------------------------------------------------------------
# query result tables

_COLUMN_TITLES: Mapping[str, str] = {
    "input_quality": "Input Quality",
    "output_quality": "Output Quality",
    "reliability": "Reliability",
    "operate_prob": "Operating Probability",
    "failure": "Failures",
    "suspend": "Suspensions",
}


def _modes_cell(table: ResultTable, row) -> str:
    parts = []
    for name, statuses in zip(table.component_names, row.mode_statuses):
        inner = ",".join(f"m{k}:{s}" for k, s in enumerate(statuses, start=1))
        parts.append(f"{name}=({inner})")
    return " ".join(parts)


def result_cells(table: ResultTable) -> tuple[list[str], list[list[str]]]:
    headers = ["Config", "Modes"]
    fields = [f for f in table.columns if f != "operating_mode"]
    headers += [_COLUMN_TITLES[f] for f in fields]
    rows = []
    for row in table.rows:
        cells = [row.config.text, _modes_cell(table, row)]
        for f in fields:
            if f == "input_quality":
                cells.append(format_quality_values(row.input_levels))
            elif f == "output_quality":
                cells.append(format_quality_values(row.output_values))
            elif f == "reliability":
                cells.append(format_probability(row.reliability))
            elif f == "operate_prob":
                cells.append(format_probability(row.operate_prob))
            elif f == "failure":
                cells.append(str(row.failures))
            elif f == "suspend":
                cells.append(str(row.suspensions))
        rows.append(cells)
    return headers, rows


def _footnotes(table: ResultTable) -> list[str]:
    notes = []
    if "failure" in table.columns and table.rows:
        note = f"maximum number of failures tolerated = {table.max_failures}"
        if table.inadmissible:
            note += (
                " (failure in "
                + ", ".join(table.inadmissible)
                + " is not admissible)"
            )
        notes.append(note)
    return notes


def render_result_table(table: ResultTable, fmt: str = "text") -> str:
    headers, rows = result_cells(table)
    if fmt == "csv":
        return _csv_text(headers, rows)
    if fmt == "json":
        return json.dumps(result_document(table), indent=2) + "\n"
    out = [f"query {table.query_name}: {len(table.rows)} row(s)"]
    if table.rows:
        out.append(render_table(headers, rows))
    out.extend(_footnotes(table))
    return "\n".join(out) + "\n"


def result_document(table: ResultTable) -> dict:
    doc: dict = {
        "query": table.query_name,
        "components": list(table.component_names),
        "rows": [],
    }
    for row in table.rows:
        entry: dict = {
            "config": row.config.text,
            "modes": {
                name: list(statuses)
                for name, statuses in zip(table.component_names, row.mode_statuses)
            },
        }
        for f in table.columns:
            if f == "input_quality":
                entry["input_quality"] = list(row.input_levels)
            elif f == "output_quality":
                entry["output_quality"] = list(row.output_values)
            elif f == "reliability":
                entry["reliability"] = row.reliability
            elif f == "operate_prob":
                entry["operate_prob"] = row.operate_prob
            elif f == "failure":
                entry["failure"] = row.failures
            elif f == "suspend":
                entry["suspend"] = row.suspensions
        doc["rows"].append(entry)
    if "failure" in table.columns:
        doc["max_failures_tolerated"] = table.max_failures
        doc["inadmissible_components"] = list(table.inadmissible)
    return doc


# ---------------------------------------------------------------------------
# synthesized system specifications


def system_spec_cells(spec: SystemQRSpec) -> tuple[list[str], list[list[str]]]:
    headers = ["Mode", "Reliability", "Input Quality", "Output Quality"]
    rows = []
    for entry in spec.modes:
        label = "(" + ", ".join(
            f"{name}:m{k}" for name, k in zip(spec.component_names, entry.mode_tuple)
        ) + ")"
        rows.append(
            [
                label,
                format_probability(entry.reliability),
                format_quality_values(entry.quality.levels),
                format_quality_values(entry.quality.outputs),
            ]
        )
    return headers, rows


def render_system_spec(spec: SystemQRSpec, fmt: str = "text") -> str:
    headers, rows = system_spec_cells(spec)
    if fmt == "csv":
        return _csv_text(headers, rows)
    if fmt == "json":
        doc = {
            "system": spec.name,
            "components": [
                {"name": n, "modes": d}
                for n, d in zip(spec.component_names, spec.mode_counts)
            ],
            "input_levels": list(spec.input_levels),
            "modes": [
                {
                    "mode": list(e.mode_tuple),
                    "reliability": e.reliability,
                    "input_quality": list(e.quality.levels),
                    "output_quality": list(e.quality.outputs),
                }
                for e in spec.modes
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    title = f"system {spec.name}: components " + ", ".join(
        f"{n}({d} modes)" for n, d in zip(spec.component_names, spec.mode_counts)
    )
    return title + "\n" + render_table(headers, rows) + "\n"


# ---------------------------------------------------------------------------
# conformance reports


def render_conformance(report: ConformanceReport, fmt: str = "text") -> str:
    if fmt == "json":
        doc = {
            "verdict": report.verdict,
            "matched": [list(t) for t in report.matched],
            "missing": [list(t) for t in report.missing],
            "extra": [list(t) for t in report.extra],
            "mismatches": [
                {
                    "mode": list(m.mode_tuple),
                    "field": m.field_name,
                    "expected": _json_value(m.expected),
                    "actual": _json_value(m.actual),
                }
                for m in report.mismatches
            ],
            "notes": list(report.notes),
        }
        return json.dumps(doc, indent=2) + "\n"
    mismatch_modes = {m.mode_tuple for m in report.mismatches}
    total = len(report.matched) + len(report.missing) + len(mismatch_modes)
    lines = [f"{report.verdict}: {len(report.matched)}/{total} modes matched"]
    for note in report.notes:
        lines.append(f"note: {note}")
    for t in report.missing:
        lines.append(f"missing mode ({','.join(map(str, t))})")
    for t in report.extra:
        lines.append(f"unexpected mode ({','.join(map(str, t))})")
    rows = []
    for m in report.mismatches:
        rows.append(
            [
                "(" + ",".join(map(str, m.mode_tuple)) + ")",
                m.field_name,
                _text_value(m.expected),
                _text_value(m.actual),
            ]
        )
    if rows:
        lines.append(render_table(["Mode", "Field", "Expected", "Actual"], rows))
    if fmt == "csv":
        return _csv_text(["Mode", "Field", "Expected", "Actual"], rows)
    return "\n".join(lines) + "\n"


def _json_value(value) -> object:
    from .quality import QualityMap

    if isinstance(value, QualityMap):
        return [list(p) for p in value.pairs]
    return value


def _text_value(value) -> str:
    from .quality import QualityMap

    if isinstance(value, QualityMap):
        return (
            format_quality_values(value.levels)
            + "->"
            + format_quality_values(value.outputs)
        )
    if isinstance(value, float):
        return format_probability(value)
    return str(value)
