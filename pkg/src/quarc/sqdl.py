"""Parsers for the query language and the three text input formats.

Formats (all UTF-8, LF or CRLF, '#' starts a comment):

  query documents (.sqdl)   begin_query ... end_query blocks, select/from/where
  component specs (.qr)     component / mode / quality / end, line oriented
  system structure (.sys)   input / output / vertex / edge / parallel_policy
  system-level spec (.sqr)  system / components / mode / quality / end

Every rejection raises ParseError with a 1-based line and column.  The
keyword `control` is accepted as a synonym of `suspend` in queries.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .core import (
    ComponentSpec,
    ParallelPolicy,
    SystemGraph,
    SystemModeEntry,
    SystemQRSpec,
    validate_component_spec,
    validate_system_graph,
)
from .errors import ParseError, ValidationError
from .quality import QualityMap, canonicalize_quality_map, format_number

SELECT_FIELDS = (
    "input_quality",
    "output_quality",
    "operating_mode",
    "reliability",
    "operate_prob",
    "failure",
    "suspend",
)

_RANGE_KEYS = ("reliability", "operate_prob", "failure", "suspend")


@dataclass(frozen=True)
class QueryConstraints:
    input_levels: tuple[float, ...] | None = None
    output_min: tuple[float, ...] | None = None
    output_max: tuple[float, ...] | None = None
    reliability_min: float | None = None
    reliability_max: float | None = None
    operate_prob_min: float | None = None
    operate_prob_max: float | None = None
    failure_min: int | None = None
    failure_max: int | None = None
    suspend_min: int | None = None
    suspend_max: int | None = None

    def is_empty(self) -> bool:
        return all(getattr(self, f.name) is None for f in _constraint_fields())


def _constraint_fields():
    import dataclasses

    return dataclasses.fields(QueryConstraints)


@dataclass(frozen=True)
class Query:
    name: str
    select_fields: tuple[str, ...]
    system_file: str
    qrspec_file: str
    constraints: QueryConstraints = field(default_factory=QueryConstraints)


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"[{},]|[^\s{},]+")


def _tokenize(text: str) -> tuple[list[_Token], tuple[int, int]]:
    tokens: list[_Token] = []
    lineno = 0
    last_len = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        last_len = len(line)
        for m in _TOKEN_RE.finditer(body):
            tokens.append(_Token(m.group(), lineno, m.start() + 1))
    eof = (max(lineno, 1), last_len + 1)
    return tokens, eof


class _QueryParser:
    def __init__(self, text: str):
        self.tokens, self.eof = _tokenize(text)
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def peek(self) -> _Token | None:
        return None if self.at_end() else self.tokens[self.pos]

    def take(self, what: str) -> _Token:
        tok = self.peek()
        if tok is None:
            self.fail(f"expected {what}, found end of input")
        self.pos += 1
        return tok

    def fail(self, message: str, token: _Token | None = None):
        if token is None:
            token = self.peek()
        if token is None:
            raise ParseError(message, *self.eof)
        raise ParseError(message, token.line, token.column)

    def expect(self, text: str) -> _Token:
        tok = self.take(f"'{text}'")
        if tok.text != text:
            self.fail(f"expected '{text}', found '{tok.text}'", tok)
        return tok

    def next_is(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    # a dashed keyword is the token '-' followed by a word
    def dash_keyword(self) -> _Token | None:
        if (
            self.pos + 1 < len(self.tokens)
            and self.tokens[self.pos].text == "-"
        ):
            return self.tokens[self.pos + 1]
        return None

    def take_dash_keyword(self) -> _Token:
        self.expect("-")
        return self.take("a keyword")

    def number(self, what: str = "a number") -> float:
        tok = self.take(what)
        try:
            return float(tok.text)
        except ValueError:
            self.fail(f"malformed number '{tok.text}'", tok)

    def integer(self, what: str = "an integer") -> int:
        tok = self.take(what)
        try:
            return int(tok.text)
        except ValueError:
            self.fail(f"malformed number '{tok.text}' (expected an integer)", tok)

    def value_list(self) -> tuple[float, ...]:
        self.expect("{")
        values: list[float] = []
        while True:
            values.append(self.number("a value"))
            tok = self.take("',' or '}'")
            if tok.text == "}":
                break
            if tok.text != ",":
                self.fail(f"expected ',' or '}}', found '{tok.text}'", tok)
        return tuple(values)

    def parse_block(self) -> Query:
        open_tok = self.expect("begin_query")
        name = "query"
        if not self.next_is("select"):
            tok = self.take("a query name")
            if tok.text in ("from", "where", "end_query"):
                self.fail(f"expected 'select', found '{tok.text}'", tok)
            name = tok.text
        self.expect("select")
        select = self.parse_select()
        from_tok = self.peek()
        if not self.next_is("from"):
            self.fail("missing from block", from_tok)
        self.expect("from")
        if not self.next_is("-"):
            self.fail("missing '- system <file>' in the from block")
        kw = self.take_dash_keyword()
        if kw.text != "system":
            self.fail(f"expected 'system', found '{kw.text}'", kw)
        system_file = self.take("a system file name").text
        if not self.next_is("-"):
            self.fail("missing '- qrspec <file>' in the from block")
        kw = self.take_dash_keyword()
        if kw.text != "qrspec":
            self.fail(f"expected 'qrspec', found '{kw.text}'", kw)
        qrspec_file = self.take("a qrspec file name").text
        constraints = QueryConstraints()
        if self.next_is("where"):
            self.expect("where")
            constraints = self.parse_where()
        self.expect("end_query")
        if not select:
            self.fail("query selects no fields", open_tok)
        return Query(
            name=name,
            select_fields=tuple(select),
            system_file=system_file,
            qrspec_file=qrspec_file,
            constraints=constraints,
        )

    def parse_select(self) -> list[str]:
        fields: list[str] = []
        while self.next_is("-"):
            nxt = self.dash_keyword()
            if nxt is not None and nxt.text in ("system", "qrspec"):
                break
            kw = self.take_dash_keyword()
            name = "suspend" if kw.text == "control" else kw.text
            if name not in SELECT_FIELDS:
                self.fail(f"unknown select field '{kw.text}'", kw)
            if name in fields:
                self.fail(f"duplicate select field '{kw.text}'", kw)
            fields.append(name)
        return fields

    def parse_where(self) -> QueryConstraints:
        values: dict[str, object] = {}
        where_tok = self.tokens[self.pos - 1]
        while self.next_is("-"):
            kw = self.take_dash_keyword()
            name = "suspend" if kw.text == "control" else kw.text
            if name == "input_quality":
                if "input_levels" in values:
                    self.fail("duplicate input_quality clause", kw)
                values["input_levels"] = self.value_list()
            elif name == "output_quality":
                self.parse_bounds(kw, values, "output", lists=True)
            elif name in _RANGE_KEYS:
                self.parse_bounds(kw, values, name, lists=False)
            else:
                self.fail(f"unknown where clause '{kw.text}'", kw)
        constraints = QueryConstraints(**values)  # type: ignore[arg-type]
        for bound in (constraints.output_min, constraints.output_max):
            if bound is None:
                continue
            if constraints.input_levels is None:
                raise ParseError(
                    "output_quality bounds require an input_quality list",
                    where_tok.line,
                    where_tok.column,
                )
            if len(bound) != len(constraints.input_levels):
                raise ParseError(
                    f"output bound lists {len(bound)} values for "
                    f"{len(constraints.input_levels)} input levels",
                    where_tok.line,
                    where_tok.column,
                )
        return constraints

    def parse_bounds(self, kw: _Token, values: dict, prefix: str, lists: bool):
        integral = prefix in ("failure", "suspend")
        suffix = {"output": ("output_min", "output_max")}.get(
            prefix, (f"{prefix}_min", f"{prefix}_max")
        )
        seen_any = False
        while self.next_is("-"):
            nxt = self.dash_keyword()
            if nxt is None or nxt.text not in ("minimum", "maximum"):
                break
            self.take_dash_keyword()
            key = suffix[0] if nxt.text == "minimum" else suffix[1]
            if key in values:
                self.fail(f"duplicate {nxt.text} for {kw.text}", nxt)
            if lists:
                values[key] = self.value_list()
            elif integral:
                values[key] = self.integer()
            else:
                values[key] = self.number()
            seen_any = True
        if not seen_any:
            self.fail(f"'{kw.text}' needs a minimum and/or maximum", kw)


def parse_query(text: str) -> Query:
    """Parse exactly one query block."""
    parser = _QueryParser(text)
    query = parser.parse_block()
    if not parser.at_end():
        parser.fail("unexpected content after end_query")
    return query


def parse_query_document(text: str) -> list[Query]:
    """Parse one or more query blocks."""
    parser = _QueryParser(text)
    queries = [parser.parse_block()]
    while not parser.at_end():
        queries.append(parser.parse_block())
    return queries


def render_query(query: Query) -> str:
    """Canonical text of a query; parse(render(q)) == q."""
    lines = [f"begin_query {query.name}", "    select"]
    for field_name in query.select_fields:
        lines.append(f"        - {field_name}")
    lines.append("    from")
    lines.append(f"        - system {query.system_file}")
    lines.append(f"        - qrspec {query.qrspec_file}")
    c = query.constraints
    if not c.is_empty():
        lines.append("    where")
        if c.input_levels is not None:
            lines.append(f"        - input_quality {_render_list(c.input_levels)}")
        if c.output_min is not None or c.output_max is not None:
            lines.append("        - output_quality")
            if c.output_min is not None:
                lines.append(f"            - minimum {_render_list(c.output_min)}")
            if c.output_max is not None:
                lines.append(f"            - maximum {_render_list(c.output_max)}")
        for key in _RANGE_KEYS:
            lo = getattr(c, f"{key}_min")
            hi = getattr(c, f"{key}_max")
            if lo is None and hi is None:
                continue
            lines.append(f"        - {key}")
            if lo is not None:
                lines.append(f"            - minimum {format_number(lo)}")
            if hi is not None:
                lines.append(f"            - maximum {format_number(hi)}")
    lines.append("end_query")
    return "\n".join(lines) + "\n"


def _render_list(values: Sequence[float]) -> str:
    return "{ " + ", ".join(format_number(v) for v in values) + " }"


# ---------------------------------------------------------------------------
# line-oriented formats


@dataclass
class _Line:
    number: int
    text: str


def _content_lines(text: str) -> Iterator[_Line]:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield _Line(number, body)


def _eof_position(text: str) -> tuple[int, int]:
    lines = text.splitlines()
    if not lines:
        return 1, 1
    return len(lines), len(lines[-1]) + 1


def _col(line: _Line, fragment: str, start: int = 0) -> int:
    pos = line.text.find(fragment, start)
    return pos + 1 if pos >= 0 else 1


_MODE_RE = re.compile(r"^\s*mode\s+(\S+)\s+reliability\s+(\S+)\s*$")
_QUALITY_RE = re.compile(r"^\s*quality\s+([^:\s]+)\s*:\s*(.*)$")
_COMPONENT_RE = re.compile(r"^\s*component\s+(\S+)\s*$")
_PAIR_RE = re.compile(r"^\s*(\S+?)\s*->\s*(\S+)\s*$")


def _parse_float(line: _Line, text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(
            f"malformed number '{text}' ({what})", line.number, _col(line, text)
        ) from None


def _parse_pairs(line: _Line, body: str, offset: int) -> list[tuple[float, float]]:
    pairs: list[tuple[float, float]] = []
    if not body.strip():
        return pairs
    cursor = offset
    for chunk in body.split(","):
        m = _PAIR_RE.match(chunk)
        if not m:
            raise ParseError(
                f"expected 'level->output', found '{chunk.strip()}'",
                line.number,
                cursor + 1,
            )
        level = _parse_float(line, m.group(1), "quality level")
        value = _parse_float(line, m.group(2), "quality output")
        pairs.append((level, value))
        cursor += len(chunk) + 1
    return pairs


def parse_component_specs(text: str) -> list[ComponentSpec]:
    """Parse a component specification (.qr) file."""
    specs: list[ComponentSpec] = []
    names: set[str] = set()
    current: str | None = None
    current_line: _Line | None = None
    reliabilities: list[float] = []
    quality: dict[int, QualityMap] = {}

    def finish(line: _Line) -> None:
        nonlocal current
        try:
            spec = validate_component_spec(
                current,
                reliabilities,
                [quality.get(k, QualityMap()) for k in range(1, len(reliabilities) + 1)],
            )
        except ValidationError as exc:
            raise ParseError(str(exc), line.number, 1) from None
        specs.append(spec)
        current = None

    for line in _content_lines(text):
        word = line.text.split()[0]
        if word == "component":
            if current is not None:
                raise ParseError(
                    f"component {current} is missing its end line",
                    line.number,
                    _col(line, word),
                )
            m = _COMPONENT_RE.match(line.text)
            if not m:
                raise ParseError(
                    "expected 'component <name>'", line.number, _col(line, word)
                )
            name = m.group(1)
            if name in names:
                raise ParseError(
                    f"duplicate component {name}", line.number, _col(line, name)
                )
            names.add(name)
            current = name
            current_line = line
            reliabilities = []
            quality = {}
        elif word == "mode":
            if current is None:
                raise ParseError(
                    "mode line outside a component block", line.number, _col(line, word)
                )
            m = _MODE_RE.match(line.text)
            if not m:
                raise ParseError(
                    "expected 'mode <k> reliability <z>'",
                    line.number,
                    _col(line, word),
                )
            k = _parse_float(line, m.group(1), "mode index")
            if k != int(k) or int(k) != len(reliabilities) + 1:
                raise ParseError(
                    f"expected mode {len(reliabilities) + 1}, found {m.group(1)}",
                    line.number,
                    _col(line, m.group(1)),
                )
            z = _parse_float(line, m.group(2), "reliability")
            if not 0.0 < z <= 1.0:
                raise ParseError(
                    f"mode reliability {m.group(2)} outside (0,1]",
                    line.number,
                    _col(line, m.group(2)),
                )
            reliabilities.append(z)
        elif word == "quality":
            if current is None:
                raise ParseError(
                    "quality line outside a component block",
                    line.number,
                    _col(line, word),
                )
            m = _QUALITY_RE.match(line.text)
            if not m:
                raise ParseError(
                    "expected 'quality <k>: <in>-><out>, ...'",
                    line.number,
                    _col(line, word),
                )
            k = _parse_float(line, m.group(1), "mode index")
            if k != int(k) or not 1 <= int(k) <= len(reliabilities):
                raise ParseError(
                    f"quality for undeclared mode {m.group(1)}",
                    line.number,
                    _col(line, m.group(1)),
                )
            if int(k) in quality:
                raise ParseError(
                    f"duplicate quality for mode {int(k)}",
                    line.number,
                    _col(line, m.group(1)),
                )
            pairs = _parse_pairs(line, m.group(2), line.text.find(":") + 1)
            try:
                quality[int(k)] = canonicalize_quality_map(pairs)
            except ValidationError as exc:
                raise ParseError(str(exc), line.number, line.text.find(":") + 2) from None
        elif word == "end":
            if current is None:
                raise ParseError(
                    "end without a component block", line.number, _col(line, word)
                )
            finish(current_line)
        else:
            raise ParseError(
                f"unrecognized directive '{word}'", line.number, _col(line, word)
            )
    if current is not None:
        raise ParseError(
            f"component {current} is missing its end line", *_eof_position(text)
        )
    if not specs:
        raise ParseError("no components defined", *_eof_position(text))
    return specs


_VERTEX_RE = re.compile(r"^\s*vertex\s+(\S+)\s*:\s*(\S+)\s*$")


def parse_system_file(
    text: str, known_components: Sequence[str] | None = None
) -> SystemGraph:
    """Parse a system structure (.sys) file and validate the graph."""
    input_node: str | None = None
    output_node: str | None = None
    vertices: list[str] = []
    labels: dict[str, str] = {}
    edges: list[tuple[str, str]] = []
    edge_lines: list[int] = []
    policy = ParallelPolicy.MAX
    policy_seen = False

    for line in _content_lines(text):
        words = line.text.split()
        word = words[0]
        if word in ("input", "output"):
            if len(words) != 2:
                raise ParseError(
                    f"expected '{word} <node>'", line.number, _col(line, word)
                )
            if word == "input":
                if input_node is not None:
                    raise ParseError(
                        "duplicate input declaration", line.number, _col(line, word)
                    )
                input_node = words[1]
            else:
                if output_node is not None:
                    raise ParseError(
                        "duplicate output declaration", line.number, _col(line, word)
                    )
                output_node = words[1]
        elif word == "vertex":
            m = _VERTEX_RE.match(line.text)
            if not m:
                raise ParseError(
                    "expected 'vertex <id> : <component>'",
                    line.number,
                    _col(line, word),
                )
            vid, comp = m.group(1), m.group(2)
            if vid in labels or vid in (input_node, output_node):
                raise ParseError(
                    f"duplicate node {vid}", line.number, _col(line, vid)
                )
            vertices.append(vid)
            labels[vid] = comp
        elif word == "edge":
            if len(words) != 3:
                raise ParseError(
                    "expected 'edge <from> <to>'", line.number, _col(line, word)
                )
            src, dst = words[1], words[2]
            declared = set(vertices) | {input_node, output_node} - {None}
            for node in (src, dst):
                if node not in declared:
                    raise ParseError(
                        f"edge references undeclared node {node}",
                        line.number,
                        _col(line, node, _col(line, word)),
                    )
            if (src, dst) in edges:
                raise ParseError(
                    f"duplicate edge {src} {dst}", line.number, _col(line, word)
                )
            edges.append((src, dst))
            edge_lines.append(line.number)
        elif word == "parallel_policy":
            if len(words) != 2 or words[1] not in ("max", "ordered"):
                raise ParseError(
                    "expected 'parallel_policy max|ordered'",
                    line.number,
                    _col(line, word),
                )
            if policy_seen:
                raise ParseError(
                    "duplicate parallel_policy", line.number, _col(line, word)
                )
            policy = ParallelPolicy(words[1])
            policy_seen = True
        else:
            raise ParseError(
                f"unrecognized directive '{word}'", line.number, _col(line, word)
            )

    eof = _eof_position(text)
    if input_node is None:
        raise ParseError("missing input declaration", *eof)
    if output_node is None:
        raise ParseError("missing output declaration", *eof)
    try:
        return validate_system_graph(
            input_node,
            output_node,
            vertices,
            edges,
            labels,
            policy,
            known_components,
        )
    except ValidationError as exc:
        line = edge_lines[-1] if edge_lines else eof[0]
        raise ParseError(str(exc), line, 1) from None


_SYSTEM_RE = re.compile(r"^\s*system\s+(\S+)\s*$")
_SQR_MODE_RE = re.compile(r"^\s*mode\s+(\S+)\s+reliability\s+(\S+)\s*$")
_SQR_QUALITY_RE = re.compile(r"^\s*quality\s+([^:\s]+)\s*:\s*(.*)$")


def parse_system_qrspec(text: str) -> SystemQRSpec:
    """Parse a system-level specification (.sqr) file."""
    name: str | None = None
    component_names: list[str] = []
    mode_counts: list[int] = []
    entries: dict[tuple[int, ...], list] = {}
    order: list[tuple[int, ...]] = []
    ended = False

    def parse_tuple(line: _Line, text_: str) -> tuple[int, ...]:
        parts = text_.split(",")
        if len(parts) != len(component_names):
            raise ParseError(
                f"mode tuple '{text_}' has {len(parts)} entries for "
                f"{len(component_names)} components",
                line.number,
                _col(line, text_),
            )
        out = []
        for i, part in enumerate(parts):
            try:
                k = int(part)
            except ValueError:
                raise ParseError(
                    f"malformed mode index '{part}'", line.number, _col(line, text_)
                ) from None
            if not 0 <= k <= mode_counts[i]:
                raise ParseError(
                    f"mode index {k} outside 0..{mode_counts[i]} for "
                    f"{component_names[i]}",
                    line.number,
                    _col(line, text_),
                )
            out.append(k)
        return tuple(out)

    for line in _content_lines(text):
        word = line.text.split()[0]
        if ended:
            raise ParseError(
                f"unexpected content after end: '{word}'",
                line.number,
                _col(line, word),
            )
        if word == "system":
            m = _SYSTEM_RE.match(line.text)
            if not m or name is not None:
                raise ParseError(
                    "expected one 'system <name>' line", line.number, _col(line, word)
                )
            name = m.group(1)
        elif word == "components":
            if component_names:
                raise ParseError(
                    "duplicate components line", line.number, _col(line, word)
                )
            items = line.text.split()[1:]
            if not items:
                raise ParseError(
                    "components line lists nothing", line.number, _col(line, word)
                )
            for item in items:
                if ":" not in item:
                    raise ParseError(
                        f"expected '<name>:<mode count>', found '{item}'",
                        line.number,
                        _col(line, item),
                    )
                cname, _, count = item.partition(":")
                try:
                    d = int(count)
                except ValueError:
                    raise ParseError(
                        f"malformed mode count '{count}'",
                        line.number,
                        _col(line, item),
                    ) from None
                if d < 1 or not cname or cname in component_names:
                    raise ParseError(
                        f"bad component entry '{item}'", line.number, _col(line, item)
                    )
                component_names.append(cname)
                mode_counts.append(d)
        elif word == "mode":
            if name is None or not component_names:
                raise ParseError(
                    "mode line before system/components lines",
                    line.number,
                    _col(line, word),
                )
            m = _SQR_MODE_RE.match(line.text)
            if not m:
                raise ParseError(
                    "expected 'mode <k1,k2,...> reliability <z>'",
                    line.number,
                    _col(line, word),
                )
            mt = parse_tuple(line, m.group(1))
            if mt in entries:
                raise ParseError(
                    f"duplicate mode {m.group(1)}", line.number, _col(line, word)
                )
            z = _parse_float(line, m.group(2), "reliability")
            if not 0.0 <= z <= 1.0:
                raise ParseError(
                    f"mode reliability {m.group(2)} outside [0,1]",
                    line.number,
                    _col(line, m.group(2)),
                )
            entries[mt] = [z, QualityMap()]
            order.append(mt)
        elif word == "quality":
            m = _SQR_QUALITY_RE.match(line.text)
            if not m:
                raise ParseError(
                    "expected 'quality <k1,k2,...>: <in>-><out>, ...'",
                    line.number,
                    _col(line, word),
                )
            mt = parse_tuple(line, m.group(1))
            if mt not in entries:
                raise ParseError(
                    f"quality for undeclared mode {m.group(1)}",
                    line.number,
                    _col(line, word),
                )
            pairs = _parse_pairs(line, m.group(2), line.text.find(":") + 1)
            try:
                entries[mt][1] = canonicalize_quality_map(pairs)
            except ValidationError as exc:
                raise ParseError(str(exc), line.number, line.text.find(":") + 2) from None
        elif word == "end":
            if name is None:
                raise ParseError(
                    "end without a system block", line.number, _col(line, word)
                )
            ended = True
        else:
            raise ParseError(
                f"unrecognized directive '{word}'", line.number, _col(line, word)
            )

    eof = _eof_position(text)
    if name is None:
        raise ParseError("missing system declaration", *eof)
    if not ended:
        raise ParseError("missing end line", *eof)
    if not order:
        raise ParseError("system spec declares no modes", *eof)
    return SystemQRSpec(
        name=name,
        component_names=tuple(component_names),
        mode_counts=tuple(mode_counts),
        modes=tuple(
            SystemModeEntry(mt, entries[mt][0], entries[mt][1]) for mt in order
        ),
    )


def render_system_qrspec(spec: SystemQRSpec) -> str:
    """Canonical .sqr text for a system-level specification."""
    lines = [f"system {spec.name}"]
    lines.append(
        "components "
        + " ".join(f"{n}:{d}" for n, d in zip(spec.component_names, spec.mode_counts))
    )
    for entry in spec.modes:
        mt = ",".join(str(k) for k in entry.mode_tuple)
        lines.append(f"mode {mt} reliability {format_number(entry.reliability)}")
        if entry.quality:
            body = ", ".join(
                f"{format_number(level)}->{format_number(value)}"
                for level, value in entry.quality.pairs
            )
            lines.append(f"quality {mt}: {body}")
    lines.append("end")
    return "\n".join(lines) + "\n"
