from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quarc import (
    build_component_model,
    parse_component_specs,
    parse_system_file,
    validate_component_spec,
)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def specs():
    parsed = parse_component_specs((DATA / "spec.qr").read_text())
    return {c.name: c for c in parsed}


@pytest.fixture(scope="session")
def c1(specs):
    return specs["C1"]


@pytest.fixture(scope="session")
def c2(specs):
    return specs["C2"]


@pytest.fixture(scope="session")
def c3(specs):
    return specs["C3"]


@pytest.fixture(scope="session")
def models(specs):
    return {name: build_component_model(spec) for name, spec in specs.items()}


def _graph(name, specs):
    return parse_system_file(
        (DATA / name).read_text(), known_components=list(specs)
    )


@pytest.fixture(scope="session")
def graph_s(specs):
    return _graph("upsilon_s.sys", specs)


@pytest.fixture(scope="session")
def graph_p(specs):
    return _graph("upsilon_p.sys", specs)


@pytest.fixture(scope="session")
def graph_p_ordered(specs):
    return _graph("upsilon_p_ordered.sys", specs)


@pytest.fixture(scope="session")
def graph_sp(specs):
    return _graph("upsilon_sp.sys", specs)


def make_component(name, reliabilities, maps):
    return validate_component_spec(name, reliabilities, maps)
