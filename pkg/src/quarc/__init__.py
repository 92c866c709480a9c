"""quarc: quality and reliability composition for series-parallel component systems.

Components declare, per operating mode, a reliability and a map from input
quality levels to guaranteed output values.  The package characterizes each
component as a degradation state machine, composes machines across a
series-parallel system graph, reverse-synthesizes the abstract system-level
specification for conformance checking, and answers structured queries over
the composed state space.  A seeded Monte-Carlo oracle cross-checks the
analytic probabilities.
"""
from .characterize import (
    build_component_model,
    expression_text,
    state_expr,
)
from .compose import (
    build_system_model,
    chain_series_maps,
    compose_parallel,
    compose_series,
    merge_parallel_maps,
    models_equivalent,
)
from .core import (
    ComponentSpec,
    Configuration,
    ModeStatus,
    ModelState,
    ParallelPolicy,
    QRModel,
    SystemGraph,
    SystemModeEntry,
    SystemQRSpec,
    validate_component_spec,
    validate_configuration,
    validate_system_graph,
)
from .engine import ResultTable, failure_count, run_query, suspend_count
from .errors import ParseError, QuarcError, ValidationError
from .quality import QualityMap, canonicalize_quality_map
from .relpoly import RelExpr, path_success_expr, poly_eval, poly_mul
from .simulate import simulate_mode_reliability, simulate_state_probability
from .sqdl import (
    Query,
    parse_component_specs,
    parse_query,
    parse_query_document,
    parse_system_file,
    parse_system_qrspec,
    render_query,
    render_system_qrspec,
)
from .synthesize import (
    ConformanceReport,
    abstract_failure_model,
    check_conformance,
    emit_system_qrspec,
    mode_tuple,
    structural_reliability,
)

__version__ = "0.1.0"

__all__ = [
    "ComponentSpec",
    "Configuration",
    "ConformanceReport",
    "ModeStatus",
    "ModelState",
    "ParallelPolicy",
    "ParseError",
    "QRModel",
    "QualityMap",
    "QuarcError",
    "Query",
    "RelExpr",
    "ResultTable",
    "SystemGraph",
    "SystemModeEntry",
    "SystemQRSpec",
    "ValidationError",
    "abstract_failure_model",
    "build_component_model",
    "build_system_model",
    "canonicalize_quality_map",
    "chain_series_maps",
    "check_conformance",
    "compose_parallel",
    "compose_series",
    "emit_system_qrspec",
    "expression_text",
    "failure_count",
    "merge_parallel_maps",
    "mode_tuple",
    "models_equivalent",
    "parse_component_specs",
    "parse_query",
    "parse_query_document",
    "parse_system_file",
    "parse_system_qrspec",
    "path_success_expr",
    "poly_eval",
    "poly_mul",
    "render_query",
    "render_system_qrspec",
    "run_query",
    "simulate_mode_reliability",
    "simulate_state_probability",
    "state_expr",
    "structural_reliability",
    "suspend_count",
    "validate_component_spec",
    "validate_configuration",
    "validate_system_graph",
]
