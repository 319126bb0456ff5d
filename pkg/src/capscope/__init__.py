"""Capability-set modeling for cities: what citizens can do and be.

The pipeline: a model document describes a city, its commons, and its
citizens; the compiler turns one citizen's view into an integer linear
program; the solver produces the non-dominated welfare frontier with
witness action bundles; scenarios override parameters to ask what-if
questions, and comparison orders capability sets between citizens.
"""

from .compare import ComparisonOutcome, Relation, classify, set_covers, set_succeeds
from .documents import (
    ModelDocument,
    ModelSyntaxError,
    SchemaError,
    ValidationError,
    load_fixture,
    load_model,
    parse_model,
    serialize_model,
)
from .ilp import IlpInstance, UnboundedVariableError, build_ilp, build_ilp_for_dimensions
from .model import (
    ActionKind,
    Activity,
    BeingsPoint,
    CitizenState,
    CityModel,
    CommonKind,
    CommonSpec,
    CommonsState,
    ConversionMatrix,
    Doings,
    Edge,
    FrontierPoint,
    ResourceQuantity,
    ResourceVector,
    TransformationMatrix,
    TransportMode,
    Vertex,
    WelfareRepresentation,
    beings_of,
    consumption_of,
    validate_model,
)
from .rationals import as_rat, format_rational, make_rat, parse_rational
from .scenarios import (
    CommonCapacity,
    CommonDelta,
    ConversionEntry,
    DeprivationReport,
    DimensionMismatch,
    ForbidAction,
    InvariantViolated,
    Override,
    Resource,
    Scenario,
    ScenarioEvaluator,
    TransformationEntry,
    UnknownCitizen,
    UnresolvableScenario,
    apply_scenario,
    deprivation,
    evaluate,
)
from .solver import (
    FrontierOptions,
    NodeLimitExceeded,
    SearchSpaceTooLarge,
    SolverError,
    enumerate_beings,
    exhaustive_frontier,
    pareto_frontier,
    solve_single,
)

__version__ = "0.1.0"

__all__ = [
    "ActionKind",
    "Activity",
    "BeingsPoint",
    "CitizenState",
    "CityModel",
    "CommonCapacity",
    "CommonDelta",
    "CommonKind",
    "CommonSpec",
    "CommonsState",
    "ComparisonOutcome",
    "ConversionEntry",
    "ConversionMatrix",
    "DeprivationReport",
    "DimensionMismatch",
    "Doings",
    "Edge",
    "ForbidAction",
    "FrontierOptions",
    "FrontierPoint",
    "IlpInstance",
    "InvariantViolated",
    "ModelDocument",
    "ModelSyntaxError",
    "NodeLimitExceeded",
    "Override",
    "Relation",
    "Resource",
    "ResourceQuantity",
    "ResourceVector",
    "Scenario",
    "ScenarioEvaluator",
    "SchemaError",
    "SearchSpaceTooLarge",
    "SolverError",
    "TransformationEntry",
    "TransformationMatrix",
    "TransportMode",
    "UnboundedVariableError",
    "UnknownCitizen",
    "UnresolvableScenario",
    "ValidationError",
    "Vertex",
    "WelfareRepresentation",
    "apply_scenario",
    "as_rat",
    "beings_of",
    "build_ilp",
    "build_ilp_for_dimensions",
    "classify",
    "consumption_of",
    "deprivation",
    "enumerate_beings",
    "evaluate",
    "exhaustive_frontier",
    "format_rational",
    "load_fixture",
    "load_model",
    "make_rat",
    "pareto_frontier",
    "parse_model",
    "parse_rational",
    "serialize_model",
    "set_covers",
    "set_succeeds",
    "solve_single",
    "validate_model",
]
