"""Projective measurement routes: execute, compare, and certify.

The package simulates sequences of non-selective projective measurements
under the Lueders and von Neumann update rules, and quantifies whether
alternative routes to the same target observable leave distinguishable
final states.
"""

from .errors import (
    AmbiguousGroupingError,
    CapacityError,
    DimensionError,
    HermiticityError,
    NonCommutingError,
    NormalizationError,
    NoStageError,
    ParseError,
    QRoutesError,
    UnknownLabelError,
    UnknownScenarioError,
    ValidationError,
    ZeroProbabilityError,
)
from .linalg import (
    DensityMatrix,
    adjoint,
    hermitian_eigendecomposition,
    matmul,
    partial_trace,
    tensor,
    trace_distance,
)
from .measurement import (
    EigenGroup,
    Observable,
    ProjectionRule,
    apply_rule,
    luders_update,
    selective_outcome,
    spectral_decompose,
    von_neumann_update,
)
from .probe import (
    PointerRegister,
    TotalState,
    init_total,
    interact,
    probe_signal_distribution,
    reduced_system_state,
)
from .routes import (
    ComparisonReport,
    Route,
    RouteTargetWarning,
    Verdict,
    commutes,
    compare_routes,
    product_observable,
    run_route,
)
from .scenarios import (
    Scenario,
    builtin,
    builtin_descriptions,
    counterexample_basis,
    parse_scenario,
    serialize_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousGroupingError",
    "CapacityError",
    "ComparisonReport",
    "DensityMatrix",
    "DimensionError",
    "EigenGroup",
    "HermiticityError",
    "NonCommutingError",
    "NormalizationError",
    "NoStageError",
    "Observable",
    "ParseError",
    "PointerRegister",
    "ProjectionRule",
    "QRoutesError",
    "Route",
    "RouteTargetWarning",
    "Scenario",
    "TotalState",
    "UnknownLabelError",
    "UnknownScenarioError",
    "ValidationError",
    "Verdict",
    "ZeroProbabilityError",
    "adjoint",
    "apply_rule",
    "builtin",
    "builtin_descriptions",
    "commutes",
    "compare_routes",
    "counterexample_basis",
    "hermitian_eigendecomposition",
    "init_total",
    "interact",
    "luders_update",
    "matmul",
    "partial_trace",
    "parse_scenario",
    "probe_signal_distribution",
    "product_observable",
    "reduced_system_state",
    "run_route",
    "selective_outcome",
    "serialize_scenario",
    "spectral_decompose",
    "tensor",
    "trace_distance",
    "von_neumann_update",
]
