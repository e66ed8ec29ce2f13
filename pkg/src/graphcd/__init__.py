"""Curvature-dimension bounds and heat-semigroup estimates on finite weighted graphs."""

__version__ = "0.1.0"

from ._kernels import backend_name, warmup
from .graph import (
    Ball,
    GraphFormatError,
    WeightedGraph,
    ball2,
    degree,
    load_graph,
    load_vertex_function,
    save_graph,
    save_vertex_function,
)
from .operators import (
    LocalForms,
    dirichlet_energy,
    gamma,
    gamma2,
    gamma_composition,
    green_identity_residual,
    laplacian,
    laplacian_matrix,
    local_forms,
)
from .curvature import (
    CdCheck,
    CurvatureInternalError,
    CurvatureResult,
    IsolatedVertexError,
    cde_falsify,
    cde_residual,
    check_cd,
    curvature_all,
    curvature_at,
    curvature_oracle,
    min_curvature,
)
from .semigroup import SpectralDecomposition, decompose, heat_apply
from .verify import (
    QuadratureSpec,
    VerificationRecord,
    VerificationReport,
    cdn_bound,
    derivative_recovery,
    find_violations,
    gamma2_identity_residual,
    gradient_estimate,
    run_verification,
    function_corpus,
    variance_bound,
    variance_identity_residual,
)

__all__ = [
    "Ball",
    "CdCheck",
    "CurvatureInternalError",
    "CurvatureResult",
    "GraphFormatError",
    "IsolatedVertexError",
    "LocalForms",
    "QuadratureSpec",
    "SpectralDecomposition",
    "VerificationRecord",
    "VerificationReport",
    "WeightedGraph",
    "backend_name",
    "warmup",
    "ball2",
    "cde_falsify",
    "cde_residual",
    "cdn_bound",
    "check_cd",
    "curvature_all",
    "curvature_at",
    "curvature_oracle",
    "degree",
    "derivative_recovery",
    "dirichlet_energy",
    "find_violations",
    "gamma",
    "gamma2",
    "gamma2_identity_residual",
    "gamma_composition",
    "gradient_estimate",
    "green_identity_residual",
    "heat_apply",
    "laplacian",
    "laplacian_matrix",
    "load_graph",
    "load_vertex_function",
    "local_forms",
    "min_curvature",
    "run_verification",
    "save_graph",
    "save_vertex_function",
    "function_corpus",
    "variance_bound",
    "variance_identity_residual",
    "decompose",
]
