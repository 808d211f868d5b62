"""Sharp constants for the distance to the nearest L-function zero.

Computes A(G, pi*delta, alpha): the infimum of the weighted Rayleigh
quotient int |(x - alpha)^k f|^2 W_G / int |f|^2 W_G over bandlimited f
of exponential type pi*delta, for the five symmetry-group densities
W_G.  Its 2k-th root lambda0 bounds the distance from the height alpha
to the nearest normalized zero in the corresponding family.

Three independent routes compute the same number: a variational
Rayleigh-Ritz solver over sinc nodes (any group, any k), a reproducing
kernel section root (k = 1, closed forms for U and O), and the
determinant criterion for the flat weight (any k).  `solve` picks the
fastest trusted route and cross-checks where two apply.
"""

from .api import CrossRouteMismatch, ROUTES, solve, zero_distance_bound
from .debranges import (
    DetProblem,
    PoleStraddleError,
    det_extension,
    detroot_value,
    midpoint_value,
    partial_fraction_check,
    sequence_oracle,
    v_matrix,
)
from .density import SymmetryGroup, as_group, weight_ac, weight_params
from .gram import (
    NodeWindow,
    WeightedGram,
    assemble_gram,
    default_window,
    expanded_window,
    sin_weight_block,
    sin_weight_entry,
)
from .kernel import (
    KernelSurrogate,
    closed_surrogate,
    extremal_via_kernel,
    kernel_numeric,
    kernel_o_closed,
)
from .numerics import (
    FactorizationError,
    MaxSubdivisionError,
    NoRootInRange,
    adaptive_quad,
    bisect_root,
    first_positive_zero,
    nullspace_basis,
    smallest_generalized_eig,
)
from .pw_core import (
    PoleProximityError,
    PwStructure,
    c_series_partial,
    pw_kernel,
    sinc,
    sinc_node,
)
from .report import SweepConfig, SweepRow, render_svg, run_sweep
from .variational import (
    ExtremalSolution,
    ProblemSpec,
    extremizer_samples,
    moment_constraints,
    variational_value,
)
from .verify import CriterionResult, run_criteria

__version__ = "0.1.0"

__all__ = [
    "CrossRouteMismatch",
    "CriterionResult",
    "DetProblem",
    "ExtremalSolution",
    "FactorizationError",
    "KernelSurrogate",
    "MaxSubdivisionError",
    "NodeWindow",
    "NoRootInRange",
    "PoleProximityError",
    "PoleStraddleError",
    "ProblemSpec",
    "PwStructure",
    "ROUTES",
    "SweepConfig",
    "SweepRow",
    "SymmetryGroup",
    "WeightedGram",
    "adaptive_quad",
    "as_group",
    "assemble_gram",
    "bisect_root",
    "c_series_partial",
    "closed_surrogate",
    "default_window",
    "det_extension",
    "detroot_value",
    "expanded_window",
    "extremal_via_kernel",
    "extremizer_samples",
    "first_positive_zero",
    "kernel_numeric",
    "kernel_o_closed",
    "midpoint_value",
    "moment_constraints",
    "nullspace_basis",
    "partial_fraction_check",
    "pw_kernel",
    "render_svg",
    "run_criteria",
    "run_sweep",
    "sequence_oracle",
    "sin_weight_block",
    "sin_weight_entry",
    "sinc",
    "sinc_node",
    "smallest_generalized_eig",
    "solve",
    "v_matrix",
    "variational_value",
    "weight_ac",
    "weight_params",
    "zero_distance_bound",
]
