"""Route dispatch: one entry point over the three solver routes.

The automatic policy picks the fastest trusted route per case:

    k = 1, U or O        closed-form kernel
    k = 1, other groups  Gram-inverse kernel
    k >= 2, any group    variational; for U additionally cross-checked
                         against the determinant route

Explicit routes are honored when they apply (the kernel route is k = 1
only; the determinant route exists only for the flat weight).
"""

from __future__ import annotations

import numpy as np

from .debranges import DetProblem, detroot_value
from .density import SymmetryGroup, as_group
from .gram import NodeWindow, default_window
from .kernel import extremal_via_kernel
from .pw_core import validate_delta
from .variational import ExtremalSolution, ProblemSpec, variational_value

__all__ = [
    "ROUTES",
    "CrossRouteMismatch",
    "solve",
    "zero_distance_bound",
]

ROUTES = ("auto", "variational", "kernel", "debranges")

# Relative disagreement beyond which a cross-check aborts the solve.
CROSS_CHECK_RTOL = 1e-3

# Node budget for auto-dispatched variational solves (k >= 2): large
# enough that the truncation error sits inside the cross-check tolerance.
_AUTO_VARIATIONAL_NODES = 1601


class CrossRouteMismatch(RuntimeError):
    """Two independent routes disagreed beyond the cross-check tolerance."""


def _variational_window(
    delta: float, alpha: float, k: int, nodes: int | None
) -> NodeWindow:
    """Default window, symmetrically padded until it holds >= nodes nodes."""
    window = default_window(delta, alpha, k)
    if nodes is None or window.size >= nodes:
        return window
    pad = (int(nodes) - window.size + 1) // 2
    return NodeWindow(window.n_min - pad, window.n_max + pad)


def solve(
    group: SymmetryGroup | str,
    delta: float,
    alpha: float,
    k: int = 1,
    route: str = "auto",
    nodes: int | None = None,
    tol: float = 1e-10,
) -> ExtremalSolution:
    """Compute the sharp constant for one (group, delta, alpha, k).

    nodes, when given, sets a minimum basis size for the routes that
    truncate (variational window nodes, kernel Gram nodes); closed-form
    kernel backings ignore it.  Raises CrossRouteMismatch if an
    automatic cross-check disagrees beyond CROSS_CHECK_RTOL, and
    ValueError for route/problem combinations that do not exist.
    """
    group = as_group(group)
    delta = validate_delta(delta)
    alpha = float(alpha)
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    if k < 1 or k != int(k):
        raise ValueError("k must be a positive integer")
    k = int(k)

    if route == "kernel" or (route == "auto" and k == 1):
        if k != 1:
            raise ValueError("the kernel route computes k = 1 only")
        margin = 600 if nodes is None else max(30, int(nodes) // 2)
        return extremal_via_kernel(
            group, delta, alpha, margin_nodes=margin, tol=tol
        )

    if route == "debranges":
        if group is not SymmetryGroup.UNITARY:
            raise ValueError(
                "the determinant route is instantiated for the flat (U) weight only"
            )
        return detroot_value(DetProblem(delta, alpha, k), tol=tol)

    # Variational, either requested or the k >= 2 automatic path.
    budget = nodes
    if route == "auto" and budget is None:
        budget = _AUTO_VARIATIONAL_NODES
    window = _variational_window(delta, alpha, k, budget)
    spec = ProblemSpec(group=group, delta=delta, alpha=alpha, k=k, window=window, tol=tol)
    solution = variational_value(spec)

    if route == "auto" and group is SymmetryGroup.UNITARY:
        reference = detroot_value(DetProblem(delta, alpha, k), tol=tol)
        rel = abs(solution.a_value - reference.a_value) / abs(reference.a_value)
        solution.diagnostics["cross_check"] = {
            "route": "debranges",
            "a_value": reference.a_value,
            "rel_diff": rel,
        }
        if rel > CROSS_CHECK_RTOL:
            raise CrossRouteMismatch(
                f"variational and determinant routes disagree by {rel:.3e} "
                f"(> {CROSS_CHECK_RTOL}) for U, delta={delta}, alpha={alpha}, k={k}"
            )
    return solution


def zero_distance_bound(
    group: SymmetryGroup | str, delta: float, alpha: float, **solve_kwargs
) -> float:
    """Reported bound on the distance from height alpha to the nearest zero.

    sqrt(aValue) for U, Sp, SO(even); the orthogonal families with a
    forced central zero (O, SO(odd)) sharpen it to min(sqrt(aValue), |alpha|).
    """
    group = as_group(group)
    solution = solve(group, delta, alpha, k=1, **solve_kwargs)
    bound = solution.sqrt_a
    if group in (SymmetryGroup.ORTHOGONAL, SymmetryGroup.SO_ODD):
        bound = min(bound, abs(float(alpha)))
    return float(bound)
