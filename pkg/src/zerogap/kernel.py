"""Kernel-route solver (k = 1).

The sharp constant equals lambda0^2 where lambda0 is the first positive
zero of the diagonal section

    x  ->  K(alpha + x, alpha - x)

of the weighted reproducing kernel.  Two backings realize K: closed
forms for the flat weight (U) and its point-mass update (O), and a
Gram-inverse surrogate for everything else:

    K_hat(w, z) = sum_{m,n} e_m(w) (G_W^{-1})_{mn} e_n(z),

the exact reproducing kernel of the windowed basis span under the
weighted inner product, which converges to K as the window grows.
Evaluations reuse the Gram's Cholesky factor (two triangular solves per
batch); the inverse matrix is never formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .density import SymmetryGroup, as_group
from .gram import NodeWindow, WeightedGram, assemble_gram
from .numerics import first_positive_zero
from .pw_core import pw_kernel, validate_delta
from .variational import ExtremalSolution

__all__ = [
    "KernelSurrogate",
    "kernel_numeric",
    "kernel_o_closed",
    "closed_surrogate",
    "kernel_window",
    "default_scan_step",
    "default_lambda_max",
    "extremal_via_kernel",
]

CLOSED_FORM_GROUPS = (SymmetryGroup.UNITARY, SymmetryGroup.ORTHOGONAL)


def kernel_o_closed(delta: float, w, z):
    """Closed-form kernel for the flat-plus-half-point-mass weight.

    Adding the mass (1/2) delta_0 to the flat measure updates the kernel
    by a rank-one correction pinned at the origin:

        K_O(w, z) = K_U(w, z) - (1/2) K_U(w, 0) K_U(0, z) / (1 + (1/2) K_U(0, 0)),

    with K_U(0, 0) = delta.  Validated against the Gram-inverse backing
    in the test suite before being trusted as the fast path.
    """
    delta = validate_delta(delta)
    correction = pw_kernel(delta, w, 0.0) * pw_kernel(delta, 0.0, z)
    return pw_kernel(delta, w, z) - 0.5 * correction / (1.0 + 0.5 * delta)


@dataclass(eq=False)
class KernelSurrogate:
    """Evaluator for the weighted reproducing kernel.

    backing is "closed:U", "closed:O", or "gram-inverse"; only the last
    carries a Gram.  Immutable after construction and safe to share.
    """

    group: SymmetryGroup
    delta: float
    backing: str
    gram: WeightedGram | None = field(default=None, repr=False)

    @property
    def nodes(self) -> int:
        """Basis size behind the evaluator (0 for closed forms)."""
        return self.gram.size if self.gram is not None else 0

    def value(self, w: float, z: float) -> float:
        """K(w, z) at real arguments."""
        if self.backing == "closed:U":
            return pw_kernel(self.delta, w, z)
        if self.backing == "closed:O":
            return float(kernel_o_closed(self.delta, w, z))
        e_w = np.sinc(self.delta * float(w) - self.gram.window.indices)
        e_z = np.sinc(self.delta * float(z) - self.gram.window.indices)
        return float(e_w @ self.gram.solve(e_z))

    def section(self, alpha: float, xs: np.ndarray) -> np.ndarray:
        """K(alpha + x, alpha - x) for an array of offsets x."""
        xs = np.asarray(xs, dtype=float)
        if self.backing == "closed:U":
            return pw_kernel(self.delta, alpha + xs, alpha - xs)
        if self.backing == "closed:O":
            return np.asarray(kernel_o_closed(self.delta, alpha + xs, alpha - xs))
        idx = self.gram.window.indices
        e_w = np.sinc(self.delta * (alpha + xs)[None, :] - idx[:, None])
        e_z = np.sinc(self.delta * (alpha - xs)[None, :] - idx[:, None])
        return np.einsum("ij,ij->j", e_w, self.gram.solve(e_z))


def closed_surrogate(group: SymmetryGroup | str, delta: float) -> KernelSurrogate:
    """Closed-form surrogate for the two weights that admit one."""
    group = as_group(group)
    if group is SymmetryGroup.UNITARY:
        return KernelSurrogate(group, validate_delta(delta), "closed:U")
    if group is SymmetryGroup.ORTHOGONAL:
        return KernelSurrogate(group, validate_delta(delta), "closed:O")
    raise ValueError(f"no closed-form kernel for {group}")


def kernel_numeric(
    group: SymmetryGroup | str, delta: float, window: NodeWindow
) -> KernelSurrogate:
    """Gram-inverse surrogate over the given node window (any group)."""
    gram = assemble_gram(group, delta, window)
    return KernelSurrogate(as_group(group), validate_delta(delta), "gram-inverse", gram)


def default_scan_step(delta: float) -> float:
    """Scan resolution: the first zero sits at scale 1/(2 delta), so
    min(1/(8 delta), 0.01) resolves it with at least four points."""
    return min(1.0 / (8.0 * delta), 0.01)


def default_lambda_max(delta: float, alpha: float) -> float:
    """Scan ceiling max(4/delta, 2|alpha| + 4/delta); the first zero is
    confined well below this for every weight."""
    return max(4.0 / delta, 2.0 * abs(alpha) + 4.0 / delta)


def kernel_window(
    delta: float, alpha: float, margin_nodes: int = 600, lambda_max: float | None = None
) -> NodeWindow:
    """Node window for the numeric backing: covers the scanned argument
    range [alpha - lambda_max, alpha + lambda_max] and the origin, with
    margin_nodes extra basis nodes on each side."""
    delta = validate_delta(delta)
    if lambda_max is None:
        lambda_max = default_lambda_max(delta, alpha)
    lo = min(0.0, alpha - lambda_max)
    hi = max(0.0, alpha + lambda_max)
    return NodeWindow(
        int(np.floor(delta * lo)) - int(margin_nodes),
        int(np.ceil(delta * hi)) + int(margin_nodes),
    )


def _check_coverage(
    surrogate: KernelSurrogate, alpha: float, lambda_max: float
) -> None:
    """Numeric backing must cover the scan range and 0 with >= 30 nodes."""
    if surrogate.gram is None:
        return
    window = surrogate.gram.window
    delta = surrogate.delta
    lo_needed = delta * min(0.0, alpha - lambda_max) - 30.0
    hi_needed = delta * max(0.0, alpha + lambda_max) + 30.0
    if window.n_min > lo_needed or window.n_max < hi_needed:
        raise ValueError(
            f"window [{window.n_min}, {window.n_max}] does not cover the scan "
            f"range for alpha={alpha}, lambda_max={lambda_max} with a 30-node margin"
        )


def extremal_via_kernel(
    group: SymmetryGroup | str,
    delta: float,
    alpha: float,
    surrogate: KernelSurrogate | None = None,
    window: NodeWindow | None = None,
    margin_nodes: int = 600,
    scan_step: float | None = None,
    lambda_max: float | None = None,
    tol: float = 1e-10,
) -> ExtremalSolution:
    """First positive zero of x -> K(alpha + x, alpha - x); k = 1 only.

    Closed-form backings are chosen automatically for U and O; other
    groups assemble a Gram over `window` (default: kernel_window with
    margin_nodes).  A tangential first zero is accepted but flagged in
    diagnostics (the criterion asks for a zero, not a sign change).
    """
    group = as_group(group)
    delta = validate_delta(delta)
    alpha = float(alpha)
    if scan_step is None:
        scan_step = default_scan_step(delta)
    if lambda_max is None:
        lambda_max = default_lambda_max(delta, alpha)

    if surrogate is None:
        if group in CLOSED_FORM_GROUPS:
            surrogate = closed_surrogate(group, delta)
        elif delta == 1.0 and group in (SymmetryGroup.SO_EVEN, SymmetryGroup.SO_ODD):
            # At delta = 1 the sin-ratio term integrates to the same
            # rank-one origin mass as O's point mass (the three
            # orthogonal Grams coincide entrywise), so the O closed form
            # is the exact kernel for these weights too.
            surrogate = KernelSurrogate(group, delta, "closed:O")
        else:
            if window is None:
                window = kernel_window(delta, alpha, margin_nodes, lambda_max)
            surrogate = kernel_numeric(group, delta, window)
    else:
        if (surrogate.group, surrogate.delta) != (group, delta):
            raise ValueError("surrogate does not match the requested group/delta")
    _check_coverage(surrogate, alpha, lambda_max)

    def section(xs: np.ndarray) -> np.ndarray:
        return surrogate.section(alpha, np.atleast_1d(xs))

    root = first_positive_zero(
        section, scan_step, lambda_max, tol, vectorized=True
    )
    lambda0 = root.root
    diagnostics = {
        "backing": surrogate.backing,
        "nodes": surrogate.nodes,
        "residual": abs(root.f_at_root),
        "tangential": root.tangential,
        "scan_step": scan_step,
        "lambda_max": lambda_max,
    }
    if surrogate.gram is not None:
        w = surrogate.gram.window
        diagnostics["window"] = (w.n_min, w.n_max)
    return ExtremalSolution(
        lambda0=lambda0,
        a_value=lambda0 * lambda0,
        route="kernel",
        k=1,
        coeffs=None,
        diagnostics=diagnostics,
    )
