"""Weighted Gram matrices of the sinc node basis.

For a density W(x) = 1 + gamma*sin(2 pi x)/(2 pi x) + eta*delta_0(x) and
the basis e_n(x) = sinc(delta*x - n), the Gram entries are

    (G_W)_{mn} = integral e_m e_n W dx
               = (1/delta) delta_{mn} + gamma * S_{mn} + eta * delta_{m0} delta_{n0},

where S_{mn} = integral e_m(x) e_n(x) sin(2 pi x)/(2 pi x) dx, and the
point mass lands on entry (0, 0) alone because e_n(0) = delta_{n0}.

Closed form for S_{mn}.  On the transform side the basis functions are
(1/delta) e^{-2 pi i n xi/delta} on |xi| <= delta/2 and the sine-ratio
weight is (1/2) on |xi| <= 1, so with a = 2 pi m/delta, b = 2 pi n/delta,

    S_{mn} = (1/(2 delta^2)) * double integral of e^{i(b xi - a eta)}
             over { |xi| <= delta/2, |eta| <= delta/2, |xi - eta| <= 1 }.

For delta <= 1 the band constraint is inactive; the integral factorizes
into two node-orthogonality integrals and S_{mn} = (1/2) delta_{m0}
delta_{n0} exactly.  For delta > 1 the band removes two congruent corner
triangles from the square and each triangle integral reduces to the
elementary antiderivatives below.  Frequencies are integer multiples of
2 pi/delta, so the zero-frequency branches are keyed on integers, never
on floating-point comparisons.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .density import SymmetryGroup, as_group, weight_params
from .numerics import FactorizationError
from .pw_core import validate_delta

__all__ = [
    "NodeWindow",
    "WeightedGram",
    "sin_weight_entry",
    "sin_weight_block",
    "assemble_gram",
    "default_window",
    "expanded_window",
]

# Test-only seam: when set, called as hook(entries, window) after assembly
# and before factorization, returning the (possibly corrupted) matrix.
# The verification suite's Gram oracle exists to catch exactly this.
_test_entry_corruption = None


@dataclass(frozen=True)
class NodeWindow:
    """Contiguous node index range n_min..n_max (nodes at n/delta)."""

    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_min != int(self.n_min) or self.n_max != int(self.n_max):
            raise ValueError("window bounds must be integers")
        if self.n_min > self.n_max:
            raise ValueError(f"empty window [{self.n_min}, {self.n_max}]")

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def nodes(self, delta: float) -> np.ndarray:
        return self.indices / validate_delta(delta)

    def contains_zero(self) -> bool:
        return self.n_min <= 0 <= self.n_max

    def reflected(self) -> "NodeWindow":
        return NodeWindow(-self.n_max, -self.n_min)


def default_window(delta: float, alpha: float, k: int = 1) -> NodeWindow:
    """Default node window for a single computation.

    Covers [min(0, alpha) - L, max(0, alpha) + L] with L = 12/delta + 4:
    the origin's weight features, the center alpha, and the first-zero
    scale all sit well inside.
    """
    delta = validate_delta(delta)
    length = 12.0 / delta + 4.0
    lo = min(0.0, alpha) - length
    hi = max(0.0, alpha) + length
    window = NodeWindow(int(np.ceil(delta * lo)), int(np.floor(delta * hi)))
    if window.size < k + 2:
        raise ValueError(f"default window too small for k = {k}")
    return window


def expanded_window(delta: float, alpha: float, margin_nodes: int) -> NodeWindow:
    """Window covering [min(0, alpha), max(0, alpha)] plus a node margin."""
    delta = validate_delta(delta)
    if margin_nodes < 1:
        raise ValueError("margin_nodes must be >= 1")
    n_lo = int(np.floor(delta * min(0.0, alpha))) - int(margin_nodes)
    n_hi = int(np.ceil(delta * max(0.0, alpha))) + int(margin_nodes)
    return NodeWindow(n_lo, n_hi)


# ----------------------------------------------------------------------
# Closed-form corner integrals.
#
# J(u, v) = integral_{xi=p}^{q} e^{i u xi} integral_{eta=-delta/2}^{xi-1}
#           e^{i v eta} d eta d xi,   p = 1 - delta/2,  q = delta/2,
#
# is the integral over the upper corner triangle {xi - eta >= 1} of the
# square.  The two triangles removed by the band are J(b, -a) (xi large)
# and, by swapping the roles of the variables, J(-a, b):
#
#   S_{mn} = (1/2) delta_{m0} delta_{n0}
#            - Re[ J(b, -a) + J(-a, b) ] / (2 delta^2)        (delta > 1).
# ----------------------------------------------------------------------


def _e1(c, zero_mask, p, q):
    """integral_p^q e^{i c xi} d xi with an exact c = 0 branch."""
    safe = np.where(zero_mask, 1.0, c)
    val = (np.exp(1j * safe * q) - np.exp(1j * safe * p)) / (1j * safe)
    return np.where(zero_mask, q - p, val)


def _e2(c, zero_mask, p, q):
    """integral_p^q xi e^{i c xi} d xi with an exact c = 0 branch."""
    safe = np.where(zero_mask, 1.0, c)
    ic = 1j * safe
    e1 = (np.exp(ic * q) - np.exp(ic * p)) / ic
    val = (q * np.exp(ic * q) - p * np.exp(ic * p)) / ic - e1 / ic
    return np.where(zero_mask, 0.5 * (q * q - p * p), val)


def _corner_integral(delta: float, u_int, v_int):
    """J(u, v) for integer frequency multipliers u = 2 pi u_int/delta etc."""
    p = 1.0 - delta / 2.0
    q = delta / 2.0
    step = 2.0 * np.pi / delta
    u = step * u_int
    v = step * v_int
    u_zero = u_int == 0
    v_zero = v_int == 0
    sum_zero = (u_int + v_int) == 0

    e1_sum = _e1(u + v, sum_zero, p, q)
    e1_u = _e1(u, u_zero, p, q)

    v_safe = np.where(v_zero, 1.0, v)
    # Inner eta-integral evaluated, then the outer xi-integral:
    with_v = (
        np.exp(-1j * v_safe) * e1_sum - np.exp(-1j * v_safe * delta / 2.0) * e1_u
    ) / (1j * v_safe)
    # v = 0: the inner integral is the length xi - 1 + delta/2.
    without_v = _e2(u, u_zero, p, q) + (delta / 2.0 - 1.0) * e1_u
    return np.where(v_zero, without_v, with_v)


def sin_weight_block(delta: float, m_idx, n_idx) -> np.ndarray:
    """S_{mn} for all pairs of the given index arrays (rows m, columns n)."""
    delta = validate_delta(delta)
    m = np.asarray(m_idx, dtype=np.int64).reshape(-1, 1)
    n = np.asarray(n_idx, dtype=np.int64).reshape(1, -1)
    base = np.where((m == 0) & (n == 0), 0.5, 0.0)
    if delta <= 1.0:
        # Band contains the whole square: exact node-orthogonality value.
        return base + np.zeros(np.broadcast_shapes(m.shape, n.shape))
    corners = _corner_integral(delta, n, -m) + _corner_integral(delta, -m, n)
    return base - corners.real / (2.0 * delta * delta)


def sin_weight_entry(delta: float, m: int, n: int) -> float:
    """Single entry S_{mn}; same closed form as sin_weight_block."""
    return float(sin_weight_block(delta, [int(m)], [int(n)])[0, 0])


@dataclass(eq=False)
class WeightedGram:
    """Dense symmetric positive definite Gram matrix over a node window.

    The Cholesky factor is computed at assembly (the positive
    definiteness assertion) and cached for the kernel route's triangular
    solves.
    """

    group: SymmetryGroup
    delta: float
    window: NodeWindow
    entries: np.ndarray = field(repr=False)
    cho: tuple = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return self.window.size

    def nodes(self) -> np.ndarray:
        return self.window.nodes(self.delta)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """G^{-1} rhs via the cached factorization (two triangular solves)."""
        return scipy.linalg.cho_solve(self.cho, rhs, check_finite=False)


def _blocked_sin_weight(delta: float, idx: np.ndarray) -> np.ndarray:
    """Full S block over idx x idx, assembled in row blocks to cap memory."""
    n_total = idx.size
    out = np.empty((n_total, n_total), dtype=float)
    block = 512
    for start in range(0, n_total, block):
        stop = min(start + block, n_total)
        out[start:stop, :] = sin_weight_block(delta, idx[start:stop], idx)
    return out


def assemble_gram(
    group: SymmetryGroup | str, delta: float, window: NodeWindow
) -> WeightedGram:
    """Assemble and factor the weighted Gram matrix.

    Fails when eta > 0 but the window misses node 0, and when the
    factorization breaks down (conditioning diagnostic attached).
    """
    group = as_group(group)
    delta = validate_delta(delta)
    spec = weight_params(group)
    if spec.eta > 0.0 and not window.contains_zero():
        raise ValueError(
            f"window [{window.n_min}, {window.n_max}] must contain node 0 "
            f"for {group} (point mass at the origin)"
        )
    idx = window.indices
    entries = np.zeros((window.size, window.size), dtype=float)
    np.fill_diagonal(entries, 1.0 / delta)
    if spec.gamma != 0:
        entries += spec.gamma * _blocked_sin_weight(delta, idx)
    if spec.eta > 0.0:
        zero_pos = int(np.searchsorted(idx, 0))
        entries[zero_pos, zero_pos] += spec.eta

    if _test_entry_corruption is not None:
        entries = _test_entry_corruption(entries.copy(), window)

    try:
        cho = scipy.linalg.cho_factor(entries, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        smallest = float(scipy.linalg.eigvalsh(entries, subset_by_index=(0, 0))[0])
        raise FactorizationError(
            f"Gram for {group}, delta={delta}, window [{window.n_min}, "
            f"{window.n_max}] is not positive definite "
            f"(smallest eigenvalue {smallest:.3e}): {exc}"
        ) from exc

    # Cheap conditioning estimate; a tiny smallest eigenvalue degrades
    # every downstream solve, so it is worth a warning.
    anorm = np.linalg.norm(entries, 1)
    rcond, info = scipy.linalg.lapack.dpocon(cho[0], anorm, uplo="L")
    if info == 0 and rcond * anorm < 1e-10:
        warnings.warn(
            f"Gram for {group}, delta={delta} is nearly singular "
            f"(smallest eigenvalue approximately {rcond * anorm:.3e})",
            RuntimeWarning,
            stacklevel=2,
        )
    return WeightedGram(group=group, delta=delta, window=window, entries=entries, cho=cho)
