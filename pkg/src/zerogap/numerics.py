"""Supporting numerical contracts.

Four generic tools used by the solver routes: smallest eigenpair of a
symmetric-definite pencil, orthonormal nullspace bases, a bracketing
first-positive-zero finder with a tangential-root diagnostic, and an
adaptive Simpson quadrature used as a test oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "FactorizationError",
    "NoRootInRange",
    "MaxSubdivisionError",
    "RootBracket",
    "RootResult",
    "EigResult",
    "smallest_generalized_eig",
    "nullspace_basis",
    "bisect_root",
    "first_positive_zero",
    "adaptive_quad",
]


class FactorizationError(RuntimeError):
    """Symmetric factorization broke down (matrix not positive definite)."""

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class NoRootInRange(RuntimeError):
    """No sign change and no tangential candidate up to the scan ceiling."""

    def __init__(self, message: str, lambda_max: float | None = None):
        super().__init__(message)
        self.lambda_max = lambda_max


class MaxSubdivisionError(RuntimeError):
    """Adaptive quadrature exceeded its subdivision depth."""


@dataclass(frozen=True)
class RootBracket:
    """An interval with a sign change: lo < hi and f_lo * f_hi < 0."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0.0:
            raise ValueError(
                f"bracket needs a sign change, got f_lo={self.f_lo}, f_hi={self.f_hi}"
            )


@dataclass(frozen=True)
class RootResult:
    """Output of first_positive_zero.

    tangential marks a zero detected as a near-touch of the axis (a local
    minimum of |f| below the touch tolerance) rather than a sign change.
    """

    root: float
    f_at_root: float
    tangential: bool = False
    bracket: RootBracket | None = None


@dataclass(frozen=True)
class EigResult:
    """Smallest eigenpair of M v = value * N v with its scaled residual."""

    value: float
    vector: np.ndarray = field(repr=False)
    residual_norm: float


_PIVOT_RE = re.compile(r"(\d+)(?:-th|th)? leading minor")


def _cho_factor_checked(n_mat: np.ndarray):
    """Cholesky factor of an SPD matrix; FactorizationError names the pivot."""
    try:
        return scipy.linalg.cho_factor(n_mat, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        match = _PIVOT_RE.search(str(exc))
        pivot = int(match.group(1)) if match else None
        raise FactorizationError(
            f"matrix is not positive definite: {exc}", pivot=pivot
        ) from exc


def smallest_generalized_eig(m_mat: np.ndarray, n_mat: np.ndarray) -> EigResult:
    """Minimal eigenpair of the symmetric-definite pencil (M, N).

    M must be symmetric and N symmetric positive definite.  N is reduced
    by Cholesky (failure reports the pivot index) and the smallest
    eigenpair is extracted by a dense symmetric solve; the result is
    deterministic for fixed input.  residual_norm records
    ||M v - value N v|| / ||v||.
    """
    m_mat = np.asarray(m_mat, dtype=float)
    n_mat = np.asarray(n_mat, dtype=float)
    if m_mat.shape != n_mat.shape or m_mat.ndim != 2 or m_mat.shape[0] != m_mat.shape[1]:
        raise ValueError(f"shape mismatch: M {m_mat.shape}, N {n_mat.shape}")
    scale_m = np.linalg.norm(m_mat, np.inf) or 1.0
    scale_n = np.linalg.norm(n_mat, np.inf) or 1.0
    if np.linalg.norm(m_mat - m_mat.T, np.inf) > 1e-12 * scale_m:
        raise ValueError("M is not symmetric")
    if np.linalg.norm(n_mat - n_mat.T, np.inf) > 1e-12 * scale_n:
        raise ValueError("N is not symmetric")

    # Explicit Cholesky first: this is the contract's failure point and
    # carries the pivot index; the eigensolver then reuses N directly.
    _cho_factor_checked(n_mat)

    try:
        vals, vecs = scipy.linalg.eigh(
            m_mat, n_mat, subset_by_index=(0, 0), driver="gvx", check_finite=False
        )
    except TypeError:
        # Older scipy without subset support on the generalized path.
        vals, vecs = scipy.linalg.eigh(m_mat, n_mat, check_finite=False)
    value = float(vals[0])
    vector = np.ascontiguousarray(vecs[:, 0])
    vnorm = np.linalg.norm(vector)
    residual = np.linalg.norm(m_mat @ vector - value * (n_mat @ vector)) / vnorm
    return EigResult(value=value, vector=vector, residual_norm=float(residual))


def nullspace_basis(c_mat: np.ndarray) -> np.ndarray:
    """Orthonormal basis Z of ker(C) with C Z = 0 to 1e-12.

    The numerical rank r uses the threshold 1e-10 * ||C||_2; Z has shape
    N x (N - r).  Raises if the kernel is trivial (r = N).
    """
    c_mat = np.atleast_2d(np.asarray(c_mat, dtype=float))
    n_cols = c_mat.shape[1]
    _, svals, vh = np.linalg.svd(c_mat, full_matrices=True)
    top = svals[0] if svals.size else 0.0
    rank = int(np.sum(svals > 1e-10 * top)) if top > 0.0 else 0
    if rank >= n_cols:
        raise ValueError("constraint matrix has full column rank: no feasible directions")
    basis = np.ascontiguousarray(vh[rank:].T)
    return basis


def bisect_root(f, lo: float, hi: float, f_lo: float, f_hi: float, tol: float) -> float:
    """Bisect a sign-change bracket down to width tol; returns the midpoint."""
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    bracket = RootBracket(lo, hi, f_lo, f_hi)  # validates the sign change
    lo, hi, f_lo = bracket.lo, bracket.hi, bracket.f_lo
    for _ in range(256):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = float(f(mid))
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def first_positive_zero(
    f,
    scan_step: float,
    lambda_max: float,
    tol: float,
    touch_tol: float | None = None,
    vectorized: bool = False,
    lambda_min: float = 0.0,
) -> RootResult:
    """First zero of f on (lambda_min, lambda_max] (lambda_min defaults to 0).

    Scans lambda_min + scan_step, + 2*scan_step, ... for the first sign
    change and bisects it to width tol.  Local minima of |f| without a
    sign change are refined; if the refined minimum dips below the touch
    tolerance before the first sign change, that point is returned
    flagged as a tangential root.  Raises NoRootInRange when neither
    occurs.  A positive lambda_min excludes a neighborhood of 0 where f
    is known to be degenerate (a fixed-multiplicity root at 0, say).

    With vectorized=True, f must accept a 1-D array of points and
    return the matching array of values (used by the kernel route to
    batch its evaluations); scalar calls are still made during
    refinement.
    """
    if scan_step <= 0.0 or tol <= 0.0 or lambda_max <= 0.0:
        raise ValueError("scan_step, lambda_max and tol must be positive")
    if lambda_min < 0.0 or lambda_min >= lambda_max:
        raise ValueError("need 0 <= lambda_min < lambda_max")

    def eval_batch(points: np.ndarray) -> np.ndarray:
        if vectorized:
            return np.asarray(f(points), dtype=float)
        return np.array([float(f(p)) for p in points], dtype=float)

    def eval_one(point: float) -> float:
        if vectorized:
            return float(np.asarray(f(np.array([point])))[0])
        return float(f(point))

    n_steps = int(np.floor((lambda_max - lambda_min) / scan_step))
    if n_steps < 1:
        raise NoRootInRange(
            f"scan range ({lambda_min}, {lambda_max}] shorter than one step",
            lambda_max=lambda_max,
        )

    chunk = 128
    # Anchor just above the range start so a zero inside the first step
    # still produces a sign change against the near-start value.
    anchor = lambda_min + scan_step / 1024.0
    anchor_f = eval_one(anchor)
    if anchor_f == 0.0:
        return RootResult(root=anchor, f_at_root=0.0)
    prev_x = anchor
    prev_f = anchor_f
    window3: list[tuple[float, float]] = [(anchor, anchor_f)]  # rolling (x, f) triple
    grid_max = abs(anchor_f)
    candidates: list[tuple[float, float, float]] = []  # dip triples (x_mid, x_lo, x_hi)

    def consider_dip():
        # Interior local minimum of |f| without sign change around it.
        (x0, f0), (x1, f1), (x2, f2) = window3
        if f0 * f1 < 0.0 or f1 * f2 < 0.0:
            return
        if abs(f1) <= abs(f0) and abs(f1) <= abs(f2):
            candidates.append((x1, x0, x2))

    start = 1
    while start <= n_steps:
        stop = min(start + chunk - 1, n_steps)
        xs = lambda_min + np.arange(start, stop + 1, dtype=float) * scan_step
        fs = eval_batch(xs)
        if not np.all(np.isfinite(fs)):
            bad = xs[~np.isfinite(fs)][0]
            raise ValueError(f"f returned a non-finite value at {bad}")
        grid_max = max(grid_max, float(np.max(np.abs(fs))))
        for x, fx in zip(xs, fs):
            if fx == 0.0:
                return RootResult(root=float(x), f_at_root=0.0)
            if prev_f is not None and prev_f * fx < 0.0:
                bracket = RootBracket(prev_x, float(x), prev_f, float(fx))
                root = bisect_root(eval_one, prev_x, float(x), prev_f, float(fx), tol)
                result = RootResult(
                    root=root, f_at_root=eval_one(root), bracket=bracket
                )
                return _prefer_tangential(
                    result, candidates, eval_one, tol, touch_tol, grid_max
                )
            window3.append((float(x), float(fx)))
            if len(window3) > 3:
                window3.pop(0)
            if len(window3) == 3:
                consider_dip()
            prev_x, prev_f = float(x), float(fx)
        start = stop + 1

    result = _prefer_tangential(None, candidates, eval_one, tol, touch_tol, grid_max)
    if result is None:
        raise NoRootInRange(
            f"no sign change and no tangential candidate on ({lambda_min}, {lambda_max}]",
            lambda_max=lambda_max,
        )
    return result


def _prefer_tangential(sign_result, candidates, eval_one, tol, touch_tol, grid_max):
    """Refine tangential dips that precede the sign-change root, if any."""
    if touch_tol is None:
        touch_tol = 1e-9 * (1.0 + grid_max)
    limit = sign_result.root if sign_result is not None else np.inf
    for x_mid, x_lo, x_hi in candidates:
        if x_mid >= limit:
            break
        res = _refine_min_abs(eval_one, x_lo, x_hi, tol)
        if res is None:
            continue
        x_star, f_star = res
        if abs(f_star) <= touch_tol and x_star < limit:
            return RootResult(root=x_star, f_at_root=f_star, tangential=True)
    return sign_result


def _refine_min_abs(eval_one, lo: float, hi: float, tol: float):
    """Golden-section minimum of |f| on [lo, hi]; deterministic."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = abs(eval_one(c)), abs(eval_one(d))
    for _ in range(200):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = abs(eval_one(c))
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = abs(eval_one(d))
    x_star = 0.5 * (a + b)
    return x_star, eval_one(x_star)


def adaptive_quad(f, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    """Adaptive Simpson integral of f over [a, b] to absolute accuracy tol.

    Each panel is accepted when the nested-rule error estimate
    |S(fine) - S(coarse)|/15 falls below its share of the tolerance;
    otherwise it splits.  Exceeding max_depth raises MaxSubdivisionError.
    """
    if not b > a:
        raise ValueError("need b > a")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    fa, fb = float(f(a)), float(f(b))
    m = 0.5 * (a + b)
    fm = float(f(m))
    whole = simpson(a, b, fa, fm, fb)

    total = 0.0
    # Stack entries: (lo, hi, f_lo, f_mid, f_hi, panel_estimate, panel_tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, f_lo, f_mid, f_hi, est, panel_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_lm = float(f(lm))
        f_rm = float(f(rm))
        left = simpson(lo, mid, f_lo, f_lm, f_mid)
        right = simpson(mid, hi, f_mid, f_rm, f_hi)
        err = (left + right - est) / 15.0
        if abs(err) <= panel_tol:
            total += left + right + err
            continue
        if depth >= max_depth:
            raise MaxSubdivisionError(
                f"panel [{lo}, {hi}] still above tolerance at depth {depth}"
            )
        half_tol = 0.5 * panel_tol
        stack.append((lo, mid, f_lo, f_lm, f_mid, left, half_tol, depth + 1))
        stack.append((mid, hi, f_mid, f_rm, f_hi, right, half_tol, depth + 1))
    return total
