"""Determinant-route solver for general k, and the sequence-space oracle.

For the bandlimited structure with A = cos(pi delta z), B = sin(pi delta z),
C = B/A, the distance scale lambda0 = aValue^{1/(2k)} is the first
positive zero of

    A(alpha + lambda) A(alpha - lambda) det V(lambda) = 0,

where V(lambda) is the k x k matrix with entries

    V_{lj} = sum_{r=0}^{2k-1} omega^{-r(l+j-1)} C(alpha + omega^r lambda),
    omega = e^{i pi/k}.

The product extends continuously across the tan poles: expanding det V
by multilinearity (Cauchy-Binet against the rank-one structure of the
r-sum) writes it as a sum over k-subsets S of {0, .., 2k-1},

    det V = sum_S (prod_{r in S} C_r) (prod_{r in S} omega^{-r}) VdM(S)^2,

with VdM(S) the Vandermonde determinant of the points omega^{-r}.  Only
r = 0 and r = k produce real arguments, hence poles on the real line;
multiplying by the A-factors replaces A(alpha+lambda) C(alpha+lambda)
by B(alpha+lambda) in the terms containing r = 0 (likewise r = k with
alpha - lambda), leaving a pole-free expression that is evaluated
directly.  For k = 1 the two terms collapse to
B(alpha+lambda)A(alpha-lambda) - A(alpha+lambda)B(alpha-lambda)
= sin(2 pi delta lambda), whose first zero 1/(2 delta) is independent
of alpha.

This route is instantiated only for the flat (unitary) weight, where
the structure functions are explicit; general-k values for the other
weights come from the variational solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .numerics import first_positive_zero, nullspace_basis
from .pw_core import PoleProximityError, PwStructure, validate_delta
from .variational import ExtremalSolution

__all__ = [
    "DetProblem",
    "VMatrix",
    "PoleStraddleError",
    "v_matrix",
    "det_extension",
    "detroot_value",
    "sequence_oracle",
    "partial_fraction_check",
    "midpoint_value",
]


class PoleStraddleError(RuntimeError):
    """A determinant sign change could not be separated from a tan pole.

    Part of the scanning contract.  The shipped evaluator works on the
    pole-free continuous extension (see det_extension), which cannot
    straddle a pole, so this is never raised by the default path; it is
    kept for implementations that scan det V directly between poles.
    """


@dataclass(frozen=True)
class DetProblem:
    """Determinant problem (delta, alpha, k) with omega = e^{i pi/k}."""

    delta: float
    alpha: float
    k: int

    def __post_init__(self):
        object.__setattr__(self, "delta", validate_delta(self.delta))
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.k != int(self.k) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def omega(self) -> complex:
        return np.exp(1j * np.pi / self.k)

    def structure(self) -> PwStructure:
        return PwStructure(self.delta)


@dataclass(frozen=True)
class VMatrix:
    """V(lambda) after the imaginary residue is checked and discarded."""

    lambda_arg: float
    entries: np.ndarray = field(repr=False)


def _rotated_args(p: DetProblem, lam: float) -> np.ndarray:
    r = np.arange(2 * p.k)
    return p.alpha + p.omega ** r * lam


def v_matrix(p: DetProblem, lam: float) -> VMatrix:
    """Entries V_{lj} = sum_r omega^{-r(l+j-1)} C(alpha + omega^r lambda).

    Raises PoleProximityError when any rotated argument comes within
    1e-8 of a pole of C = tan(pi delta .); the r = 0 and r = k arguments
    are the only real ones, and the entry imaginary parts must cancel to
    1e-9 relative (conjugate pairing), which is asserted before the real
    parts are returned.
    """
    lam = float(lam)
    args = _rotated_args(p, lam)
    # Nearest tan pole: the A-zero lattice (j + 1/2)/delta.
    nearest = (np.round(args.real * p.delta - 0.5) + 0.5) / p.delta
    dist = np.abs(args - nearest)
    if np.any(dist < 1e-8):
        r_bad = int(np.argmin(dist))
        raise PoleProximityError(
            f"rotated argument r={r_bad} within 1e-8 of the pole at {nearest[r_bad]}",
            index=r_bad,
            pole=float(nearest[r_bad]),
        )
    c_vals = np.tan(np.pi * p.delta * args)
    l_plus_j = np.arange(1, p.k + 1)[:, None] + np.arange(1, p.k + 1)[None, :] - 1
    phases = p.omega ** (-np.arange(2 * p.k)[:, None, None] * l_plus_j[None, :, :])
    entries = np.sum(phases * c_vals[:, None, None], axis=0)
    scale = 1.0 + float(np.max(np.abs(entries)))
    worst = float(np.max(np.abs(entries.imag)))
    if worst > 1e-9 * scale:
        raise ArithmeticError(
            f"imaginary residue {worst:.3e} exceeds tolerance at lambda={lam}"
        )
    return VMatrix(lambda_arg=lam, entries=np.ascontiguousarray(entries.real))


@lru_cache(maxsize=None)
def _subset_data(k: int):
    """Per-subset coefficients of the pole-free determinant expansion.

    Returns tuples (subset, coefficient) where coefficient =
    (prod_{r in S} omega^{-r}) * VdM(S)^2 depends only on k.
    """
    omega = np.exp(1j * np.pi / k)
    data = []
    for subset in itertools.combinations(range(2 * k), k):
        z = omega ** (-np.asarray(subset))
        vdm = np.prod([z[j] - z[i] for i in range(k) for j in range(i + 1, k)]) if k > 1 else 1.0
        coef = np.prod(z) * vdm ** 2
        data.append((subset, complex(coef)))
    return tuple(data)


def det_extension(p: DetProblem, lam) -> np.ndarray:
    """Continuous extension of A(alpha+lambda) A(alpha-lambda) det V(lambda).

    Vectorized over lambda.  Pole-free: in each expansion term the real
    factors C(alpha +- lambda) appear at most once and are absorbed into
    B(alpha +- lambda) by the A-prefactors.  Returns real values; the
    imaginary residue of the summed terms is asserted below 1e-9 of the
    term magnitude scale.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    k = p.k
    pw = p.structure()
    omega = p.omega

    a_plus = pw.a_value(p.alpha + lam)
    a_minus = pw.a_value(p.alpha - lam)
    b_plus = pw.b_value(p.alpha + lam)
    b_minus = pw.b_value(p.alpha - lam)

    # C at the strictly complex rotations (r != 0, k), shape (2k, len(lam)).
    c_rot = np.empty((2 * k, lam.size), dtype=complex)
    for r in range(2 * k):
        if r in (0, k):
            continue
        c_rot[r] = np.tan(np.pi * p.delta * (p.alpha + omega ** r * lam))

    total = np.zeros(lam.size, dtype=complex)
    magnitude = np.zeros(lam.size, dtype=float)
    for subset, coef in _subset_data(k):
        term = np.full(lam.size, coef, dtype=complex)
        term *= b_plus if 0 in subset else a_plus
        term *= b_minus if k in subset else a_minus
        for r in subset:
            if r not in (0, k):
                term *= c_rot[r]
        total += term
        magnitude += np.abs(term)
    worst = float(np.max(np.abs(total.imag) / (1.0 + magnitude)))
    if worst > 1e-9:
        raise ArithmeticError(
            f"imaginary residue {worst:.3e} in the determinant extension"
        )
    return total.real


def _noise_floor(k: int, delta: float) -> float:
    """Scan floor below which the extension is roundoff-dominated.

    det V vanishes to order k^2 at lambda = 0, so the subset expansion
    cancels its O(1) terms down to (pi delta lambda)^{k^2}; the sign of
    the sum is meaningless once that factor drops under machine noise.
    The first genuine root sits at the lattice scale 1/(2 delta), far
    above this floor for the supported k.
    """
    if k == 1:
        return 0.0
    return 2.0 * (1e-12) ** (1.0 / k ** 2) / (np.pi * delta)


def detroot_value(
    p: DetProblem,
    scan_step: float | None = None,
    lambda_max: float | None = None,
    tol: float = 1e-10,
) -> ExtremalSolution:
    """First positive zero of the determinant equation; aValue = lambda0^{2k}.

    Candidate roots of both kinds (A-factor lattice zeros and sign
    changes of det V between poles) are subsumed by scanning the
    continuous extension: a lattice zero solves the equation exactly
    when the extension itself vanishes there, and the extension has no
    poles to straddle.
    """
    if scan_step is None:
        scan_step = min(1.0 / (8.0 * p.delta), 0.01)
    if lambda_max is None:
        lambda_max = max(4.0 / p.delta, 2.0 * abs(p.alpha) + 4.0 / p.delta)

    def section(lam):
        return det_extension(p, lam)

    root = first_positive_zero(
        section,
        scan_step,
        lambda_max,
        tol,
        vectorized=True,
        lambda_min=_noise_floor(p.k, p.delta),
    )
    lambda0 = root.root
    return ExtremalSolution(
        lambda0=lambda0,
        a_value=lambda0 ** (2 * p.k),
        route="debranges",
        k=p.k,
        coeffs=None,
        diagnostics={
            "residual": abs(root.f_at_root),
            "tangential": root.tangential,
            "scan_step": scan_step,
            "lambda_max": lambda_max,
        },
    )


def sequence_oracle(delta: float, alpha: float, k: int, n_terms: int) -> float:
    """Sequence-space value of the constant over A-zero indices |n| <= n_terms.

    Minimizes sum c_n a_n^2 (xi_n - alpha)^{2k} / sum c_n a_n^2 over
    real sequences subject to sum a_n (xi_n - alpha)^{k-l} = 0 for
    l = 1..k.  The coupling coefficients c_n = pi delta are constant, so
    they cancel: the quotient is a diagonal form against the identity on
    the constraint kernel.  Values decrease monotonically in n_terms
    (nested feasible sets) toward the sharp constant.
    """
    delta = validate_delta(delta)
    if k < 1 or k != int(k):
        raise ValueError("k must be a positive integer")
    if n_terms <= k:
        raise ValueError("need n_terms > k")
    idx = np.concatenate([np.arange(-n_terms, 0), np.arange(1, n_terms + 1)])
    xi = np.sign(idx) * (np.abs(idx) - 0.5) / delta
    shifted = xi - alpha
    constraints = np.vstack([shifted ** (k - ell) for ell in range(1, k + 1)])
    basis = nullspace_basis(constraints)
    # The quotient is |diag(shifted^k) a|^2 / |a|^2 on the constraint
    # kernel, so its minimum is a squared smallest singular value; the
    # projected-pencil form loses the bottom of the spectrum at large
    # n_terms once k >= 2 (spread ~ n_terms^{4k} vs ~ n_terms^k here).
    mapped = (shifted ** k)[:, None] * basis
    svals = scipy.linalg.svd(mapped, compute_uv=False, check_finite=False)
    return float(svals[-1] ** 2)


def partial_fraction_check(k: int, s: int, x: complex, y: complex) -> float:
    """Residual |LHS - RHS| of the roots-of-unity partial fraction identity.

        2k x^{2k-s-1} y^s / (x^{2k} - y^{2k}) = sum_r omega^{-r s} / (x - omega^r y)

    for 0 <= s <= 2k - 1 and x^{2k} != y^{2k}.  Returns the absolute
    residual; used as a library self-test.
    """
    if not 0 <= s <= 2 * k - 1:
        raise ValueError(f"s must lie in [0, {2 * k - 1}]")
    x = complex(x)
    y = complex(y)
    omega = np.exp(1j * np.pi / k)
    lhs = 2 * k * x ** (2 * k - s - 1) * y ** s / (x ** (2 * k) - y ** (2 * k))
    r = np.arange(2 * k)
    rhs = np.sum(omega ** (-r * s) / (x - omega ** r * y))
    return float(abs(lhs - rhs))


def midpoint_value(delta: float, i: int) -> float:
    """lambda0 at a midpoint center alpha = (xi_i + xi_{i+1})/2 for k = 1.

    Equals half the lattice gap, (xi_{i+1} - xi_i)/2 = 1/(2 delta),
    exactly; the phase of the structure is monotone, so no smaller root
    exists.
    """
    pw = PwStructure(delta)
    if i < 1:
        raise ValueError("i must be a positive index")
    return 0.5 * (pw.a_zero(i + 1) - pw.a_zero(i))
