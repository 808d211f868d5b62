"""Bandlimited (Paley-Wiener) structure for exponential type pi*delta.

The space of square-integrable entire functions of exponential type at
most pi*delta is sampled on the node lattice n/delta by the shifted sinc
basis e_n(x) = sinc(delta*x - n).  The structure functions

    A(z) = cos(pi delta z),   B(z) = sin(pi delta z),   C = B/A,

carry two zero lattices that drive the solvers:

    A-zeros   xi_n  = sign(n) (|n| - 1/2)/delta,  n in Z \\ {0},
    B-zeros   eta_n = n/delta,                    n in Z.

At every A-zero the coupling coefficient -A'(xi_n)/B(xi_n) equals
pi*delta exactly, which is why the sequence-space quotient in the
determinant solver has an identity denominator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PoleProximityError",
    "PwStructure",
    "validate_delta",
    "sinc",
    "sinc_node",
    "pw_kernel",
    "c_series_partial",
]


class PoleProximityError(ValueError):
    """An evaluation point sits too close to a pole of C = tan(pi delta z)."""

    def __init__(self, message: str, index: int | None = None, pole: float | None = None):
        super().__init__(message)
        self.index = index
        self.pole = pole


def validate_delta(delta: float) -> float:
    """Check delta > 0 and finite; returns it as a float."""
    delta = float(delta)
    if not np.isfinite(delta) or delta <= 0.0:
        raise ValueError(f"delta must be a positive finite real, got {delta}")
    return delta


def sinc(t):
    """sinc(t) = sin(pi t)/(pi t) with sinc(0) = 1.  Vectorized."""
    out = np.sinc(t)
    if np.ndim(out) == 0:
        return float(out)
    return out


def sinc_node(delta: float, n: int, x):
    """Basis function e_n(x) = sinc(delta*x - n).  Vectorized over x."""
    delta = validate_delta(delta)
    return sinc(delta * np.asarray(x, dtype=float) - n)


# Near the diagonal z = conj(w) the kernel ratio is evaluated by its
# Taylor truncation delta*(1 - (pi delta u)^2/6); switch radius matches
# the density module.
_SMALL = 2.0 ** -26


def pw_kernel(delta: float, w, z):
    """Reproducing kernel of the type-pi*delta space under the flat weight.

    K(w, z) = sin(pi delta (z - conj(w))) / (pi (z - conj(w))), with the
    diagonal value K(w, conj(w)) = delta.  Accepts real or complex
    scalars and arrays; returns real output for real input.
    """
    delta = validate_delta(delta)
    w = np.asarray(w)
    z = np.asarray(z)
    real_in = not (np.iscomplexobj(w) or np.iscomplexobj(z))
    u = np.asarray(z - np.conjugate(w))
    small = np.abs(u) < _SMALL
    safe = np.where(small, 1.0, u)
    main = np.sin(np.pi * delta * safe) / (np.pi * safe)
    series = delta * (1.0 - (np.pi * delta * u) ** 2 / 6.0)
    out = np.where(small, series, main)
    if real_in:
        out = np.real(out)
    if out.ndim == 0:
        return float(out) if real_in else complex(out)
    return out


@dataclass(frozen=True)
class PwStructure:
    """Structure functions and zero lattices for one bandwidth."""

    delta: float

    def __post_init__(self):
        object.__setattr__(self, "delta", validate_delta(self.delta))

    # -- structure functions -------------------------------------------

    def a_value(self, z):
        """A(z) = cos(pi delta z); even, real on the real line."""
        return np.cos(np.pi * self.delta * np.asarray(z))

    def b_value(self, z):
        """B(z) = sin(pi delta z); odd, real on the real line."""
        return np.sin(np.pi * self.delta * np.asarray(z))

    def c_value(self, z):
        """C(z) = tan(pi delta z); meromorphic with poles at the A-zeros."""
        return np.tan(np.pi * self.delta * np.asarray(z))

    # -- zero lattices ---------------------------------------------------

    def a_zero(self, n: int) -> float:
        """xi_n = sign(n) (|n| - 1/2)/delta for n in Z without 0."""
        if n == 0:
            raise ValueError("A-zero indices run over nonzero integers")
        return np.sign(n) * (abs(n) - 0.5) / self.delta

    def b_zero(self, n: int) -> float:
        """eta_n = n/delta for n in Z."""
        return n / self.delta

    def a_zeros_in(self, lo: float, hi: float) -> np.ndarray:
        """All A-zeros in [lo, hi], ascending."""
        # xi = (j + 1/2)/delta for j in Z (merging both signs).
        j_lo = int(np.ceil(lo * self.delta - 0.5))
        j_hi = int(np.floor(hi * self.delta - 0.5))
        return (np.arange(j_lo, j_hi + 1) + 0.5) / self.delta

    # -- coupling coefficients --------------------------------------------

    @property
    def c_coeff(self) -> float:
        """-A'(xi_n)/B(xi_n), independent of n; equals pi*delta."""
        return np.pi * self.delta

    @property
    def d_coeff(self) -> float:
        """B'(eta_n)/A(eta_n) analogue at the B-zeros; also pi*delta."""
        return np.pi * self.delta


def c_series_partial(delta: float, z, m_terms: int):
    """Partial sum of the pole expansion of C(z) = tan(pi delta z).

    Sums 2 z / (c_m (xi_m^2 - z^2)) over m = 1..m_terms with c_m =
    pi*delta and xi_m = (m - 1/2)/delta.  The tail decays like 1/M, so
    m_terms around 1e5 gives roughly 1e-5 absolute accuracy at moderate
    z.  Raises PoleProximityError if z is within 1e-9 of +-xi_m for
    some m <= m_terms.
    """
    delta = validate_delta(delta)
    m_terms = int(m_terms)
    if m_terms < 1:
        raise ValueError("m_terms must be >= 1")
    z = complex(z)
    xi = (np.arange(1, m_terms + 1) - 0.5) / delta
    near = np.minimum(np.abs(z - xi), np.abs(z + xi))
    hit = np.argmin(near)
    if near[hit] < 1e-9:
        raise PoleProximityError(
            f"z = {z} is within 1e-9 of the pole at +-{xi[hit]}",
            index=int(hit + 1),
            pole=float(xi[hit]),
        )
    terms = 2.0 * z / ((np.pi * delta) * (xi * xi - z * z))
    # Small terms first: the addends decay like 1/m^2, so summing the
    # reversed array keeps the roundoff of the large head terms out of
    # the accumulating tail.
    total = np.sum(terms[::-1])
    if z.imag == 0.0:
        return float(total.real)
    return complex(total)
