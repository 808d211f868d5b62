"""Symmetry-type densities in the compact (gamma, eta) parametrization.

Each of the five classical symmetry types carries a density

    W(x) = 1 + gamma * sin(2 pi x)/(2 pi x) + eta * delta_0(x),

where delta_0 is a unit point mass at the origin.  Only the pair
(gamma, eta) differs between types, so the pair is the whole encoding:

    U         (0, 0)
    Sp        (-1, 0)
    O         (0, 1/2)
    SO(even)  (+1, 0)
    SO(odd)   (-1, 1)

The point mass is kept as data (eta) and never folded into pointwise
density values; it only ever enters quadratic forms, and the Gram
assembly handles it separately.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SymmetryGroup",
    "WeightSpec",
    "as_group",
    "weight_params",
    "weight_ac",
    "sin_ratio",
]


class SymmetryGroup(enum.Enum):
    """The five symmetry types.  Enum values are the serialized names."""

    UNITARY = "U"
    SYMPLECTIC = "Sp"
    ORTHOGONAL = "O"
    SO_EVEN = "SO(even)"
    SO_ODD = "SO(odd)"

    def __str__(self) -> str:
        return self.value


def as_group(group: SymmetryGroup | str) -> SymmetryGroup:
    """Coerce a name to a SymmetryGroup.

    Accepts the five serialized names "U", "Sp", "O", "SO(even)",
    "SO(odd)" (exact spelling) or an existing SymmetryGroup value.
    """
    if isinstance(group, SymmetryGroup):
        return group
    if isinstance(group, str):
        try:
            return SymmetryGroup(group)
        except ValueError:
            valid = ", ".join(repr(m.value) for m in SymmetryGroup)
            raise ValueError(
                f"unknown symmetry group {group!r}; expected one of {valid}"
            ) from None
    raise TypeError(f"expected SymmetryGroup or str, got {type(group).__name__}")


@dataclass(frozen=True)
class WeightSpec:
    """Coefficients of one density: W = 1 + gamma*sin(2 pi x)/(2 pi x) + eta*delta_0."""

    gamma: int    # sine-kernel coefficient, in {-1, 0, +1}
    eta: float    # point mass at the origin, in {0, 1/2, 1}


_WEIGHT_TABLE = {
    SymmetryGroup.UNITARY: WeightSpec(0, 0.0),
    SymmetryGroup.SYMPLECTIC: WeightSpec(-1, 0.0),
    SymmetryGroup.ORTHOGONAL: WeightSpec(0, 0.5),
    SymmetryGroup.SO_EVEN: WeightSpec(+1, 0.0),
    SymmetryGroup.SO_ODD: WeightSpec(-1, 1.0),
}


def weight_params(group: SymmetryGroup | str) -> WeightSpec:
    """Return the (gamma, eta) pair of the group's density."""
    return _WEIGHT_TABLE[as_group(group)]


# Below this threshold sin(2 pi x)/(2 pi x) is evaluated by its quadratic
# Taylor truncation; the switch avoids 0/0 at the removable singularity.
_SMALL = 2.0 ** -26


def sin_ratio(x):
    """sin(2 pi x)/(2 pi x), with value 1 at x = 0.

    Accepts scalars or arrays; the singularity branch returns
    1 - (2 pi x)^2 / 6, exact to machine precision for |x| < 2^-26.
    """
    x = np.asarray(x, dtype=float)
    t = 2.0 * np.pi * x
    small = np.abs(x) < _SMALL
    safe = np.where(small, 1.0, t)
    out = np.where(small, 1.0 - t * t / 6.0, np.sin(safe) / safe)
    if out.ndim == 0:
        return float(out)
    return out


def weight_ac(group: SymmetryGroup | str, x):
    """Absolutely continuous part of the density: 1 + gamma*sin(2 pi x)/(2 pi x).

    The eta*delta_0 term is excluded by construction; see the module
    docstring.  Vectorized over x.
    """
    spec = weight_params(group)
    if spec.gamma == 0:
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        return float(out) if out.ndim == 0 else out
    return 1.0 + spec.gamma * sin_ratio(x)
