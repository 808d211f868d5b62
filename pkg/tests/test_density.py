"""Symmetry-type table and density evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zerogap import SymmetryGroup, as_group, weight_ac, weight_params
from zerogap.density import sin_ratio

ALL_GROUPS = list(SymmetryGroup)


def test_serialized_names_round_trip():
    for group in ALL_GROUPS:
        assert as_group(group.value) is group
        assert as_group(group) is group


def test_expected_names():
    assert {g.value for g in ALL_GROUPS} == {"U", "Sp", "O", "SO(even)", "SO(odd)"}


def test_as_group_rejects_unknown_name():
    with pytest.raises(ValueError, match="SO\\(even\\)"):
        as_group("SO(EVEN)")
    with pytest.raises(ValueError):
        as_group("GL")


def test_as_group_rejects_non_string():
    with pytest.raises(TypeError):
        as_group(3)


def test_weight_parameter_table():
    table = {
        SymmetryGroup.UNITARY: (0, 0.0),
        SymmetryGroup.SYMPLECTIC: (-1, 0.0),
        SymmetryGroup.ORTHOGONAL: (0, 0.5),
        SymmetryGroup.SO_EVEN: (1, 0.0),
        SymmetryGroup.SO_ODD: (-1, 1.0),
    }
    for group, (gamma, eta) in table.items():
        spec = weight_params(group)
        assert spec.gamma == gamma, group
        assert spec.eta == eta, group


def test_unitary_weight_is_identically_one():
    x = np.linspace(-30.0, 30.0, 1001)
    assert np.all(weight_ac(SymmetryGroup.UNITARY, x) == 1.0)


def test_weight_values_at_origin():
    # sin(2 pi x)/(2 pi x) -> 1, so the density tends to 1 + gamma there.
    assert weight_ac(SymmetryGroup.SO_EVEN, 0.0) == pytest.approx(2.0, abs=1e-15)
    assert weight_ac(SymmetryGroup.SYMPLECTIC, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert weight_ac(SymmetryGroup.SO_ODD, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert weight_ac(SymmetryGroup.ORTHOGONAL, 0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("group", ALL_GROUPS)
@given(x=st.floats(min_value=-80.0, max_value=80.0, allow_nan=False))
def test_weight_is_even(group, x):
    assert weight_ac(group, x) == pytest.approx(weight_ac(group, -x), abs=1e-15)


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_weight_range(group):
    # |sin u / u| <= 1 keeps every density inside [0, 2].
    x = np.linspace(-40.0, 40.0, 4001)
    w = weight_ac(group, x)
    assert np.all(w >= -1e-15)
    assert np.all(w <= 2.0 + 1e-15)


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_weight_tail_approaches_one(group):
    x = np.linspace(5.0, 200.0, 1501)
    w = weight_ac(group, x)
    bound = 1.0 / (2.0 * np.pi * x)
    assert np.all(np.abs(w - 1.0) <= bound + 1e-15)


def test_weight_accepts_scalars_and_arrays():
    scalar = weight_ac(SymmetryGroup.SYMPLECTIC, 0.25)
    arr = weight_ac(SymmetryGroup.SYMPLECTIC, np.array([0.25, 0.5]))
    assert isinstance(scalar, float)
    assert arr.shape == (2,)
    assert arr[0] == pytest.approx(scalar, abs=1e-15)


def test_sin_ratio_matches_direct_formula():
    x = np.array([0.1, 0.5, 1.3, 7.0])
    expected = np.sin(2.0 * np.pi * x) / (2.0 * np.pi * x)
    assert np.allclose(sin_ratio(x), expected, atol=1e-15)


def test_sin_ratio_series_branch_is_continuous():
    # The Taylor branch takes over below 2**-26; values on either side of
    # the cut must agree to machine precision.
    cut = 2.0**-26
    below = sin_ratio(np.nextafter(cut, 0.0))
    above = sin_ratio(np.nextafter(cut, 1.0))
    assert below == pytest.approx(above, abs=1e-14)
    assert sin_ratio(0.0) == 1.0


@given(x=st.floats(min_value=1e-12, max_value=1e-6))
def test_sin_ratio_tiny_arguments(x):
    # 1 - (2 pi x)^2 / 6 to within the next series term, plus an ulp of
    # roundoff: the values sit at 1 - O(1e-12), where one representation
    # rounding already exceeds the fourth-order term.
    expected = 1.0 - (2.0 * np.pi * x) ** 2 / 6.0
    tol = (2.0 * np.pi * x) ** 4 + 1e-15
    assert sin_ratio(x) == pytest.approx(expected, abs=tol)


def test_point_mass_is_not_in_ac_part():
    # The O and SO(odd) densities carry their point mass separately; the
    # absolutely continuous factor at 0 must not include eta.
    w_o = weight_ac(SymmetryGroup.ORTHOGONAL, 0.0)
    w_u = weight_ac(SymmetryGroup.UNITARY, 0.0)
    assert w_o == w_u == 1.0
    assert weight_params(SymmetryGroup.ORTHOGONAL).eta == 0.5
    assert weight_params(SymmetryGroup.SO_ODD).eta == 1.0


def test_weight_matches_manual_formula():
    gamma_table = {
        SymmetryGroup.UNITARY: 0.0,
        SymmetryGroup.SYMPLECTIC: -1.0,
        SymmetryGroup.ORTHOGONAL: 0.0,
        SymmetryGroup.SO_EVEN: 1.0,
        SymmetryGroup.SO_ODD: -1.0,
    }
    x = np.array([0.17, 0.9, 2.4, 11.0])
    for group, gamma in gamma_table.items():
        expected = 1.0 + gamma * np.sin(2.0 * np.pi * x) / (2.0 * np.pi * x)
        assert np.allclose(weight_ac(group, x), expected, atol=1e-15), group


def test_sin_ratio_handles_negative_arguments():
    assert sin_ratio(-0.3) == pytest.approx(sin_ratio(0.3), abs=1e-15)
    assert sin_ratio(-0.0) == 1.0


def test_weight_params_accepts_names():
    assert weight_params("Sp") == weight_params(SymmetryGroup.SYMPLECTIC)
    assert math.isclose(weight_params("SO(odd)").gamma, -1.0)
