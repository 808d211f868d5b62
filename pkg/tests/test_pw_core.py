"""Bandlimited structure functions, sampling kernel, pole expansion."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerogap import PoleProximityError, PwStructure, c_series_partial, pw_kernel, sinc, sinc_node
from zerogap.pw_core import validate_delta

DELTAS = st.sampled_from([0.5, 1.0, 4.0 / 3.0, 1.5, 2.0])


def test_sinc_values():
    assert sinc(0.0) == 1.0
    assert sinc(1.0) == pytest.approx(0.0, abs=1e-16)
    assert sinc(0.5) == pytest.approx(2.0 / np.pi, abs=1e-15)
    assert isinstance(sinc(0.3), float)
    assert sinc(np.array([0.0, 2.0])).shape == (2,)


def test_sinc_node_hits_its_node():
    # e_n(n/delta) = 1 and e_n vanishes at every other lattice point.
    for delta in (1.0, 1.5, 2.0):
        for n in (-3, 0, 2):
            assert sinc_node(delta, n, n / delta) == pytest.approx(1.0, abs=1e-15)
            for m in (-2, 1, 5):
                if m != n:
                    assert sinc_node(delta, n, m / delta) == pytest.approx(0.0, abs=1e-15)


def test_validate_delta_rejects_bad_values():
    for bad in (0.0, -1.0, np.nan, np.inf):
        with pytest.raises(ValueError):
            validate_delta(bad)
    assert validate_delta(2) == 2.0


def test_kernel_diagonal_value():
    for delta in (0.7, 1.0, 2.0):
        assert pw_kernel(delta, 0.3, 0.3) == pytest.approx(delta, abs=1e-12)


def test_kernel_node_orthogonality():
    # K(m/delta, n/delta) = delta * kron(m, n): the sampling lattice is
    # orthogonal under the flat weight.
    delta = 1.5
    for m in range(-3, 4):
        for n in range(-3, 4):
            got = pw_kernel(delta, m / delta, n / delta)
            want = delta if m == n else 0.0
            assert got == pytest.approx(want, abs=1e-12), (m, n)


@given(x=st.floats(min_value=-20.0, max_value=20.0), delta=DELTAS)
def test_kernel_section_through_origin(x, delta):
    # K(0, x) = sin(pi delta x)/(pi x), the classical sinc section.
    want = delta * sinc(delta * x)
    assert pw_kernel(delta, 0.0, x) == pytest.approx(want, abs=1e-12)


def test_kernel_series_branch_is_continuous():
    delta = 2.0
    cut = 2.0**-26
    w = 0.375
    below = pw_kernel(delta, w, w + np.nextafter(cut, 0.0))
    above = pw_kernel(delta, w, w + np.nextafter(cut, 1.0))
    assert below == pytest.approx(above, abs=1e-12)


def test_kernel_output_types():
    assert isinstance(pw_kernel(1.0, 0.1, 0.2), float)
    assert isinstance(pw_kernel(1.0, 0.1 + 0.0j, 0.2), complex)
    out = pw_kernel(1.0, np.array([0.1, 0.2]), 0.3)
    assert out.dtype == np.float64


@given(
    x=st.floats(min_value=-10.0, max_value=10.0),
    y=st.floats(min_value=-10.0, max_value=10.0),
    delta=DELTAS,
)
def test_sine_subtraction_identity(x, y, delta):
    # sin(a - b) = sin a cos b - cos a sin b at a = pi delta x, b = pi delta y:
    # the identity underlying the off-diagonal kernel algebra.
    s = PwStructure(delta)
    lhs = np.sin(np.pi * delta * (x - y))
    rhs = s.b_value(x) * s.a_value(y) - s.a_value(x) * s.b_value(y)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_structure_function_consistency_random_complex(rng):
    # pi (z - conj w) K(w, z) = B(z) A(conj w) - A(z) B(conj w) for the
    # flat-weight kernel; checked at 100 random complex pairs.
    delta = 1.5
    s = PwStructure(delta)
    for _ in range(100):
        w = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        z = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        if abs(z - np.conjugate(w)) < 1e-6:
            continue
        lhs = np.pi * (z - np.conjugate(w)) * pw_kernel(delta, w, z)
        wc = np.conjugate(w)
        rhs = s.b_value(z) * s.a_value(wc) - s.a_value(z) * s.b_value(wc)
        scale = 1.0 + abs(lhs)
        assert abs(lhs - rhs) <= 1e-10 * scale


def test_a_zero_lattice():
    s = PwStructure(2.0)
    assert s.a_zero(1) == pytest.approx(0.25)
    assert s.a_zero(-1) == pytest.approx(-0.25)
    assert s.a_zero(3) == pytest.approx(1.25)
    with pytest.raises(ValueError):
        s.a_zero(0)
    # A vanishes there to machine precision.
    for n in (-4, -1, 1, 2, 7):
        assert abs(s.a_value(s.a_zero(n))) < 1e-12


def test_b_zero_lattice():
    s = PwStructure(1.5)
    for n in (-3, 0, 2):
        assert s.b_zero(n) == pytest.approx(n / 1.5)
        assert abs(s.b_value(s.b_zero(n))) < 1e-12


def test_a_zeros_in_interval():
    s = PwStructure(2.0)
    got = s.a_zeros_in(0.0, 1.0)
    assert np.allclose(got, [0.25, 0.75])
    got = s.a_zeros_in(-0.3, 0.3)
    assert np.allclose(got, [-0.25, 0.25])
    # Endpoints are inclusive.
    got = s.a_zeros_in(0.25, 0.75)
    assert np.allclose(got, [0.25, 0.75])


def test_coupling_coefficients_equal_pi_delta():
    for delta in (1.0, 4.0 / 3.0, 2.0):
        s = PwStructure(delta)
        assert s.c_coeff == pytest.approx(np.pi * delta, rel=1e-15)
        assert s.d_coeff == pytest.approx(np.pi * delta, rel=1e-15)
        # Finite-difference check of -A'(xi_1)/B(xi_1).
        xi = s.a_zero(1)
        h = 1e-6
        deriv = (s.a_value(xi + h) - s.a_value(xi - h)) / (2.0 * h)
        assert -deriv / s.b_value(xi) == pytest.approx(np.pi * delta, rel=1e-9)


def test_c_series_at_zero():
    assert c_series_partial(1.0, 0.0, 100) == 0.0


def test_c_series_converges_to_tangent():
    # delta = 1, z = 1/4: tan(pi/4) = 1.  The pole expansion converges
    # like 1/M, so 1e5 terms land within 1e-4.
    got = c_series_partial(1.0, 0.25, 100_000)
    assert got == pytest.approx(1.0, abs=1e-4)


def test_c_series_second_point():
    got = c_series_partial(2.0, 0.1, 100_000)
    assert got == pytest.approx(np.tan(0.2 * np.pi), abs=1e-4)


def test_c_series_error_shrinks_with_more_terms():
    target = np.tan(np.pi * 0.3)
    err_small = abs(c_series_partial(1.0, 0.3, 2_000) - target)
    err_large = abs(c_series_partial(1.0, 0.3, 8_000) - target)
    # 1/M tail: quadrupling the terms should cut the error by ~4.
    assert err_large < err_small / 3.0


def test_c_series_pole_proximity():
    # delta = 1 puts the first pole at xi_1 = 0.5.
    with pytest.raises(PoleProximityError) as excinfo:
        c_series_partial(1.0, 0.5 + 1e-10, 10)
    assert excinfo.value.index == 1
    assert excinfo.value.pole == pytest.approx(0.5)
    # Negative side of the same pole.
    with pytest.raises(PoleProximityError):
        c_series_partial(1.0, -0.5, 10)


def test_c_series_rejects_bad_term_count():
    with pytest.raises(ValueError):
        c_series_partial(1.0, 0.1, 0)


def test_c_series_complex_input():
    out = c_series_partial(1.0, 0.2 + 0.1j, 50_000)
    assert isinstance(out, complex)
    assert out == pytest.approx(np.tan(np.pi * (0.2 + 0.1j)), abs=1e-4)


def test_c_series_is_odd():
    a = c_series_partial(1.5, 0.21, 5_000)
    b = c_series_partial(1.5, -0.21, 5_000)
    assert a == pytest.approx(-b, abs=1e-15)


@settings(max_examples=25)
@given(delta=DELTAS, z=st.floats(min_value=-0.2, max_value=0.2))
def test_c_series_matches_c_value_near_origin(delta, z):
    # Near the origin the expansion converges fast and the tangent has
    # no poles; modest M suffices for 1e-3.
    s = PwStructure(delta)
    got = c_series_partial(delta, z, 20_000)
    assert got == pytest.approx(float(s.c_value(z)), abs=1e-3)
