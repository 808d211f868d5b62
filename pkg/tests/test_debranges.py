"""Determinant route: rotated structure matrices and the pole-free extension."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerogap import (
    DetProblem,
    PoleProximityError,
    PoleStraddleError,
    det_extension,
    detroot_value,
    midpoint_value,
    partial_fraction_check,
    sequence_oracle,
    v_matrix,
)
from zerogap.debranges import _noise_floor


def test_problem_validation():
    with pytest.raises(ValueError):
        DetProblem(0.0, 0.0, 1)
    with pytest.raises(ValueError, match="k must be"):
        DetProblem(1.0, 0.0, 0)
    with pytest.raises(ValueError, match="k must be"):
        DetProblem(1.0, 0.0, 1.5)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_omega_is_primitive_2k_root(k):
    omega = DetProblem(1.0, 0.0, k).omega
    assert abs(omega ** (2 * k) - 1.0) <= 1e-14
    assert abs(omega**k + 1.0) <= 1e-14
    for r in range(1, 2 * k):
        assert abs(omega**r - 1.0) > 1e-3


# ----------------------------------------------------------------------
# V matrix.
# ----------------------------------------------------------------------


def test_v_matrix_k1_two_term_form():
    # k = 1 has omega = -1: V is the scalar C(alpha+lambda) - C(alpha-lambda).
    p = DetProblem(1.0, 0.3, 1)
    lam = 0.11
    got = v_matrix(p, lam)
    want = np.tan(np.pi * (0.3 + lam)) - np.tan(np.pi * (0.3 - lam))
    assert got.entries.shape == (1, 1)
    assert got.entries[0, 0] == pytest.approx(want, rel=1e-12)
    assert got.lambda_arg == lam


@pytest.mark.parametrize("k", [2, 3])
def test_v_matrix_is_hankel(k):
    # Entries depend on l + j only, so every anti-diagonal is constant.
    p = DetProblem(1.5, 0.2, k)
    entries = v_matrix(p, 0.07).entries
    scale = 1.0 + np.max(np.abs(entries))
    for i in range(k):
        for j in range(k):
            for i2 in range(k):
                j2 = i + j - i2
                if 0 <= j2 < k:
                    assert abs(entries[i, j] - entries[i2, j2]) <= 1e-12 * scale


def test_v_matrix_entries_are_real_symmetric_in_sign():
    # The r and 2k - r rotations are conjugate, so the assembled entries
    # are real; the dataclass stores them as floats.
    p = DetProblem(1.0, 0.4, 2)
    entries = v_matrix(p, 0.13).entries
    assert entries.dtype == np.float64


def test_v_matrix_pole_proximity():
    p = DetProblem(1.0, 0.0, 1)
    with pytest.raises(PoleProximityError) as excinfo:
        v_matrix(p, 0.5)
    assert excinfo.value.index == 0
    assert excinfo.value.pole == pytest.approx(0.5)
    # Slightly off the pole evaluates fine (and is huge).
    assert abs(v_matrix(p, 0.5 + 1e-4).entries[0, 0]) > 1e3


# ----------------------------------------------------------------------
# Pole-free determinant extension.
# ----------------------------------------------------------------------


@settings(max_examples=80)
@given(
    delta=st.sampled_from([0.8, 1.0, 4.0 / 3.0, 2.0]),
    alpha=st.floats(min_value=-4.0, max_value=4.0),
    lam=st.floats(min_value=0.0, max_value=4.0),
)
def test_extension_k1_is_sine(delta, alpha, lam):
    # For k = 1 the extension collapses to sin(2 pi delta lambda),
    # independent of alpha, with no poles anywhere.
    p = DetProblem(delta, alpha, 1)
    got = det_extension(p, lam)[0]
    want = np.sin(2.0 * np.pi * delta * lam)
    assert got == pytest.approx(want, abs=1e-10)


def test_extension_vectorized_matches_scalar():
    p = DetProblem(1.0, 0.3, 2)
    lams = np.array([0.05, 0.11, 0.23, 0.37])
    batch = det_extension(p, lams)
    singles = [det_extension(p, lam)[0] for lam in lams]
    assert np.allclose(batch, singles, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("k", [2, 3])
def test_extension_matches_direct_determinant(k):
    # Away from the tan poles the extension must equal
    # A(alpha+lambda) A(alpha-lambda) det V(lambda) computed literally.
    p = DetProblem(1.0, 0.3, k)
    pw = p.structure()
    for lam in (0.11, 0.23, 0.37):
        direct = (
            float(pw.a_value(p.alpha + lam))
            * float(pw.a_value(p.alpha - lam))
            * float(np.linalg.det(v_matrix(p, lam).entries))
        )
        got = det_extension(p, lam)[0]
        assert got == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_extension_continuous_across_pole():
    # v_matrix blows up as alpha + lambda crosses an A-zero; the
    # extension passes through smoothly (finite, small increments).
    p = DetProblem(1.0, 0.0, 2)
    lams = np.linspace(0.499, 0.501, 41)  # pole of tan at 0.5
    vals = det_extension(p, lams)
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(np.diff(vals))) <= 1e-2


# ----------------------------------------------------------------------
# Root extraction.
# ----------------------------------------------------------------------


@pytest.mark.parametrize("delta", [1.0, 2.0])
def test_detroot_k1_independent_of_alpha(delta):
    # lambda0 = 1/(2 delta) across the whole alpha grid [0, 3].
    want = 1.0 / (2.0 * delta)
    for alpha in np.arange(0.0, 3.0 + 1e-12, 0.05):
        sol = detroot_value(DetProblem(delta, float(alpha), 1))
        assert sol.lambda0 == pytest.approx(want, abs=1e-9), alpha
        assert sol.a_value == pytest.approx(want * want, rel=1e-8)
        assert sol.route == "debranges"


def test_detroot_k2_against_sequence_oracle():
    p = DetProblem(1.0, 0.3, 2)
    det = detroot_value(p)
    seq = sequence_oracle(1.0, 0.3, 2, 800)
    assert seq == pytest.approx(det.a_value, rel=1e-3)
    # The sequence value is a restricted minimum, hence an upper bound.
    assert seq >= det.a_value - 1e-6


def test_detroot_k3_against_sequence_oracle():
    # Compared on the lambda0 scale: the 2k-th power spreads relative
    # error by 2k, so the distance scale is the stable currency.
    p = DetProblem(2.0, 0.2, 3)
    det = detroot_value(p)
    seq = sequence_oracle(2.0, 0.2, 3, 400)
    assert seq ** (1.0 / 6.0) == pytest.approx(det.lambda0, rel=1e-3)


def test_detroot_diagnostics():
    sol = detroot_value(DetProblem(1.0, 0.0, 1))
    assert sol.diagnostics["residual"] <= 1e-8
    assert sol.diagnostics["scan_step"] == pytest.approx(0.01)
    assert sol.diagnostics["lambda_max"] == pytest.approx(4.0)
    assert sol.k == 1


def test_noise_floor_scales():
    assert _noise_floor(1, 1.0) == 0.0
    floor2 = _noise_floor(2, 1.0)
    assert 0.0 < floor2 < 0.01
    # The floor must sit well below the first genuine root scale.
    assert _noise_floor(3, 2.0) < 1.0 / (4.0 * 2.0)


# ----------------------------------------------------------------------
# Sequence-space oracle.
# ----------------------------------------------------------------------


def test_sequence_oracle_k1_example():
    got = sequence_oracle(1.0, 0.0, 1, 200)
    assert got == pytest.approx(0.25, rel=1e-3)


def test_sequence_oracle_monotone_in_terms():
    values = [sequence_oracle(1.0, 0.3, 2, n) for n in (10, 40, 160)]
    assert values[0] >= values[1] >= values[2]


def test_sequence_oracle_validation():
    with pytest.raises(ValueError, match="n_terms"):
        sequence_oracle(1.0, 0.0, 2, 2)
    with pytest.raises(ValueError, match="k must be"):
        sequence_oracle(1.0, 0.0, 0, 10)


def test_sequence_oracle_error_shrinks():
    target = detroot_value(DetProblem(1.0, 0.3, 2)).a_value
    errs = [abs(sequence_oracle(1.0, 0.3, 2, n) - target) for n in (100, 200, 400)]
    assert errs[1] <= errs[0] / 1.6
    assert errs[2] <= errs[1] / 1.6


# ----------------------------------------------------------------------
# Identities.
# ----------------------------------------------------------------------


def test_partial_fraction_exact_small_case():
    # k = 1, s = 0, x = 3, y = 1: both sides equal 3/4.
    assert partial_fraction_check(1, 0, 3.0, 1.0) <= 1e-14


def test_partial_fraction_k2_example():
    # k = 2, s = 1, x = 2, y = 1: LHS = 16/15.
    assert partial_fraction_check(2, 1, 2.0, 1.0) <= 1e-12


def test_partial_fraction_random_pairs(rng):
    checked = 0
    while checked < 100:
        k = int(rng.integers(1, 5))
        s = int(rng.integers(0, 2 * k))
        x = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        y = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        denom = abs(x ** (2 * k) - y ** (2 * k))
        if denom < 1e-2 or abs(x) < 0.3 or abs(y) < 0.3:
            continue
        omega = np.exp(1j * np.pi / k)
        if min(abs(x - omega**r * y) for r in range(2 * k)) < 1e-2:
            continue
        lhs_scale = abs(2 * k * x ** (2 * k - s - 1) * y**s) / denom
        assert partial_fraction_check(k, s, x, y) <= 1e-10 * (1.0 + lhs_scale)
        checked += 1


def test_partial_fraction_validates_s():
    with pytest.raises(ValueError, match="s must"):
        partial_fraction_check(2, 4, 2.0, 1.0)
    with pytest.raises(ValueError):
        partial_fraction_check(2, -1, 2.0, 1.0)


def test_midpoint_value():
    assert midpoint_value(1.0, 1) == pytest.approx(0.5, abs=1e-10)
    assert midpoint_value(2.0, 3) == pytest.approx(0.25, abs=1e-10)
    with pytest.raises(ValueError):
        midpoint_value(1.0, 0)


def test_midpoint_agrees_with_detroot():
    # Centering at a lattice midpoint leaves the k = 1 root at half the
    # gap, which detroot reproduces since its k = 1 section is alpha-free.
    pw_mid = 1.0  # (xi_1 + xi_2)/2 at delta = 1
    sol = detroot_value(DetProblem(1.0, pw_mid, 1))
    assert sol.lambda0 == pytest.approx(midpoint_value(1.0, 1), abs=1e-9)


def test_pole_straddle_error_is_part_of_the_contract():
    assert issubclass(PoleStraddleError, RuntimeError)
    # The pole-free evaluator cannot straddle a pole, so nothing in the
    # default path raises it; the name stays importable for scanners
    # that work on det V directly.
