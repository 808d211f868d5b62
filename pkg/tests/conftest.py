"""Shared fixtures and the acceptance-criteria summary hook.

The acceptance tests register one CriterionResult each; the collected
lines are printed as a block at the end of the run so the pass/fail
status of every criterion is visible in one place regardless of test
ordering.
"""

import numpy as np
import pytest

_criterion_lines = {}


@pytest.fixture
def criterion_log():
    """Callable that records a CriterionResult for the final summary."""

    def record(result):
        _criterion_lines[result.number] = result.line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criterion_lines):
        terminalreporter.write_line(_criterion_lines[number])


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


# ----------------------------------------------------------------------
# Independent quadrature oracle for the sin-weight Gram entries.
#
# S_mn is a double integral of e^{i(b xi - a eta)} over the region
# {|xi| <= delta/2, |eta| <= delta/2, |xi - eta| <= 1} with a, b the node
# frequencies 2 pi m / delta, 2 pi n / delta.  The oracle integrates the
# region directly with nested Gauss-Legendre panels split at the kinks
# of the inner bounds (xi = +-(delta/2 - 1)); it shares no antiderivative
# algebra with the production closed form.
# ----------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(80)


def sin_weight_by_quadrature(delta: float, m: int, n: int) -> float:
    a = 2.0 * np.pi * m / delta
    b = 2.0 * np.pi * n / delta
    half = delta / 2.0
    cuts = sorted({-half, half - 1.0, 1.0 - half, half})
    cuts = [c for c in cuts if -half - 1e-15 <= c <= half + 1e-15]
    total = 0.0j
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo < 1e-15:
            continue
        xi = 0.5 * (hi - lo) * _GL_NODES + 0.5 * (lo + hi)
        w_xi = 0.5 * (hi - lo) * _GL_WEIGHTS
        eta_lo = np.maximum(-half, xi - 1.0)
        eta_hi = np.minimum(half, xi + 1.0)
        scale = 0.5 * (eta_hi - eta_lo)
        eta = scale[:, None] * _GL_NODES[None, :] + 0.5 * (eta_hi + eta_lo)[:, None]
        w_eta = scale[:, None] * _GL_WEIGHTS[None, :]
        inner = np.sum(w_eta * np.exp(-1j * a * eta), axis=1)
        total += np.sum(w_xi * np.exp(1j * b * xi) * inner)
    return float(total.real) / (2.0 * delta * delta)
