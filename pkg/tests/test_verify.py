"""Verification framework: result formatting, selection logic, and the
Gram integrity oracle's ability to actually catch a corrupted matrix.

The expensive criteria themselves run in the acceptance suite; here the
registry and runner mechanics are exercised with cheap fakes, plus the
one negative test that deliberately tampers with an assembled Gram
matrix through the test-only seam.
"""

import pytest

import zerogap.gram
from zerogap.verify import CRITERIA, CriterionResult, criterion_names, run_criteria

QUICK_NAMES = [
    "gram-oracle",
    "unitary-flatness",
    "delta1-coincidence",
    "limit-large-alpha",
    "midpoint-exactness",
    "identity-suite",
]


# ---------------------------------------------------------------- results


def test_result_line_for_a_pass():
    result = CriterionResult(3, "route-check", True, "all grids agree", 1.234)
    assert result.line == "PASS criterion 3 (route-check): all grids agree (1.2s)"


def test_result_line_for_a_failure():
    result = CriterionResult(5, "evenness", False, "off by 2e-3", 0.04)
    assert result.line.startswith("FAIL criterion 5 (evenness): off by 2e-3")


def test_result_line_appends_flags():
    result = CriterionResult(4, "limit", True, "ok", 0.5, ("slow tail", "noisy"))
    assert "[slow tail; noisy]" in result.line


def test_result_defaults():
    result = CriterionResult(0, "x", True, "d")
    assert result.elapsed == 0.0
    assert result.flags == ()


# ---------------------------------------------------------------- registry


def test_registry_is_complete_and_ordered():
    numbers = [number for (number, _, _, _) in CRITERIA]
    assert numbers == list(range(12))
    names = [name for (_, name, _, _) in CRITERIA]
    assert len(set(names)) == 12
    assert all(tag in ("quick", "full") for (_, _, tag, _) in CRITERIA)
    assert all(callable(func) for (_, _, _, func) in CRITERIA)


def test_criterion_names_levels():
    assert criterion_names("quick") == QUICK_NAMES
    full = criterion_names("full")
    assert len(full) == 12
    assert [name for name in full if name in QUICK_NAMES] == QUICK_NAMES
    assert criterion_names() == full


def test_criterion_names_rejects_unknown_level():
    with pytest.raises(ValueError, match="quick"):
        criterion_names("noisy")


# ---------------------------------------------------------------- runner


def make_fake(name, passed=True, raises=None):
    def func():
        if raises is not None:
            raise raises
        return CriterionResult(0, name, passed, "fake")

    return func


def test_run_criteria_rejects_unknown_level():
    with pytest.raises(ValueError, match="quick"):
        list(run_criteria("noisy"))


def test_run_criteria_level_filtering(monkeypatch):
    fakes = (
        (0, "a", "quick", make_fake("a")),
        (1, "b", "full", make_fake("b")),
        (2, "c", "quick", make_fake("c")),
    )
    monkeypatch.setattr("zerogap.verify.CRITERIA", fakes)
    assert [r.name for r in run_criteria("quick")] == ["a", "c"]
    assert [r.name for r in run_criteria("full")] == ["a", "b", "c"]


def test_run_criteria_names_override_the_level(monkeypatch):
    fakes = (
        (0, "a", "quick", make_fake("a")),
        (1, "b", "full", make_fake("b")),
    )
    monkeypatch.setattr("zerogap.verify.CRITERIA", fakes)
    results = list(run_criteria("quick", names=("b",)))
    assert [r.name for r in results] == ["b"]


def test_run_criteria_reports_exceptions_as_failures(monkeypatch):
    fakes = (
        (7, "boom", "quick", make_fake("boom", raises=RuntimeError("kaput"))),
    )
    monkeypatch.setattr("zerogap.verify.CRITERIA", fakes)
    results = list(run_criteria("quick"))
    assert len(results) == 1
    assert not results[0].passed
    assert results[0].number == 7
    assert results[0].name == "boom"
    assert "raised RuntimeError: kaput" in results[0].detail


# ------------------------------------------------- the oracle catches lies


def test_gram_oracle_passes_on_honest_matrices():
    results = list(run_criteria(names=("gram-oracle",)))
    assert len(results) == 1
    assert results[0].passed, results[0].line


def test_gram_oracle_catches_a_corrupted_entry(monkeypatch):
    def corrupt(entries, window):
        i = 2 - window.n_min
        j = 5 - window.n_min
        entries[i, j] += 1e-6
        entries[j, i] += 1e-6
        return entries

    monkeypatch.setattr(zerogap.gram, "_test_entry_corruption", corrupt)
    results = list(run_criteria(names=("gram-oracle",)))
    assert len(results) == 1
    result = results[0]
    assert not result.passed
    assert result.name == "gram-oracle"
    assert "2, 5" in result.detail
    assert result.line.startswith("FAIL criterion 0 (gram-oracle):")
