import dataclasses

import pytest

import necklace_lab.verify as verify
from necklace_lab.config import LAB_CONFIG
from necklace_lab.errors import ConsistencyError, InputError
from necklace_lab.exactdist import process_counts
from necklace_lab.montecarlo import SimSummary, chi_square
from necklace_lab.verify import CHECKS, CheckResult, allowed_rejections, run_checks


def test_quick_suite_passes():
    results = run_checks("quick")
    failed = [r.line() for r in results if not r.passed]
    assert not failed, failed
    assert [r.name for r in results] == list(CHECKS)


@pytest.mark.slow
def test_full_suite_passes():
    results = run_checks("full")
    failed = [r.line() for r in results if not r.passed]
    assert not failed, failed


def test_failures_are_recorded_not_raised(monkeypatch):
    def broken(level):
        raise ConsistencyError("pde: residual nonzero at z^3")

    monkeypatch.setitem(CHECKS, "pde", broken)
    (result,) = run_checks("quick", ["pde"])
    assert not result.passed
    assert "z^3" in result.detail
    assert result.line().startswith("FAIL pde")


def test_unknown_level_or_check():
    with pytest.raises(InputError):
        run_checks("thorough")
    with pytest.raises(InputError):
        run_checks("quick", ["nonexistent"])


def test_check_result_line():
    line = CheckResult("moments", True, "ok", 0.5).line()
    assert line == "PASS moments (0.50s) ok"


@pytest.mark.parametrize(
    "seeds, percent, allowed", [(100, 99, 1), (20, 99, 0), (10, 90, 1), (100, 100, 0)]
)
def test_allowed_rejections(seeds, percent, allowed):
    assert allowed_rejections(seeds, percent) == allowed


def _exact_run(config):
    """A summary whose histogram is exactly proportional to the law of W_n."""
    counts = process_counts(config.n).row(config.n)
    return SimSummary.from_histogram(config.n, config.seed, counts, config.method)


@pytest.mark.parametrize("failing, passes", [(1, True), (2, False)])
def test_montecarlo_calibration_needs_99_of_100(monkeypatch, failing, passes):
    base = LAB_CONFIG["default_seed"]
    bad_seeds = {base + 3 + 40 * i for i in range(failing)}

    def chi_square_with_failures(summary, table, row=None):
        result = chi_square(summary, table, row=row)
        if summary.n == 6 and summary.seed in bad_seeds:
            return dataclasses.replace(result, p_value=1e-6)
        return result

    monkeypatch.setattr(verify, "run", _exact_run)
    monkeypatch.setattr(verify, "chi_square", chi_square_with_failures)
    if passes:
        assert f"{failing}/100 calibration rejections" in verify.check_montecarlo("full")
    else:
        with pytest.raises(ConsistencyError, match="2/100"):
            verify.check_montecarlo("full")


def test_montecarlo_mean_uses_three_sigma_band(monkeypatch):
    reps = LAB_CONFIG["calibration_replications"]
    # mean 2 + 2e-3 sits outside 3 * sqrt((12/45) / 10^6) = 1.55e-3
    shifted = {2: reps - 2000, 3: 2000}

    def shifted_run(config):
        if config.n == 6 and config.seed == LAB_CONFIG["default_seed"]:
            return SimSummary.from_histogram(6, config.seed, shifted)
        return _exact_run(config)

    monkeypatch.setattr(verify, "run", shifted_run)
    with pytest.raises(ConsistencyError, match="n=6 mean"):
        verify.check_montecarlo("quick")
