import math

import numpy as np
import pytest
from scipy import stats

from necklace_lab.config import LAB_CONFIG
from necklace_lab.core import start_necklace, white_count
from necklace_lab.errors import DiagnosticError, InputError, RangeError, UsageError
from necklace_lab.exactdist import dist_table
from necklace_lab.montecarlo import (
    SimConfig,
    SimSummary,
    chi_square,
    empirical_normal_distance,
    run,
    simulate_one,
)


def test_simulate_one_small(rng):
    assert simulate_one(2, rng) == start_necklace()
    for _ in range(20):
        assert white_count(simulate_one(3, rng)) == 1
        k = white_count(simulate_one(11, rng))
        assert 1 <= k <= 5


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=1, replications=10, seed=1),
        dict(n=4, replications=0, seed=1),
        dict(n=4, replications=10, seed=-1),
        dict(n=4, replications=10, seed=2**64),
        dict(n=4, replications=10, seed=1, method="urn"),
        dict(n=4, replications=10, seed=1, block_size=0),
        dict(n=4.0, replications=10, seed=1),
    ],
)
def test_sim_config_validation(kwargs):
    with pytest.raises(InputError):
        SimConfig(**kwargs)


def test_run_is_pure_in_seed():
    config = SimConfig(n=12, replications=3000, seed=99, block_size=1000)
    assert run(config) == run(config)
    assert run(config).histogram != run(SimConfig(12, 3000, 100, block_size=1000)).histogram


def test_run_independent_of_thread_count(monkeypatch):
    config = SimConfig(n=10, replications=5000, seed=3, block_size=700)
    monkeypatch.setenv("NECKLACE_THREADS", "1")
    single = run(config)
    monkeypatch.setenv("NECKLACE_THREADS", "4")
    assert run(config) == single


def test_summary_invariants():
    summary = run(SimConfig(n=9, replications=2500, seed=5, block_size=1000))
    assert sum(summary.histogram.values()) == 2500
    assert set(summary.histogram) <= set(range(1, 5))
    assert summary.generator == "numpy.random.PCG64"


def test_n4_fractions_within_binomial_band():
    reps = 100_000
    summary = run(SimConfig(n=4, replications=reps, seed=7))
    for k, p in ((1, 2 / 3), (2, 1 / 3)):
        sigma = math.sqrt(p * (1 - p) / reps)
        assert abs(summary.histogram[k] / reps - p) <= 4 * sigma


def test_n6_mean_within_three_sigma():
    reps = 1_000_000
    summary = run(SimConfig(n=6, replications=reps, seed=LAB_CONFIG["default_seed"]))
    assert abs(summary.empirical_mean - 2.0) <= 3 * math.sqrt((12 / 45) / reps)
    assert summary.empirical_variance == pytest.approx(4 / 15, rel=0.05)


def test_from_histogram_moments():
    summary = SimSummary.from_histogram(4, 0, {1: 1, 2: 1})
    assert summary.empirical_mean == 1.5
    assert summary.empirical_variance == 0.5
    single = SimSummary.from_histogram(4, 0, {2: 1})
    assert single.empirical_variance == 0.0
    with pytest.raises(InputError):
        SimSummary.from_histogram(4, 0, {})


def test_merge_adds_histograms():
    a = SimSummary.from_histogram(6, 1, {1: 2, 2: 10})
    b = SimSummary.from_histogram(6, 2, {2: 5, 3: 3})
    merged = a.merge(b)
    assert merged.histogram == {1: 2, 2: 15, 3: 3}
    assert merged.replications == 20
    with pytest.raises(UsageError):
        a.merge(SimSummary.from_histogram(7, 1, {1: 1}))


def test_to_dict_schema():
    d = SimSummary.from_histogram(4, 9, {1: 2, 2: 1}).to_dict()
    assert set(d) == {
        "n",
        "replications",
        "seed",
        "generator",
        "method",
        "histogram",
        "mean",
        "variance",
    }
    assert d["histogram"] == {"1": 2, "2": 1}


def test_chi_square_exact_expectation_is_zero():
    table = dist_table(6)
    result = chi_square(SimSummary.from_histogram(4, 0, {1: 200, 2: 100}), table)
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.dof == 1
    result = chi_square(SimSummary.from_histogram(6, 0, {1: 200, 2: 1100, 3: 200}), table)
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.dof == 2
    assert result.p_value == pytest.approx(1.0)


def test_chi_square_merges_small_cells():
    table = dist_table(12)
    # n = 12: P(W = 1) and P(W = 6) are tiny, so 300 replicates merge the tails.
    summary = run(SimConfig(n=12, replications=300, seed=21))
    result = chi_square(summary, table)
    assert result.cells[0][0] == 1
    assert result.cells[-1][1] == 6
    assert result.dof == len(result.cells) - 1
    assert len(result.cells) < 6


def test_chi_square_needs_two_cells():
    with pytest.raises(DiagnosticError):
        chi_square(SimSummary.from_histogram(4, 0, {1: 4, 2: 2}), dist_table(4))
    with pytest.raises(RangeError):
        chi_square(SimSummary.from_histogram(8, 0, {2: 10}), dist_table(6))


@pytest.mark.parametrize("method", ["markov", "beads"])
def test_methods_agree_with_exact_law(method):
    table = dist_table(8)
    summary = run(SimConfig(n=8, replications=4000, seed=17, method=method))
    assert chi_square(summary, table).p_value > 0.001


def test_chi_square_negative_control():
    table = dist_table(11)
    summary = run(SimConfig(n=10, replications=20_000, seed=23))
    result = chi_square(summary, table, row=11)
    assert result.statistic > stats.chi2.ppf(0.999, result.dof)


@pytest.mark.slow
def test_chi_square_calibration_over_seeds():
    table = dist_table(6)
    base = LAB_CONFIG["default_seed"]
    results = [
        chi_square(run(SimConfig(n=6, replications=1_000_000, seed=base + s)), table)
        for s in range(100)
    ]
    accepted = sum(r.statistic < stats.chi2.ppf(0.999, r.dof) for r in results)
    assert accepted >= 99


@pytest.mark.slow
def test_fractions_within_four_sigma_for_n_4_to_10():
    table = dist_table(10)
    reps = 1_000_000
    for n in range(4, 11):
        summary = run(SimConfig(n=n, replications=reps, seed=LAB_CONFIG["default_seed"] + n))
        for k, p in table.row(n).items():
            p = float(p)
            sigma = math.sqrt(p * (1 - p) / reps)
            fraction = summary.histogram.get(k, 0) / reps
            assert abs(fraction - p) <= 4 * sigma, (n, k, fraction, p)


def test_empirical_normal_distance():
    small = run(SimConfig(n=6, replications=20_000, seed=1))
    assert empirical_normal_distance(small) > 0.05
    d50 = empirical_normal_distance(run(SimConfig(n=50, replications=40_000, seed=2)))
    d800 = empirical_normal_distance(run(SimConfig(n=800, replications=40_000, seed=2)))
    assert 0 <= d800 < d50 <= 1
    with pytest.raises(RangeError):
        empirical_normal_distance(SimSummary.from_histogram(5, 0, {1: 1, 2: 2}))


def test_markov_block_is_vectorised(rng):
    from necklace_lab.montecarlo import _block_markov

    ks = _block_markov(20, 1000, rng)
    assert ks.dtype == np.int64
    assert ks.min() >= 1 and ks.max() <= 10
