# ------------------------------------------------------------------------------
# File: montecarlo.py
#
# Purpose:
#     Seedable simulation of the necklace process and goodness-of-fit checks
#     of the simulated white-bead counts against the exact law and the
#     normal limit.
#
# Random streams:
#     - Generator family: numpy.random.PCG64 (recorded in every summary).
#     - Splitting rule: replicate i belongs to block i // block_size; block b
#       draws from the b-th child of numpy.random.SeedSequence(seed).spawn().
#       Results therefore depend only on (n, replications, seed, method,
#       block_size), never on how many worker threads ran the blocks.
#     - Gap indices come from Generator.integers, which uses Lemire's
#       bounded-integer method with rejection (no modulo bias).
#
# Methods:
#     beads    simulate the full bead sequence with core.insert_at
#     markov   track only (size m, whites k): the drawn gap is white iff it is
#              one of the m - 2k gaps between two blacks
# ------------------------------------------------------------------------------

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from necklace_lab.config import LAB_CONFIG, get_threads
from necklace_lab.core import Necklace, insert_at, start_necklace, white_count
from necklace_lab.errors import DiagnosticError, InputError, RangeError, UsageError
from necklace_lab.exactdist import DistTable, kolmogorov_normal_distance

logger = logging.getLogger(__name__)

METHODS = ("markov", "beads")


@dataclass(frozen=True)
class SimConfig:
    n: int
    replications: int
    seed: int
    method: str = "markov"
    block_size: int = field(default_factory=lambda: LAB_CONFIG["block_size"])

    def __post_init__(self):
        for name in ("n", "replications", "seed", "block_size"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise InputError(f"{name} must be an integer, got {value!r}.")
        if self.n < 2:
            raise InputError(f"n must be >= 2, got {self.n}.")
        if self.replications < 1:
            raise InputError(f"replications must be >= 1, got {self.replications}.")
        if not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}.")
        if self.block_size < 1:
            raise InputError(f"block_size must be >= 1, got {self.block_size}.")
        if self.method not in METHODS:
            raise InputError(f"method must be one of {METHODS}, got '{self.method}'.")


@dataclass(frozen=True)
class SimSummary:
    """Histogram of white counts plus empirical moments (unbiased variance)."""

    n: int
    replications: int
    seed: int
    histogram: Dict[int, int]
    empirical_mean: float
    empirical_variance: float
    generator: str = LAB_CONFIG["generator"]
    method: str = "markov"

    @classmethod
    def from_histogram(
        cls, n: int, seed: int, histogram: Dict[int, int], method: str = "markov"
    ) -> "SimSummary":
        reps = sum(histogram.values())
        if reps < 1:
            raise InputError("Histogram is empty.")
        ks = np.array(sorted(histogram), dtype=float)
        counts = np.array([histogram[int(k)] for k in ks], dtype=float)
        mean = float(np.dot(ks, counts) / reps)
        if reps > 1:
            variance = float(np.dot(counts, (ks - mean) ** 2) / (reps - 1))
        else:
            variance = 0.0
        return cls(
            n=n,
            replications=reps,
            seed=seed,
            histogram={int(k): int(histogram[int(k)]) for k in ks},
            empirical_mean=mean,
            empirical_variance=variance,
            method=method,
        )

    def merge(self, other: "SimSummary") -> "SimSummary":
        """Additive combination of two runs at the same n."""
        if other.n != self.n:
            raise UsageError(f"Cannot merge summaries for n={self.n} and n={other.n}.")
        hist = dict(self.histogram)
        for k, c in other.histogram.items():
            hist[k] = hist.get(k, 0) + c
        return SimSummary.from_histogram(self.n, self.seed, hist, self.method)

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "replications": self.replications,
            "seed": self.seed,
            "generator": self.generator,
            "method": self.method,
            "histogram": {str(k): c for k, c in sorted(self.histogram.items())},
            "mean": self.empirical_mean,
            "variance": self.empirical_variance,
        }


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    cells: Tuple[Tuple[int, int], ...]  # merged k-ranges, inclusive


# ==============================================================================
# Simulation
# ==============================================================================


def simulate_one(n: int, rng: np.random.Generator) -> Necklace:
    """Run one construction process from the start necklace up to size n."""
    if n < 2:
        raise InputError(f"n must be >= 2, got {n}.")
    nk = start_necklace()
    while nk.size < n:
        nk = insert_at(nk, int(rng.integers(nk.size)))
    return nk


def _block_markov(n: int, reps: int, rng: np.random.Generator) -> np.ndarray:
    k = np.ones(reps, dtype=np.int64)
    for m in range(2, n):
        gap = rng.integers(0, m, size=reps)
        k += gap < (m - 2 * k)
    return k


def _block_beads(n: int, reps: int, rng: np.random.Generator) -> np.ndarray:
    return np.fromiter((white_count(simulate_one(n, rng)) for _ in range(reps)), np.int64, reps)


def _block_sizes(config: SimConfig) -> List[int]:
    full, rest = divmod(config.replications, config.block_size)
    return [config.block_size] * full + ([rest] if rest else [])


def run(config: SimConfig) -> SimSummary:
    """Simulate `config.replications` independent processes; pure in the seed."""
    sizes = _block_sizes(config)
    children = np.random.SeedSequence(config.seed).spawn(len(sizes))
    simulate = _block_markov if config.method == "markov" else _block_beads

    def work(i: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(children[i]))
        return np.bincount(simulate(config.n, sizes[i], rng), minlength=config.n // 2 + 1)

    threads = min(get_threads(), len(sizes))
    logger.info(
        "run: n=%d reps=%d blocks=%d threads=%d method=%s",
        config.n,
        config.replications,
        len(sizes),
        threads,
        config.method,
    )
    with ThreadPoolExecutor(max_workers=threads) as pool:
        counts = sum(pool.map(work, range(len(sizes))))
    histogram = {k: int(c) for k, c in enumerate(counts) if c}
    return SimSummary.from_histogram(config.n, config.seed, histogram, config.method)


# ==============================================================================
# Goodness of fit
# ==============================================================================


def _merge_cells(expected: List[float], minimum: float) -> List[Tuple[int, int]]:
    """Group consecutive cells left to right until each holds >= minimum."""
    groups: List[Tuple[int, int]] = []
    start, acc = 0, 0.0
    for i, e in enumerate(expected):
        acc += e
        if acc >= minimum:
            groups.append((start, i))
            start, acc = i + 1, 0.0
    if start < len(expected):
        if not groups:
            return []
        groups[-1] = (groups[-1][0], len(expected) - 1)
    return groups


def chi_square(
    summary: SimSummary, table: DistTable, row: Optional[int] = None
) -> ChiSquareResult:
    """
    Pearson chi-square of the histogram against table row `row` (default n).

    Cells with expected count below LAB_CONFIG["min_expected_count"] are
    merged with their neighbours; dof = cells - 1.
    """
    row_n = summary.n if row is None else row
    if row_n > table.n_max:
        raise RangeError(f"Row n={row_n} beyond table n_max={table.n_max}.")
    law = table.row(row_n)
    top = max(max(law), max(summary.histogram))
    ks = list(range(1, top + 1))
    expected = [summary.replications * float(law.get(k, 0)) for k in ks]
    observed = [summary.histogram.get(k, 0) for k in ks]
    groups = _merge_cells(expected, LAB_CONFIG["min_expected_count"])
    if len(groups) < 2:
        raise DiagnosticError(
            f"Only {len(groups)} cell(s) with expected count >= "
            f"{LAB_CONFIG['min_expected_count']}; increase replications."
        )
    statistic = 0.0
    for lo, hi in groups:
        e = sum(expected[lo : hi + 1])
        o = sum(observed[lo : hi + 1])
        statistic += (o - e) ** 2 / e
    dof = len(groups) - 1
    return ChiSquareResult(
        statistic=statistic,
        dof=dof,
        p_value=float(stats.chi2.sf(statistic, dof)),
        cells=tuple((ks[lo], ks[hi]) for lo, hi in groups),
    )


def empirical_normal_distance(summary: SimSummary) -> float:
    """Kolmogorov distance of the standardized empirical law to N(0, 1)."""
    if summary.n < 6:
        raise RangeError(f"empirical_normal_distance needs n >= 6, got {summary.n}.")
    ks = np.array(sorted(summary.histogram), dtype=float)
    probs = np.array([summary.histogram[int(k)] for k in ks], dtype=float)
    return kolmogorov_normal_distance(ks, probs / summary.replications, summary.n)
