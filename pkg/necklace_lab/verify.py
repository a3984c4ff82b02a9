# ------------------------------------------------------------------------------
# File: verify.py
#
# Purpose:
#     Acceptance suite behind `necklace verify`. Each check is a plain
#     function registered in CHECKS under a stable name; it returns a short
#     detail string on success and raises ConsistencyError on failure.
#
# Levels:
#     quick   small ranges, a few seconds in total
#     full    the acceptance-size ranges (moments to n = 200, PDE order 60,
#             100-seed chi-square calibration)
# ------------------------------------------------------------------------------

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from necklace_lab.config import LAB_CONFIG
from necklace_lab.counting import (
    count_reports,
    enumerate_valid,
    necklace_count_coeffs,
    process_law,
    reachable,
)
from necklace_lab.errors import ConsistencyError, InputError, NecklaceLabError
from necklace_lab.exactdist import (
    CLOSED_FORMS,
    check_pde as assert_pde_vanishes,
    closed_form_eval,
    dist_table,
    factorial_moments,
    mean_series_residual,
    moments_black,
    moments_white,
    normal_distance,
    pgf_sequence,
    process_counts,
    r_identity_residual,
    r_to_pgf,
    truncated_W,
)
from necklace_lab.montecarlo import SimConfig, chi_square, run
from necklace_lab.series import bivar_eval, x_coth_x_coefficients

logger = logging.getLogger(__name__)

LEVELS = ("quick", "full")

Z_GRID = (0.1, 0.2, 0.3)
U_GRID = (0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.seconds:.2f}s) {self.detail}"


def _pick(level: str, quick, full):
    return quick if level == "quick" else full


def _fail(name: str, message: str) -> None:
    raise ConsistencyError(f"{name}: {message}")


# ==============================================================================
# Checks
# ==============================================================================


def check_process_law(level: str) -> str:
    """Brute-force walk of all (n-1)! processes against the exact tables."""
    n_max = _pick(level, 7, 9)
    table = dist_table(n_max)
    counts = process_counts(n_max)
    for n in range(2, n_max + 1):
        law = dict(process_law(n))
        if law != counts.row(n):
            _fail("process_law", f"n={n}: walk {law} vs counts {counts.row(n)}")
        total = math.factorial(n - 1)
        probs = {k: Fraction(c, total) for k, c in law.items()}
        if probs != table.row(n):
            _fail("process_law", f"n={n}: walk law differs from dist_table row")
    return f"n<={n_max}"


def check_moments(level: str) -> str:
    n_max = _pick(level, 60, 200)
    table = dist_table(n_max)
    for n in range(3, n_max + 1):
        white = moments_white(n, table)
        black = moments_black(n, table)
        if white.mean != Fraction(n, 3) or black.mean != Fraction(2 * n, 3):
            _fail("moments", f"n={n}: means {white.mean}, {black.mean}")
        if n >= 6 and white.variance != Fraction(2 * n, 45):
            _fail("moments", f"n={n}: variance {white.variance}")
    for n in range(2, min(n_max, 30) + 1):
        _, _, via_pgf = factorial_moments(n)
        if via_pgf != moments_white(n, table):
            _fail("moments", f"n={n}: factorial moments {via_pgf}")
    return f"mean n/3 for 3<=n<={n_max}, variance 2n/45 for 6<=n<={n_max}"


def check_triple_oracle(level: str) -> str:
    n_max = _pick(level, 30, 60)
    table = dist_table(n_max)
    pgfs = pgf_sequence(n_max)
    for n in range(2, n_max + 1):
        row = table.row(n)
        expected = tuple(row.get(k, Fraction(0)) for k in range(max(row) + 1))
        if pgfs[n].coeffs != expected:
            _fail("triple_oracle", f"n={n}: pgf recurrence differs from dist_table")
        if r_to_pgf(n).coeffs != expected:
            _fail("triple_oracle", f"n={n}: r_n substitution differs from dist_table")
    return f"2<=n<={n_max}"


def check_pde(level: str) -> str:
    order = _pick(level, 20, 60)
    try:
        assert_pde_vanishes(order)
    except ConsistencyError as e:
        _fail("pde", str(e))
    return f"residual zero through z^{order - 1}"


def check_closed_form(level: str) -> str:
    order = 120
    w = truncated_W(order)
    worst_series, worst_forms = 0.0, 0.0
    for z in Z_GRID:
        for u in U_GRID:
            values = {form: closed_form_eval(z, u, form=form) for form in CLOSED_FORMS}
            truncated = bivar_eval(w, z, u)
            gap = abs(values["coth"] - truncated)
            spread = max(values.values()) - min(values.values())
            worst_series, worst_forms = max(worst_series, gap), max(worst_forms, spread)
            if gap > 1e-9:
                _fail("closed_form", f"z={z} u={u}: |closed - series| = {gap:.3e}")
            if spread > 1e-12:
                _fail("closed_form", f"z={z} u={u}: forms differ by {spread:.3e}")
    return f"series gap {worst_series:.1e}, form spread {worst_forms:.1e}"


def check_x_coth_x(level: str) -> str:
    expected = (Fraction(1), Fraction(1, 3), Fraction(-1, 45), Fraction(2, 945))
    got = x_coth_x_coefficients(4)
    if got != expected:
        _fail("x_coth_x", f"coefficients {got}")
    return "1, 1/3, -1/45, 2/945"


def check_counting(level: str) -> str:
    n_max = _pick(level, 12, 18)
    bfs_max = _pick(level, 9, 12)
    counts = necklace_count_coeffs(n_max)
    if counts != necklace_count_coeffs(n_max, direct=True):
        _fail("counting", "substituted and direct N(z) expansions differ")
    for n in range(2, n_max + 1):
        by_parts = enumerate_valid(n)
        if len(by_parts) != counts[n]:
            _fail("counting", f"n={n}: N(z) {counts[n]} vs enumeration {len(by_parts)}")
        if n <= 12 and enumerate_valid(n, method="strings") != by_parts:
            _fail("counting", f"n={n}: string filter differs from compositions")
        if n <= bfs_max and reachable(n) != by_parts:
            _fail("counting", f"n={n}: reachable set differs from enumeration")
    return f"enumeration n<={n_max}, reachability n<={bfs_max}"


def check_asymptotic(level: str) -> str:
    n_max = _pick(level, 60, 200)
    bound = LAB_CONFIG["normalized_error_bound"]
    worst = 0.0
    for report in count_reports(n_max):
        worst = max(worst, report.normalized_error)
        if report.normalized_error > bound:
            _fail("asymptotic", f"n={report.n}: normalized error {report.normalized_error:.3f}")
    return f"max normalized error {worst:.3f} <= {bound}"


def check_clt(level: str) -> str:
    sizes = _pick(level, (100, 400), (100, 400, 1600))
    bound = LAB_CONFIG["clt_scaled_bound"]
    distances = [normal_distance(n) for n in sizes]
    scaled = [math.sqrt(n) * d for n, d in zip(sizes, distances)]
    fitted = math.exp(sum(math.log(s) for s in scaled) / len(scaled))
    for n, s in zip(sizes, scaled):
        if s > bound:
            _fail("clt", f"n={n}: sqrt(n) * distance = {s:.3f}")
        if not fitted / 3 <= s <= 3 * fitted:
            _fail("clt", f"n={n}: sqrt(n) * distance = {s:.3f}, fitted constant {fitted:.3f}")
    if any(b >= a for a, b in zip(distances, distances[1:])):
        _fail("clt", f"distances not decreasing: {distances}")
    return ", ".join(f"n={n}: {d:.4f}" for n, d in zip(sizes, distances))


def check_integer_tables(level: str) -> str:
    n_max = _pick(level, 12, 20)
    table = dist_table(n_max)
    counts = process_counts(n_max)
    for n in range(2, n_max + 1):
        total = math.factorial(n - 1)
        if counts.total(n) != total:
            _fail("integer_tables", f"n={n}: counts sum to {counts.total(n)}")
        if {k: Fraction(c, total) for k, c in counts.row(n).items()} != table.row(n):
            _fail("integer_tables", f"n={n}: counts / (n-1)! differ from dist_table")
    return f"2<=n<={n_max}"


def check_mean_series(level: str) -> str:
    order = _pick(level, 30, 80)
    if not mean_series_residual(order).is_zero():
        _fail("mean_series", "mean generating function residual is nonzero")
    return f"zero through z^{order}"


def check_r_identity(level: str) -> str:
    n_max = _pick(level, 30, 60)
    for n in range(2, n_max + 1):
        residual = r_identity_residual(n)
        if not residual.is_zero:
            _fail("r_identity", f"n={n}: residual {residual}")
    return f"2<=n<={n_max}"


def allowed_rejections(seeds: int, accepted_percent: int) -> int:
    """Rejections tolerated when at least accepted_percent of the seeds must pass."""
    required = -(-accepted_percent * seeds // 100)
    return seeds - required


def calibration_rejections(seeds: int, replications: int, base_seed: int) -> int:
    """Seeds base_seed .. base_seed + seeds - 1 whose n = 6 chi-square rejects."""
    alpha = LAB_CONFIG["chi_square_alpha"]
    table = dist_table(6)
    rejected = 0
    for s in range(seeds):
        summary = run(SimConfig(n=6, replications=replications, seed=base_seed + s))
        rejected += chi_square(summary, table).p_value < alpha
    return rejected


def check_montecarlo(level: str) -> str:
    seed = LAB_CONFIG["default_seed"]
    alpha = LAB_CONFIG["chi_square_alpha"]
    reps = LAB_CONFIG["calibration_replications"]
    summary = run(SimConfig(n=6, replications=reps, seed=seed))
    band = 3.0 * math.sqrt(float(Fraction(2 * 6, 45)) / reps)
    if abs(summary.empirical_mean - 2.0) > band:
        _fail("montecarlo", f"n=6 mean {summary.empirical_mean:.5f} outside 2 +- {band:.5f}")

    seeds = _pick(level, 20, LAB_CONFIG["calibration_seeds"])
    rejected = calibration_rejections(seeds, reps, seed)
    allowed = allowed_rejections(seeds, LAB_CONFIG["calibration_accepted_percent"])
    if rejected > allowed:
        _fail(
            "montecarlo",
            f"{rejected}/{seeds} calibration runs rejected at {alpha}, at most {allowed} allowed",
        )

    table = dist_table(11)
    beads = run(SimConfig(n=8, replications=5_000, seed=seed, method="beads"))
    if chi_square(beads, table).p_value < alpha:
        _fail("montecarlo", "bead-level simulation rejected against the exact law")

    control = chi_square(run(SimConfig(n=10, replications=20_000, seed=seed)), table, row=11)
    if control.p_value >= alpha:
        _fail("montecarlo", f"negative control accepted (p={control.p_value:.3g})")
    return f"mean {summary.empirical_mean:.4f}, {rejected}/{seeds} calibration rejections"


CHECKS: Dict[str, Callable[[str], str]] = {
    "process_law": check_process_law,
    "moments": check_moments,
    "triple_oracle": check_triple_oracle,
    "pde": check_pde,
    "closed_form": check_closed_form,
    "x_coth_x": check_x_coth_x,
    "integer_tables": check_integer_tables,
    "mean_series": check_mean_series,
    "r_identity": check_r_identity,
    "counting": check_counting,
    "asymptotic": check_asymptotic,
    "clt": check_clt,
    "montecarlo": check_montecarlo,
}


def run_checks(level: str = "quick", names: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """Run the selected checks in registry order; failures are recorded, not raised."""
    if level not in LEVELS:
        raise InputError(f"Unknown level '{level}'; choose from {LEVELS}.")
    selected = list(CHECKS) if names is None else list(names)
    unknown = [n for n in selected if n not in CHECKS]
    if unknown:
        raise InputError(f"Unknown check(s) {unknown}; available: {list(CHECKS)}.")

    results = []
    for name in selected:
        start = time.perf_counter()
        try:
            detail, passed = CHECKS[name](level), True
        except NecklaceLabError as e:
            detail, passed = str(e), False
            logger.error("check %s failed: %s", name, e)
        results.append(CheckResult(name, passed, detail, time.perf_counter() - start))
    return results
