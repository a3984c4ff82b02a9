# ------------------------------------------------------------------------------
# File: counting.py
#
# Purpose:
#     Count the distinct necklaces the process can build, three ways:
#
#         - coefficients of N(z) = sum_k phi(k)/k log((1-z^k)/(1-z^k-z^{2k}))
#         - constraint enumeration of Cyc(white x black+)
#         - breadth-first reachability from the start necklace
#
#     plus the (n-1)! construction-process census and the golden-ratio
#     asymptotic comparison.
#
# Behaviour:
#     - The k-th summand of N(z) is the base series log((1-z)/(1-z-z^2))
#       composed with z -> z^k, so its expansion starts at z^k; the sum stops
#       at k = n_max and the cutoff is asserted.
#     - Enumeration and BFS return frozensets of canonical necklaces.
#     - Exponential-size requests above the guards in LAB_CONFIG raise
#       ResourceError.
#     - The asymptotic estimate is carried in mpmath at LAB_CONFIG
#       "golden_dps" digits: at n = 200 the error term is 20 orders of
#       magnitude below the count and float64 cannot resolve it.
# ------------------------------------------------------------------------------

from __future__ import annotations

import logging
import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Tuple

import mpmath

from necklace_lab.config import LAB_CONFIG
from necklace_lab.core import (
    B,
    Necklace,
    W,
    canonical_form,
    insert_at,
    is_valid,
    start_necklace,
    white_count,
)
from necklace_lab.errors import ConsistencyError, InputError, ResourceError
from necklace_lab.series import (
    compose_zk,
    series_add,
    series_from,
    series_log,
    series_monomial,
    series_one,
    series_scale,
    series_sub,
    series_zero,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CountReport:
    n: int
    exact_count: int
    asymptotic_estimate: float
    relative_error: float
    normalized_error: float
    brute_force: Optional[int] = None


def _require_n(n, minimum: int, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError(f"{name} must be an integer, got {n!r}.")
    if n < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {n}.")
    return n


def _guard(n: int, key: str) -> None:
    limit = LAB_CONFIG[key]
    if n > limit:
        raise ResourceError(f"n={n} exceeds the {key} guard of {limit}.")


# ==============================================================================
# Number theory
# ==============================================================================


def _factorize(k: int) -> Iterator[Tuple[int, int]]:
    """Yield (prime, exponent) pairs by trial division."""
    p = 2
    while p * p <= k:
        if k % p == 0:
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            yield p, e
        p += 1 if p == 2 else 2
    if k > 1:
        yield k, 1


def totient(k: int) -> int:
    """Euler's phi(k) = k * prod_{p | k} (1 - 1/p)."""
    k = _require_n(k, 1, "k")
    result = 1
    for p, e in _factorize(k):
        result *= p ** (e - 1) * (p - 1)
    return result


# ==============================================================================
# Generating function N(z)
# ==============================================================================


def necklace_count_coeffs(n_max: int, direct: bool = False) -> List[int]:
    """
    [z^n] N(z) for 0 <= n <= n_max (entries 0 and 1 are zero).

    With direct=True each summand's logarithms are expanded from
    1 - z^k and 1 - z^k - z^{2k} themselves instead of by substitution;
    both routes agree and the slower one serves as a cross-check.
    """
    n_max = _require_n(n_max, 2, "n_max")
    one_minus_z = series_from((1, -1), n_max)
    one_minus_z_z2 = series_from((1, -1, -1), n_max)
    base = series_sub(series_log(one_minus_z), series_log(one_minus_z_z2))

    total = series_zero(n_max)
    for k in range(1, n_max + 1):
        if direct:
            num = series_sub(series_one(n_max), series_monomial(1, k, n_max))
            den = series_sub(num, series_monomial(1, 2 * k, n_max))
            summand = series_sub(series_log(num), series_log(den))
        else:
            summand = compose_zk(base, k)
        if any(c != 0 for c in summand.coeffs[:k]):
            raise ConsistencyError(f"Summand k={k} contributes below z^{k}.")
        total = series_add(total, series_scale(summand, Fraction(totient(k), k)))

    counts: List[int] = []
    for n, c in enumerate(total.coeffs):
        if c.denominator != 1 or c < 0:
            raise ConsistencyError(f"[z^{n}] N(z) = {c} is not a nonnegative integer.")
        counts.append(int(c))
    return counts


# ==============================================================================
# Brute-force oracles
# ==============================================================================


def _compositions(n: int, min_part: int = 2) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min_part, n + 1):
        for rest in _compositions(n - first, min_part):
            yield (first,) + rest


def enumerate_valid(n: int, method: str = "compositions") -> FrozenSet[Necklace]:
    """
    Canonical forms of all size-n necklaces in Cyc(white x black+).

    method="compositions" builds one block W B^(p-1) per part p >= 2;
    method="strings" filters all 2^n colourings through is_valid.
    """
    n = _require_n(n, 2)
    _guard(n, "enumerate_max_n")
    found = set()
    if method == "compositions":
        for parts in _compositions(n):
            beads: Tuple = ()
            for p in parts:
                beads += (W,) + (B,) * (p - 1)
            found.add(canonical_form(Necklace(beads)))
    elif method == "strings":
        _guard(n, "strings_max_n")
        for mask in range(1 << n):
            nk = Necklace(tuple(W if mask >> i & 1 else B for i in range(n)))
            if is_valid(nk):
                found.add(canonical_form(nk))
    else:
        raise InputError(f"Unknown enumeration method '{method}'.")
    return frozenset(found)


def reachable(n: int) -> FrozenSet[Necklace]:
    """Level-n states of a BFS from the start necklace, canonicalised per level."""
    n = _require_n(n, 2)
    _guard(n, "reachable_max_n")
    level = {canonical_form(start_necklace())}
    for size in range(2, n):
        level = {canonical_form(insert_at(nk, g)) for nk in level for g in range(size)}
        logger.debug("reachable: size %d has %d states", size + 1, len(level))
    return frozenset(level)


def process_law(n: int) -> Counter:
    """
    Walk every construction process of size n (no deduplication).

    Returns a Counter mapping white-bead count to number of processes.
    """
    n = _require_n(n, 2)
    _guard(n, "process_walk_max_n")
    law: Counter = Counter()
    stack = deque([start_necklace()])
    while stack:
        nk = stack.pop()
        if nk.size == n:
            law[white_count(nk)] += 1
            continue
        stack.extend(insert_at(nk, g) for g in range(nk.size))
    return law


def count_construction_paths(n: int) -> int:
    """Number of distinct insertion paths of length n - 2 from the start necklace."""
    return sum(process_law(n).values())


def process_count(n: int) -> int:
    """(n-1)! construction processes for a necklace of size n."""
    n = _require_n(n, 2)
    return math.factorial(n - 1)


# ==============================================================================
# Asymptotics
# ==============================================================================


def asymptotic_report(n: int, exact: int, brute_force: Optional[int] = None) -> CountReport:
    """
    Compare exact [z^n] N(z) with the main term phi^n / n.

    normalized_error = |exact - phi^n/n| * n / phi^(n/2) stays bounded.
    """
    n = _require_n(n, 2)
    with mpmath.workdps(LAB_CONFIG["golden_dps"]):
        golden = (1 + mpmath.sqrt(5)) / 2
        estimate = golden**n / n
        diff = abs(mpmath.mpf(exact) - estimate)
        relative = diff / exact if exact else mpmath.inf
        normalized = diff * n / golden ** (mpmath.mpf(n) / 2)
        return CountReport(
            n=n,
            exact_count=exact,
            asymptotic_estimate=float(estimate),
            relative_error=float(relative),
            normalized_error=float(normalized),
            brute_force=brute_force,
        )


def count_reports(n_max: int, bruteforce_up_to: int = 0) -> List[CountReport]:
    """Reports for 2 <= n <= n_max; enumeration column filled for n <= bruteforce_up_to."""
    counts = necklace_count_coeffs(n_max)
    reports = []
    for n in range(2, n_max + 1):
        brute = len(enumerate_valid(n)) if n <= bruteforce_up_to else None
        if brute is not None and brute != counts[n]:
            raise ConsistencyError(
                f"n={n}: N(z) gives {counts[n]} necklaces, enumeration gives {brute}."
            )
        reports.append(asymptotic_report(n, counts[n], brute))
    return reports
