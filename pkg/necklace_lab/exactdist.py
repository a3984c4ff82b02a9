# ------------------------------------------------------------------------------
# File: exactdist.py
#
# Purpose:
#     Exact law of W_n, the number of white beads in a necklace of size n
#     built by a uniformly random construction process, in every
#     representation the lab cross-checks:
#
#         - probability recurrence          -> DistTable
#         - PGF recurrence for w_n(u)       -> pgf / pgf_sequence
#         - integer process counts          -> ProcessCountTable
#         - even polynomials r_n(alpha)     -> r_poly / r_to_pgf
#         - truncated W(z, u) and its PDE   -> truncated_W / pde_residual
#         - numeric closed form             -> closed_form_eval
#         - moments and normal diagnostics  -> moments_* / normal_distance
#
# Behaviour:
#     - All tables are exact (Fraction / int). Floats appear only in
#       closed_form_eval, dist_row_float and the Kolmogorov distances.
#     - Evenness of r_n and vanishing of every residual are checked, never
#       assumed; failures raise ConsistencyError.
#     - Normal CDF: Phi(x) = ndtr(x) = erfc(-x / sqrt(2)) / 2 from
#       scipy.special (Cephes erf/erfc, double precision, absolute error
#       well below 1e-10).
# ------------------------------------------------------------------------------

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import ndtr

from necklace_lab.config import LAB_CONFIG
from necklace_lab.errors import (
    ConsistencyError,
    DomainError,
    InputError,
    PoleError,
    RangeError,
    UsageError,
)
from necklace_lab.series import (
    BivarTrunc,
    RPoly,
    TruncSeries,
    poly_add,
    poly_compose_square,
    poly_derivative,
    poly_eval,
    poly_mul,
    poly_scale,
    poly_sub,
    series_div,
    series_from,
    series_sub,
    x_coth_x_coefficients,
)

logger = logging.getLogger(__name__)

U = RPoly((0, 1), "u")
ONE_MINUS_U = RPoly((1, -1), "u")
TWO_U_ONE_MINUS_U = RPoly((0, 2, -2), "u")

# Numerator of sum_n E[W_n] z^(n-1) over the denominator 3(1 - z)^2.
MEAN_SERIES_NUMERATOR = (0, 3, -3, 1)
MEAN_SERIES_DENOMINATOR = (3, -6, 3)


def _require_int(value, minimum: int, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InputError(f"{name} must be an integer, got {value!r}.")
    if value < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {value}.")
    return int(value)


# ==============================================================================
# Tables
# ==============================================================================


@dataclass(frozen=True, eq=False)
class DistTable:
    """w_{n,k} = P(W_n = k) for 2 <= n <= n_max; rows hold the support only."""

    n_max: int
    rows: Dict[int, Dict[int, Fraction]]

    def row(self, n: int) -> Dict[int, Fraction]:
        if not 2 <= n <= self.n_max:
            raise RangeError(f"Row n={n} outside table range 2..{self.n_max}.")
        return dict(self.rows[n])

    def prob(self, n: int, k: int) -> Fraction:
        return self.row(n).get(k, Fraction(0))

    def check(self) -> None:
        """Raise ConsistencyError unless every row is a law on 1..floor(n/2)."""
        for n, row in self.rows.items():
            if sum(row.values()) != 1:
                raise ConsistencyError(f"Row n={n} sums to {sum(row.values())}.")
            if any(v < 0 for v in row.values()):
                raise ConsistencyError(f"Row n={n} has a negative entry.")
            if min(row) < 1 or max(row) > n // 2:
                raise ConsistencyError(f"Row n={n} has support {sorted(row)}.")
            if n >= 3 and sorted(row) != list(range(1, n // 2 + 1)):
                raise ConsistencyError(f"Row n={n} has gaps in its support.")


@dataclass(frozen=True, eq=False)
class ProcessCountTable:
    """c_{n,k}: number of construction processes of size n ending with k whites."""

    n_max: int
    rows: Dict[int, Dict[int, int]]

    def row(self, n: int) -> Dict[int, int]:
        if not 2 <= n <= self.n_max:
            raise RangeError(f"Row n={n} outside table range 2..{self.n_max}.")
        return dict(self.rows[n])

    def total(self, n: int) -> int:
        return sum(self.row(n).values())


@dataclass(frozen=True)
class MomentPair:
    n: int
    mean: Fraction
    variance: Fraction


def dist_table(n_max: int) -> DistTable:
    """
    Exact law table from the law of total probability:

        w_{n+1,k} = (2k/n) w_{n,k} + (1 - 2(k-1)/n) w_{n,k-1},  w_{2,1} = 1.
    """
    n_max = _require_int(n_max, 2, "n_max")
    rows: Dict[int, Dict[int, Fraction]] = {2: {1: Fraction(1)}}
    prev = rows[2]
    for n in range(2, n_max):
        nxt: Dict[int, Fraction] = {}
        for k in range(1, (n + 1) // 2 + 1):
            v = Fraction(2 * k, n) * prev.get(k, 0) + (
                1 - Fraction(2 * (k - 1), n)
            ) * prev.get(k - 1, 0)
            if v:
                nxt[k] = v
        rows[n + 1] = nxt
        prev = nxt
    logger.debug("dist_table: built rows 2..%d", n_max)
    return DistTable(n_max, rows)


def process_counts(n_max: int) -> ProcessCountTable:
    """
    Integer table c_{n,k} = 2k c_{n-1,k} + (n+1-2k) c_{n-1,k-1}, c_{2,1} = 1.

    Equals w_{n,k} (n-1)!; the quotient w_{n,k} / (n-1)! does not satisfy it.
    """
    n_max = _require_int(n_max, 2, "n_max")
    rows: Dict[int, Dict[int, int]] = {2: {1: 1}}
    prev = rows[2]
    for n in range(3, n_max + 1):
        nxt: Dict[int, int] = {}
        for k in range(1, n // 2 + 1):
            v = 2 * k * prev.get(k, 0) + (n + 1 - 2 * k) * prev.get(k - 1, 0)
            if v < 0:
                raise ConsistencyError(f"Negative process count c_({n},{k}) = {v}.")
            if v:
                nxt[k] = v
        rows[n] = nxt
        prev = nxt
    return ProcessCountTable(n_max, rows)


# ==============================================================================
# Probability generating functions
# ==============================================================================


def pgf_sequence(n_max: int) -> Dict[int, RPoly]:
    """w_n(u) for 2 <= n <= n_max via w_{n+1} = (2u(1-u)/n) w_n' + u w_n."""
    n_max = _require_int(n_max, 2, "n_max")
    out = {2: U}
    w = U
    for n in range(2, n_max):
        w = poly_add(
            poly_scale(poly_mul(TWO_U_ONE_MINUS_U, poly_derivative(w)), Fraction(1, n)),
            poly_mul(U, w),
        )
        out[n + 1] = w
    return out


def pgf(n: int) -> RPoly:
    n = _require_int(n, 2, "n")
    return pgf_sequence(n)[n]


def moments_white(n: int, table: DistTable) -> MomentPair:
    row = table.row(n)
    mean = sum((k * p for k, p in row.items()), Fraction(0))
    second = sum((k * k * p for k, p in row.items()), Fraction(0))
    variance = second - mean * mean
    if variance < 0:
        raise ConsistencyError(f"Negative variance {variance} at n={n}.")
    return MomentPair(n, mean, variance)


def moments_black(n: int, table: DistTable) -> MomentPair:
    """B_n = n - W_n: mean shifts, variance is shared."""
    white = moments_white(n, table)
    return MomentPair(n, n - white.mean, white.variance)


def factorial_moments(n: int) -> Tuple[Fraction, Fraction, MomentPair]:
    """
    (E W_n, E W_n(W_n - 1), moments) read off derivatives of w_n at u = 1.

    Variance uses V = E W(W-1) + E W - (E W)^2.
    """
    w = pgf(n)
    d1 = poly_derivative(w)
    first = poly_eval(d1, 1)
    second = poly_eval(poly_derivative(d1), 1)
    return first, second, MomentPair(n, first, second + first - first * first)


def mean_series_residual(
    order: int, numerator: Sequence[int] = MEAN_SERIES_NUMERATOR
) -> TruncSeries:
    """
    sum_{n>=2} E[W_n] z^(n-1) minus numerator(z) / (3 (1 - z)^2), through z^order.

    With the default numerator z(z^2 - 3z + 3) the residual vanishes.
    """
    order = _require_int(order, 1, "order")
    table = dist_table(order + 1)
    means = [Fraction(0)] + [moments_white(n, table).mean for n in range(2, order + 2)]
    closed = series_div(
        series_from(numerator, order), series_from(MEAN_SERIES_DENOMINATOR, order)
    )
    return series_sub(series_from(means, order), closed)


# ==============================================================================
# Even polynomials r_n(alpha)
# ==============================================================================

_R_CACHE: List[RPoly] = [RPoly.zero("alpha"), RPoly.zero("alpha")]  # index 0 unused
_R_LOCK = threading.Lock()
_ONE_MINUS_ALPHA = RPoly((1, -1), "alpha")


def _extend_r(n_max: int) -> None:
    with _R_LOCK:
        for n in range(len(_R_CACHE), n_max + 1):
            acc = [Fraction(0)] * max(n - 2, 1)
            for k in range(0, n - 1):
                r_prev = _R_CACHE[n - 1 - k]
                if r_prev.is_zero:
                    continue
                c = Fraction(2**k, math.factorial(k + 1))
                for i, a in enumerate(r_prev.coeffs):
                    if i + k >= len(acc):
                        acc.extend([Fraction(0)] * (i + k + 1 - len(acc)))
                    acc[i + k] += c * a
            lead = RPoly.monomial(Fraction(2 ** (n - 2), math.factorial(n - 1)), n - 2, "alpha")
            r_n = poly_add(lead, poly_mul(_ONE_MINUS_ALPHA, RPoly(tuple(acc), "alpha")))
            odd = [i for i, c in enumerate(r_n.coeffs) if i % 2 == 1 and c != 0]
            if odd:
                raise ConsistencyError(f"r_{n}(alpha) has nonzero odd powers {odd[:5]}.")
            _R_CACHE.append(r_n)


def r_poly(n: int) -> RPoly:
    """
    r_1 = 0 and for n >= 2

        r_n = (2a)^(n-2)/(n-1)! + (1-a) sum_{k=0}^{n-2} (2a)^k/(k+1)! r_{n-1-k}.
    """
    n = _require_int(n, 1, "n")
    _extend_r(n)
    return _R_CACHE[n]


def r_to_pgf(n: int) -> RPoly:
    """u * r_n evaluated at alpha^2 = 1 - u; equals w_n(u)."""
    n = _require_int(n, 2, "n")
    try:
        shifted = poly_compose_square(r_poly(n), ONE_MINUS_U)
    except DomainError as e:
        raise ConsistencyError(str(e)) from e
    return poly_mul(U, shifted)


def r_identity_residual(n: int) -> RPoly:
    """
    (2a)^(n-1)/(n-1)! - (a+1) r_n - (a-1) sum_{k=0}^{n-1} (2a)^k/k! r_{n-k}.

    Zero for every n >= 2.
    """
    n = _require_int(n, 2, "n")
    _extend_r(n)
    total = RPoly.zero("alpha")
    for k in range(0, n):
        term = RPoly.monomial(Fraction(2**k, math.factorial(k)), k, "alpha")
        total = poly_add(total, poly_mul(term, _R_CACHE[n - k]))
    lhs = RPoly.monomial(Fraction(2 ** (n - 1), math.factorial(n - 1)), n - 1, "alpha")
    rhs = poly_add(
        poly_mul(RPoly((1, 1), "alpha"), _R_CACHE[n]),
        poly_mul(RPoly((-1, 1), "alpha"), total),
    )
    return poly_sub(lhs, rhs)


# ==============================================================================
# Bivariate generating function
# ==============================================================================


def truncated_W(order_z: int) -> BivarTrunc:
    """W(z, u) = sum_n w_n(u) z^(n-1) through z^order_z."""
    order_z = _require_int(order_z, 1, "order_z")
    pgfs = pgf_sequence(order_z + 1)
    coeffs = [RPoly.zero("u")]
    for m in range(1, order_z + 1):
        p = pgfs[m + 1]
        if p.degree > (m + 1) // 2:
            raise ConsistencyError(f"z^{m} coefficient has u-degree {p.degree}.")
        coeffs.append(p)
    return BivarTrunc(tuple(coeffs), order_z)


def pde_residual(order_z: int, w: Optional[BivarTrunc] = None) -> BivarTrunc:
    """
    d_z W (1 - zu) - 2u(1-u) d_u W - u W - u, coefficientwise in z.

    Entries below z^order_z must vanish; the entry at z^order_z needs the
    unknown next coefficient and is reported with that coefficient set to 0.
    """
    order_z = _require_int(order_z, 2, "order_z")
    w = truncated_W(order_z) if w is None else w
    if w.order_z != order_z:
        raise UsageError(f"W has order {w.order_z}, expected {order_z}.")
    out = []
    for m in range(order_z + 1):
        p_m = w.coeff_z(m)
        p_next = w.coeff_z(m + 1) if m < order_z else RPoly.zero("u")
        lhs = poly_sub(poly_scale(p_next, m + 1), poly_scale(poly_mul(U, p_m), m))
        rhs = poly_add(poly_mul(TWO_U_ONE_MINUS_U, poly_derivative(p_m)), poly_mul(U, p_m))
        if m == 0:
            rhs = poly_add(rhs, U)
        out.append(poly_sub(lhs, rhs))
    return BivarTrunc(tuple(out), order_z)


def check_pde(order_z: int) -> None:
    residual = pde_residual(order_z)
    for m in range(order_z):
        if not residual.coeff_z(m).is_zero:
            raise ConsistencyError(f"PDE residual nonzero at z^{m}: {residual.coeff_z(m)}.")


CLOSED_FORMS = ("coth", "exp", "exp2")


def closed_form_eval(
    z: float, u: float, order_fallback: Optional[int] = None, form: str = "coth"
) -> float:
    """
    Numeric value of W(z, u) = u / (a coth(z a) - 1), a = sqrt(1 - u).

    Forms:
        coth   u / (a coth(za) - 1)
        exp    u (e^{za} - e^{-za}) / (e^{za}(a-1) + e^{-za}(a+1))
        exp2   u (e^{2za} - 1) / (e^{2za}(a-1) + a + 1)

    For |1 - u| below the fallback band every form is evaluated through
    a coth(za) = (1/z) sum_j c_j (z^2 (1-u))^j with the exact coefficients of
    x coth x, which removes the 0/0 at u = 1.
    """
    if form not in CLOSED_FORMS:
        raise InputError(f"Unknown closed form '{form}'; choose from {CLOSED_FORMS}.")
    z, u = float(z), float(u)
    if not (math.isfinite(z) and math.isfinite(u)):
        raise DomainError(f"Non-finite arguments z={z}, u={u}.")
    if not 0.0 < u <= 1.0:
        raise DomainError(f"u={u} outside (0, 1].")
    if not 0.0 < z <= LAB_CONFIG["z_max"]:
        raise DomainError(f"z={z} outside (0, {LAB_CONFIG['z_max']}].")
    tol = LAB_CONFIG["pole_tolerance"]
    one_minus_u = 1.0 - u

    if one_minus_u < LAB_CONFIG["u_fallback_band"]:
        terms = order_fallback or LAB_CONFIG["fallback_terms"]
        x2 = z * z * one_minus_u
        acc = 0.0
        for c in reversed(x_coth_x_coefficients(terms)):
            acc = acc * x2 + float(c)
        logger.debug("closed_form_eval: even-series fallback at u=%r", u)
        num, den = u, acc / z - 1.0
    else:
        a = math.sqrt(one_minus_u)
        if form == "coth":
            num, den = u, a / math.tanh(z * a) - 1.0
        elif form == "exp":
            ep, em = math.exp(z * a), math.exp(-z * a)
            num, den = u * (ep - em), ep * (a - 1.0) + em * (a + 1.0)
        else:
            e2 = math.exp(2.0 * z * a)
            num, den = u * math.expm1(2.0 * z * a), e2 * (a - 1.0) + a + 1.0

    if abs(den) < tol:
        raise PoleError(f"Denominator {den!r} within {tol} of zero at z={z}, u={u}.")
    return num / den


# ==============================================================================
# Normal-limit diagnostics
# ==============================================================================


def dist_row_float(n: int) -> np.ndarray:
    """float64 probabilities P(W_n = k), index k = 0..floor(n/2)."""
    n = _require_int(n, 2, "n")
    w = np.zeros(n // 2 + 2)
    w[1] = 1.0
    k = np.arange(w.size, dtype=float)
    for m in range(2, n):
        grow = np.zeros_like(w)
        grow[1:] = (1.0 - 2.0 * (k[1:] - 1.0) / m) * w[:-1]
        w = (2.0 * k / m) * w + grow
    return w[: n // 2 + 1]


def kolmogorov_normal_distance(ks: np.ndarray, probs: np.ndarray, n: int) -> float:
    """
    sup_x |P((X - n/3)/sqrt(2n/45) <= x) - Phi(x)| for a law on the points ks.

    Checked at each support point from both sides of the jump.
    """
    order = np.argsort(ks)
    ks, probs = np.asarray(ks, dtype=float)[order], np.asarray(probs, dtype=float)[order]
    cdf = np.cumsum(probs)
    cdf_left = np.concatenate(([0.0], cdf[:-1]))
    phi = ndtr((ks - n / 3.0) / math.sqrt(2.0 * n / 45.0))
    return float(max(np.max(np.abs(cdf - phi)), np.max(np.abs(cdf_left - phi))))


def normal_distance(n: int, table: Optional[DistTable] = None) -> float:
    """
    Kolmogorov distance of the standardized exact law of W_n to N(0, 1).

    Uses the exact table row when a table is supplied, else the float64 row
    from dist_row_float.
    """
    n = _require_int(n, 2, "n")
    if n < 6:
        raise RangeError(f"normal_distance needs n >= 6, got {n}.")
    if table is not None:
        row = table.row(n)
        ks = np.array(sorted(row), dtype=float)
        probs = np.array([float(row[k]) for k in sorted(row)])
    else:
        probs = dist_row_float(n)
        ks = np.arange(probs.size, dtype=float)
        keep = probs > 0
        ks, probs = ks[keep], probs[keep]
    return kolmogorov_normal_distance(ks, probs, n)
