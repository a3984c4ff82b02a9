# ------------------------------------------------------------------------------
# File: series.py
#
# Purpose:
#     Exact arithmetic substrate for the lab: rational scalars, dense
#     univariate polynomials (RPoly) and order-truncated formal power series
#     (TruncSeries), plus the z-truncated bivariate shape (BivarTrunc) that
#     holds W(z, u).
#
# Behaviour:
#     - Scalars are `fractions.Fraction`; floats are rejected by constructors
#       so that nothing inexact leaks into a coefficient.
#     - Binary polynomial operations require the same indeterminate
#       (one of "u", "alpha", "z"); binary series operations require the same
#       truncation order. Mismatches raise UsageError instead of coercing.
#     - Values are frozen dataclasses; every operation returns a new value.
#     - The formal logarithm is computed as the integral of s'/s.
#
# Serialization:
#     Coefficient sequences serialize to JSON arrays of "num/den" strings.
# ------------------------------------------------------------------------------

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

from necklace_lab.errors import DomainError, InputError, RangeError, UsageError

Rational = Fraction
Scalar = Union[int, Fraction]

VARIABLES = ("u", "alpha", "z")


def to_rational(value) -> Fraction:
    """Coerce int / str / Fraction to Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError("Booleans are not coefficients.")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise UsageError(f"Exact coefficient required, got {type(value).__name__} {value!r}.")


# ==============================================================================
# Polynomials
# ==============================================================================


@dataclass(frozen=True)
class RPoly:
    """Dense polynomial with Fraction coefficients; index = exponent."""

    coeffs: Tuple[Fraction, ...]
    var: str = "u"

    def __post_init__(self):
        if self.var not in VARIABLES:
            raise UsageError(f"Unknown indeterminate '{self.var}'.")
        cs = [to_rational(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c: Scalar, var: str = "u") -> "RPoly":
        return cls((to_rational(c),), var)

    @classmethod
    def monomial(cls, c: Scalar, degree: int, var: str = "u") -> "RPoly":
        return cls((Fraction(0),) * degree + (to_rational(c),), var)

    @classmethod
    def zero(cls, var: str = "u") -> "RPoly":
        return cls((), var)

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        if i < 0:
            raise RangeError(f"Negative exponent {i}.")
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "RPoly") -> "RPoly":
        return poly_add(self, other)

    def __sub__(self, other: "RPoly") -> "RPoly":
        return poly_sub(self, other)

    def __mul__(self, other: "RPoly") -> "RPoly":
        return poly_mul(self, other)

    def __neg__(self) -> "RPoly":
        return poly_scale(self, -1)

    def __call__(self, x):
        return poly_eval(self, x)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"({c})*{self.var}")
            else:
                terms.append(f"({c})*{self.var}^{i}")
        return " + ".join(terms)


def _same_var(p: RPoly, q: RPoly) -> str:
    if p.var != q.var:
        raise UsageError(f"Indeterminate mismatch: '{p.var}' vs '{q.var}'.")
    return p.var


def poly_add(p: RPoly, q: RPoly) -> RPoly:
    var = _same_var(p, q)
    n = max(len(p.coeffs), len(q.coeffs))
    return RPoly(tuple(p.coeff(i) + q.coeff(i) for i in range(n)), var)


def poly_sub(p: RPoly, q: RPoly) -> RPoly:
    var = _same_var(p, q)
    n = max(len(p.coeffs), len(q.coeffs))
    return RPoly(tuple(p.coeff(i) - q.coeff(i) for i in range(n)), var)


def poly_scale(p: RPoly, c: Scalar) -> RPoly:
    c = to_rational(c)
    return RPoly(tuple(c * a for a in p.coeffs), p.var)


def poly_mul(p: RPoly, q: RPoly) -> RPoly:
    var = _same_var(p, q)
    if p.is_zero or q.is_zero:
        return RPoly.zero(var)
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return RPoly(tuple(out), var)


def poly_pow(p: RPoly, e: int) -> RPoly:
    if e < 0:
        raise InputError(f"Negative exponent {e}.")
    result = RPoly.constant(1, p.var)
    base = p
    while e:
        if e & 1:
            result = poly_mul(result, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return result


def poly_derivative(p: RPoly) -> RPoly:
    """Formal d/dx."""
    return RPoly(tuple(i * c for i, c in enumerate(p.coeffs) if i > 0), p.var)


def poly_eval(p: RPoly, x):
    """
    Horner evaluation.

    Exact (Fraction) for int / Fraction arguments, float for float arguments.
    """
    if isinstance(x, float):
        acc = 0.0
        for c in reversed(p.coeffs):
            acc = acc * x + float(c)
        return acc
    x = to_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_compose_square(p: RPoly, q: RPoly) -> RPoly:
    """
    For an even polynomial p(t) = sum_j c_{2j} t^{2j}, return sum_j c_{2j} q^j.

    Used for the structural substitution alpha^2 -> 1 - u.
    """
    odd = [i for i, c in enumerate(p.coeffs) if i % 2 == 1 and c != 0]
    if odd:
        raise DomainError(f"Polynomial in '{p.var}' has odd powers {odd[:5]}.")
    result = RPoly.zero(q.var)
    power = RPoly.constant(1, q.var)
    for j in range(0, len(p.coeffs), 2):
        if j:
            power = poly_mul(power, q)
        if p.coeffs[j] != 0:
            result = poly_add(result, poly_scale(power, p.coeffs[j]))
    return result


# ==============================================================================
# Truncated power series
# ==============================================================================


@dataclass(frozen=True)
class TruncSeries:
    """Power series in z known exactly for exponents 0..order."""

    coeffs: Tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise InputError(f"Truncation order must be >= 0, got {self.order}.")
        cs = tuple(to_rational(c) for c in self.coeffs)
        if len(cs) != self.order + 1:
            raise UsageError(
                f"Series of order {self.order} needs {self.order + 1} coefficients, "
                f"got {len(cs)}."
            )
        object.__setattr__(self, "coeffs", cs)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        return series_add(self, other)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return series_sub(self, other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return series_mul(self, other)

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        return series_div(self, other)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def series_from(coeffs: Iterable[Scalar], order: int) -> TruncSeries:
    """Pad with zeros (or cut) to exactly order + 1 coefficients."""
    cs = [to_rational(c) for c in coeffs][: order + 1]
    cs += [Fraction(0)] * (order + 1 - len(cs))
    return TruncSeries(tuple(cs), order)


def series_zero(order: int) -> TruncSeries:
    return series_from((), order)


def series_one(order: int) -> TruncSeries:
    return series_from((1,), order)


def series_monomial(c: Scalar, power: int, order: int) -> TruncSeries:
    cs = [Fraction(0)] * (order + 1)
    if power <= order:
        cs[power] = to_rational(c)
    return TruncSeries(tuple(cs), order)


def series_truncate(s: TruncSeries, order: int) -> TruncSeries:
    if order > s.order:
        raise RangeError(f"Cannot raise truncation order {s.order} to {order}.")
    return TruncSeries(s.coeffs[: order + 1], order)


def _same_order(a: TruncSeries, b: TruncSeries) -> int:
    if a.order != b.order:
        raise UsageError(f"Truncation order mismatch: {a.order} vs {b.order}.")
    return a.order


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    order = _same_order(a, b)
    return TruncSeries(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), order)


def series_sub(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    order = _same_order(a, b)
    return TruncSeries(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), order)


def series_scale(s: TruncSeries, c: Scalar) -> TruncSeries:
    c = to_rational(c)
    return TruncSeries(tuple(c * x for x in s.coeffs), s.order)


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product truncated at the common order."""
    order = _same_order(a, b)
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j in range(order + 1 - i):
            y = b.coeffs[j]
            if y:
                out[i + j] += x * y
    return TruncSeries(tuple(out), order)


def series_div(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """a / b through the common order; b must have a nonzero constant term."""
    order = _same_order(a, b)
    b0 = b.coeffs[0]
    if b0 == 0:
        raise DomainError("Series division by a series with zero constant term.")
    nonzero_b = [(j, c) for j, c in enumerate(b.coeffs) if j > 0 and c != 0]
    q: List[Fraction] = []
    for m in range(order + 1):
        acc = a.coeffs[m]
        for j, c in nonzero_b:
            if j > m:
                break
            acc -= c * q[m - j]
        q.append(acc / b0)
    return TruncSeries(tuple(q), order)


def series_derivative(s: TruncSeries) -> TruncSeries:
    """Formal d/dz; the result is known one order less than the input."""
    if s.order == 0:
        raise RangeError("Derivative of an order-0 series carries no information.")
    return TruncSeries(tuple(m * s.coeffs[m] for m in range(1, s.order + 1)), s.order - 1)


def series_integrate(s: TruncSeries) -> TruncSeries:
    """Formal antiderivative with zero constant term; gains one order."""
    cs = [Fraction(0)] + [c / (m + 1) for m, c in enumerate(s.coeffs)]
    return TruncSeries(tuple(cs), s.order + 1)


def series_log(s: TruncSeries) -> TruncSeries:
    """Formal log(s) = integral of s'/s; requires constant term 1."""
    if s.coeffs[0] != 1:
        raise DomainError(f"series_log needs constant term 1, got {s.coeffs[0]}.")
    if s.order == 0:
        return series_zero(0)
    ds = series_derivative(s)
    return series_integrate(series_div(ds, series_truncate(s, s.order - 1)))


def series_exp(s: TruncSeries) -> TruncSeries:
    """Formal exp(s); requires constant term 0."""
    if s.coeffs[0] != 0:
        raise DomainError(f"series_exp needs constant term 0, got {s.coeffs[0]}.")
    e = [Fraction(1)]
    for m in range(1, s.order + 1):
        acc = Fraction(0)
        for j in range(1, m + 1):
            if s.coeffs[j]:
                acc += j * s.coeffs[j] * e[m - j]
        e.append(acc / m)
    return TruncSeries(tuple(e), s.order)


def compose_zk(s: TruncSeries, k: int) -> TruncSeries:
    """s(z^k) truncated at the original order."""
    if k < 1:
        raise InputError(f"compose_zk needs k >= 1, got {k}.")
    cs = [s.coeffs[m // k] if m % k == 0 else Fraction(0) for m in range(s.order + 1)]
    return TruncSeries(tuple(cs), s.order)


def coeff(s: TruncSeries, m: int) -> Fraction:
    """Exact coefficient of z^m; never silently zero beyond the order."""
    if m < 0 or m > s.order:
        raise RangeError(f"Coefficient index {m} outside 0..{s.order}.")
    return s.coeffs[m]


@lru_cache(maxsize=8)
def x_coth_x_coefficients(terms: int) -> Tuple[Fraction, ...]:
    """
    Coefficients c_j of x*coth(x) = sum_j c_j x^(2j) for j < terms.

    Computed as cosh(x) / (sinh(x)/x): 1, 1/3, -1/45, 2/945, ...
    """
    if terms < 1:
        raise InputError(f"Need at least one term, got {terms}.")
    order = 2 * (terms - 1)
    cosh = series_from(
        (Fraction(1, math.factorial(m)) if m % 2 == 0 else 0 for m in range(order + 1)),
        order,
    )
    sinh_over_x = series_from(
        (Fraction(1, math.factorial(m + 1)) if m % 2 == 0 else 0 for m in range(order + 1)),
        order,
    )
    q = series_div(cosh, sinh_over_x)
    return tuple(q.coeffs[2 * j] for j in range(terms))


# ==============================================================================
# Bivariate z-truncation
# ==============================================================================


@dataclass(frozen=True)
class BivarTrunc:
    """Series in z whose coefficients are polynomials in u, exponents 0..order_z."""

    coeffs_z: Tuple[RPoly, ...]
    order_z: int

    def __post_init__(self):
        if len(self.coeffs_z) != self.order_z + 1:
            raise UsageError(
                f"BivarTrunc of order {self.order_z} needs {self.order_z + 1} entries, "
                f"got {len(self.coeffs_z)}."
            )
        if any(p.var != "u" for p in self.coeffs_z):
            raise UsageError("BivarTrunc coefficients must be polynomials in u.")

    def coeff_z(self, m: int) -> RPoly:
        if m < 0 or m > self.order_z:
            raise RangeError(f"z-power {m} outside 0..{self.order_z}.")
        return self.coeffs_z[m]

    def is_zero_through(self, m: int) -> bool:
        return all(p.is_zero for p in self.coeffs_z[: m + 1])


def bivar_eval(w: BivarTrunc, z: float, u: float) -> float:
    """Float value of the truncated sum at (z, u)."""
    acc = 0.0
    for p in reversed(w.coeffs_z):
        acc = acc * z + poly_eval(p, float(u))
    return acc


# ==============================================================================
# JSON serialization
# ==============================================================================


def coeffs_to_json(coeffs: Sequence[Fraction]) -> str:
    return json.dumps([str(c) for c in coeffs])


def coeffs_from_json(text: str) -> Tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in json.loads(text))


def poly_to_json(p: RPoly) -> str:
    return json.dumps({"var": p.var, "coeffs": [str(c) for c in p.coeffs]}, sort_keys=True)


def poly_from_json(text: str) -> RPoly:
    data = json.loads(text)
    return RPoly(tuple(Fraction(c) for c in data["coeffs"]), data["var"])


def series_to_json(s: TruncSeries) -> str:
    return coeffs_to_json(s.coeffs)


def series_from_json(text: str) -> TruncSeries:
    cs = coeffs_from_json(text)
    return TruncSeries(cs, len(cs) - 1)
