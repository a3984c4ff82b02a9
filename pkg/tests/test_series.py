import random
from fractions import Fraction as F

import pytest

from necklace_lab.errors import DomainError, InputError, RangeError, UsageError
from necklace_lab.series import (
    BivarTrunc,
    RPoly,
    TruncSeries,
    bivar_eval,
    coeff,
    coeffs_from_json,
    coeffs_to_json,
    compose_zk,
    poly_add,
    poly_compose_square,
    poly_derivative,
    poly_eval,
    poly_from_json,
    poly_mul,
    poly_pow,
    poly_to_json,
    series_add,
    series_derivative,
    series_div,
    series_exp,
    series_from,
    series_from_json,
    series_integrate,
    series_log,
    series_monomial,
    series_mul,
    series_one,
    series_to_json,
    to_rational,
    x_coth_x_coefficients,
)


def test_rpoly_strips_trailing_zeros():
    p = RPoly((1, 2, 0, 0))
    assert p.coeffs == (F(1), F(2))
    assert p.degree == 1
    assert RPoly((0, 0)).is_zero
    assert RPoly.zero().degree == -1


def test_rpoly_rejects_floats_and_unknown_var():
    with pytest.raises(UsageError):
        RPoly((0.5,))
    with pytest.raises(UsageError):
        RPoly((1,), "x")
    with pytest.raises(UsageError):
        to_rational(True)


def test_poly_arithmetic():
    p = RPoly((1, 1))  # 1 + u
    assert poly_mul(p, p).coeffs == (1, 2, 1)
    assert poly_pow(p, 3).coeffs == (1, 3, 3, 1)
    assert (p - p).is_zero
    assert poly_derivative(RPoly((5, 0, 3))).coeffs == (0, 6)
    assert poly_eval(RPoly((F(2, 3), F(1, 3))), 1) == 1
    assert poly_eval(RPoly((1, 1)), 0.5) == pytest.approx(1.5)
    assert p(2) == 3


def test_poly_indeterminate_mismatch():
    with pytest.raises(UsageError):
        RPoly((1,), "u") + RPoly((1,), "alpha")


def test_poly_compose_square():
    r4 = RPoly((1, 0, F(-1, 3)), "alpha")  # 1 - alpha^2 / 3
    shifted = poly_compose_square(r4, RPoly((1, -1), "u"))
    assert shifted == RPoly((F(2, 3), F(1, 3)), "u")
    with pytest.raises(DomainError):
        poly_compose_square(RPoly((0, 1), "alpha"), RPoly((1, -1), "u"))


def test_trunc_series_length_invariant():
    with pytest.raises(UsageError):
        TruncSeries((1, 2), 3)
    with pytest.raises(UsageError):
        series_one(3) + series_one(4)


def test_geometric_division():
    """1 / (1 - z) = 1 + z + z^2 + ..."""
    q = series_div(series_one(6), series_from((1, -1), 6))
    assert q.coeffs == (1,) * 7
    with pytest.raises(DomainError):
        series_div(series_one(3), series_from((0, 1), 3))


def test_series_mul_truncates():
    s = series_from((1, 1), 2)
    assert series_mul(s, series_mul(s, s)).coeffs == (1, 3, 3)


def test_derivative_and_integral_orders():
    s = series_from((1, 2, 3, 4), 3)
    d = series_derivative(s)
    assert d.order == 2 and d.coeffs == (2, 6, 12)
    i = series_integrate(d)
    assert i.order == 3 and i.coeffs == (0, 2, 3, 4)


def test_log_of_geometric_is_harmonic():
    """log(1 - z) = -sum z^m / m."""
    s = series_log(series_from((1, -1), 8))
    assert s.coeffs == tuple([F(0)] + [F(-1, m) for m in range(1, 9)])
    with pytest.raises(DomainError):
        series_log(series_from((2, 1), 4))


def test_exp_log_round_trip():
    s = series_from((1, -1, -1), 15)
    assert series_exp(series_log(s)) == s
    with pytest.raises(DomainError):
        series_exp(series_one(3))


def test_compose_zk():
    s = series_from((1, 2, 3), 6)
    assert compose_zk(s, 2).coeffs == (1, 0, 2, 0, 3, 0, 0)
    assert compose_zk(s, 1) == s
    with pytest.raises(InputError):
        compose_zk(s, 0)


def test_coeff_beyond_order():
    s = series_one(3)
    assert coeff(s, 0) == 1
    with pytest.raises(RangeError):
        coeff(s, 4)


def test_x_coth_x_coefficients():
    assert x_coth_x_coefficients(4) == (F(1), F(1, 3), F(-1, 45), F(2, 945))


def test_bivar_eval_geometric():
    """sum_{m>=1} u z^m with u-polynomials u; equals u z / (1 - z) up to truncation."""
    w = BivarTrunc((RPoly.zero(),) + (RPoly((0, 1)),) * 40, 40)
    assert bivar_eval(w, 0.25, 0.5) == pytest.approx(0.5 * 0.25 / 0.75)
    with pytest.raises(UsageError):
        BivarTrunc((RPoly((1,), "alpha"),), 0)
    with pytest.raises(RangeError):
        w.coeff_z(41)


def test_json_helpers_restore_exact_values():
    cs = (F(1), F(-2, 3), F(0))
    assert coeffs_from_json(coeffs_to_json(cs)) == cs
    p = RPoly((0, F(1, 3)), "alpha")
    assert poly_from_json(poly_to_json(p)) == p
    s = series_from((1, F(1, 2)), 3)
    assert series_from_json(series_to_json(s)) == s
    assert coeffs_to_json(cs) == '["1", "-2/3", "0"]'


def _random_fraction(rnd):
    return F(rnd.randint(-9, 9), rnd.randint(1, 6))


def _random_series(rnd, order, constant=None):
    cs = [_random_fraction(rnd) for _ in range(order + 1)]
    if constant is not None:
        cs[0] = F(constant)
    return series_from(cs, order)


def _random_poly(rnd):
    return RPoly(tuple(_random_fraction(rnd) for _ in range(rnd.randint(1, 5))))


@pytest.mark.parametrize("seed", range(8))
def test_series_ring_axioms(seed):
    rnd = random.Random(seed)
    a, b, c = (_random_series(rnd, 7) for _ in range(3))
    assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))
    assert series_mul(a, b) == series_mul(b, a)
    assert series_mul(a, series_add(b, c)) == series_add(series_mul(a, b), series_mul(a, c))
    assert series_mul(a, series_one(7)) == a


@pytest.mark.parametrize("seed", range(8))
def test_poly_ring_axioms(seed):
    rnd = random.Random(seed)
    p, q, r = (_random_poly(rnd) for _ in range(3))
    assert poly_mul(poly_mul(p, q), r) == poly_mul(p, poly_mul(q, r))
    assert poly_mul(p, poly_add(q, r)) == poly_add(poly_mul(p, q), poly_mul(p, r))


@pytest.mark.parametrize("seed", range(8))
def test_log_turns_products_into_sums(seed):
    rnd = random.Random(seed)
    a, b = _random_series(rnd, 9, constant=1), _random_series(rnd, 9, constant=1)
    assert series_log(series_mul(a, b)) == series_add(series_log(a), series_log(b))


@pytest.mark.parametrize("seed", range(8))
def test_division_undoes_multiplication(seed):
    rnd = random.Random(seed)
    a = _random_series(rnd, 9)
    b = _random_series(rnd, 9, constant=rnd.choice([-3, -1, 2, F(1, 2)]))
    assert series_mul(series_div(a, b), b) == a


def test_series_monomial():
    assert series_monomial(F(2, 3), 2, 4).coeffs == (0, 0, F(2, 3), 0, 0)
    assert series_monomial(5, 6, 4).is_zero()
