import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from strategies import scalars, series

from svoachar import (
    SQRT2,
    GridError,
    PrecisionError,
    QSeries,
    Scalar,
    format_series,
    invert,
    lagrange_coefficient,
    mul,
    power,
    rebase,
)
from svoachar.qseries import PrecisionPolicy, as_rational, resolve_terms, to_ticks


def test_as_rational_forms():
    assert as_rational("47/2") == Fraction(47, 2)
    assert as_rational("23.5") == Fraction(47, 2)
    assert as_rational(1.01) == Fraction(101, 100)
    assert as_rational(Fraction(4, 2)) == 2 and isinstance(as_rational(Fraction(4, 2)), int)
    with pytest.raises(TypeError):
        as_rational(True)


def test_grid():
    assert to_ticks(Fraction(-1, 48)) == -1
    assert to_ticks(Fraction(67, 48)) == 67
    with pytest.raises(GridError):
        to_ticks(Fraction(1, 5))


def test_scalar_field_ops():
    a = Scalar(3, 2)
    assert a * a.inverse() == 1
    assert a.conjugate() == Scalar(3, -2)
    assert a.norm() == 9 - 8
    assert SQRT2 * SQRT2 == 2
    assert (SQRT2 ** -2) == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        Scalar(0).inverse()


def test_scalar_sign_exact():
    # 1.4142... vs 1.4142: decided exactly
    assert Scalar(Fraction(-14142, 10000), 1).sign() == 1
    assert Scalar(Fraction(-14143, 10000), 1).sign() == -1
    assert Scalar(0, 0).sign() == 0
    assert SQRT2 > Fraction(7, 5) and SQRT2 < Fraction(3, 2)


@settings(max_examples=200, deadline=None)
@given(scalars)
def test_scalar_sign_matches_float(x):
    v = float(x.rat) + float(x.sqrt2) * math.sqrt(2)
    if abs(v) > 1e-9:
        assert x.sign() == (1 if v > 0 else -1)
    assert x.is_nonnegative() == (x.sign() >= 0)


@settings(max_examples=100, deadline=None)
@given(scalars)
def test_scalar_json_round_trip(x):
    assert Scalar.from_json(x.to_json()) == x


@settings(max_examples=100, deadline=None)
@given(series())
def test_series_json_round_trip(a):
    assert QSeries.from_json(a.to_json()) == a


def test_precision_is_enforced():
    a = QSeries.from_dict({0: 1, 1: 2}, prec_tick=96)
    assert a[1] == 2
    with pytest.raises(PrecisionError):
        a[2]
    b = QSeries.from_dict({-1: 1}, prec_tick=48)
    # q^-1 * O(q^2) is only known below q^1
    assert mul(a, b).prec_tick == 48


def test_exact_times_exact_stays_exact():
    a = QSeries.from_dict({0: 1, Fraction(1, 2): 1})
    assert mul(a, a) == QSeries.from_dict({0: 1, Fraction(1, 2): 2, 1: 1})
    assert mul(a, a).is_exact


def test_invert_exact_polynomial_needs_terms():
    a = QSeries.from_dict({0: 1, 1: -1})
    with pytest.raises(PrecisionError):
        invert(a)
    geo = invert(a, terms=48 * 5)
    assert [geo[n] for n in range(5)] == [1] * 5


def test_invert_monomial_is_exact():
    m = QSeries.monomial(Scalar(0, 2), 24)
    inv = invert(m)
    assert inv.is_exact and mul(m, inv) == QSeries.one()


def test_invert_with_sqrt2_coefficients():
    a = QSeries.from_dict({0: Scalar(1, 1), 1: Scalar(0, 3)}, prec_tick=48 * 6)
    assert mul(a, invert(a)).agrees_with(QSeries.one())


def test_power_negative():
    a = QSeries.from_dict({0: 1, 1: 1}, prec_tick=48 * 6)
    assert mul(power(a, -3), power(a, 3)).agrees_with(QSeries.one())


def test_format_series():
    a = QSeries.from_dict({-1: 1, 1: 4372, Fraction(3, 2): -2}, prec_tick=96)
    text = format_series(a)
    assert text.startswith("q^-1 + 4372*q")
    assert "O(q^2)" in text


def test_rebase_geometric():
    # 1/(1-p) in powers of phi = p is all ones
    F = invert(QSeries.from_dict({0: 1, Fraction(1, 2): -1}), terms=24 * 10)
    phi = QSeries.monomial(1, 24)
    assert rebase(F, phi, 8) == [Scalar(1)] * 9


def test_lagrange_inverse_function():
    # phi = p/(1+p): p = phi/(1-phi) so alpha_r = 1 for F = p
    phi = mul(QSeries.monomial(1, 24), invert(QSeries.from_dict({0: 1, Fraction(1, 2): 1}), 24 * 12))
    F = QSeries.monomial(1, 24, 24 * 12)
    for r in range(1, 10):
        assert lagrange_coefficient(F, phi, r) == 1


def test_rebase_rejects_bad_phi():
    with pytest.raises(ValueError):
        rebase(QSeries.one(), QSeries.one(), 3)


def test_env_precision(monkeypatch):
    monkeypatch.setenv("SVOA_TERMS", "3")
    assert PrecisionPolicy.from_env().default_terms == 3 * 48 + 1
    assert resolve_terms(None) == 8 * 48
    with pytest.raises(ValueError):
        PrecisionPolicy(0)
