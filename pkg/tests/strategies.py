"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from svoachar import QSeries, Scalar

small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
scalars = st.builds(Scalar, small_fractions, small_fractions)
rational_scalars = st.builds(Scalar, small_fractions)


@st.composite
def series(draw, sqrt2=True, min_tick=st.integers(-96, 96), length=st.integers(0, 12),
           prec=st.one_of(st.none(), st.integers(0, 60))):
    """Truncated series with a random start, stride 24 or 48, and precision."""
    lo = draw(min_tick)
    step = draw(st.sampled_from([24, 48]))
    coeffs = draw(st.lists(scalars if sqrt2 else rational_scalars, min_size=draw(length),
                           max_size=12))
    d = {Fraction(lo + step * i, 48): c for i, c in enumerate(coeffs)}
    rel = draw(prec)
    return QSeries.from_dict(d, None if rel is None else lo + rel)


@st.composite
def unit_series(draw, min_tick=st.sampled_from([-48, -24, 0, 24, 48]), variable_step=24):
    """Series with an invertible rational leading term and finite precision."""
    lo = draw(min_tick)
    lead = draw(small_fractions.filter(bool))
    rest = draw(st.lists(small_fractions, min_size=0, max_size=10))
    d = {Fraction(lo, 48): lead}
    d.update({Fraction(lo + variable_step * (i + 1), 48): c for i, c in enumerate(rest)})
    return QSeries.from_dict(d, lo + variable_step * 12)


central_charges = st.integers(1, 96).map(lambda n: Fraction(n, 2))
