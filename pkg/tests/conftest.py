from fractions import Fraction

from hypothesis import settings, strategies as st

from padicde import CoeffField, LaurentSeries

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

Q2 = CoeffField.rationals(2)

small_rationals = st.builds(
    lambda num, den, e: Fraction(num, den) * Fraction(2) ** e,
    st.integers(-9, 9).filter(bool), st.integers(1, 9), st.integers(-2, 2))

log_radii = st.builds(Fraction, st.integers(1, 16), st.sampled_from([4, 8, 16]))


@st.composite
def exact_series(draw, field=Q2, lo=-4, hi=4):
    keys = draw(st.lists(st.integers(lo, hi), min_size=1, max_size=5, unique=True))
    return LaurentSeries(field, {k: field(draw(small_rationals)) for k in keys})
