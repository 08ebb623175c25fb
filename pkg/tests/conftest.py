from fractions import Fraction

import hypothesis.strategies as st

from hodgeloci.series import SparseSeries


def fractions_st(max_num: int = 9, max_den: int = 5):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def exponent_st(nvars: int, max_deg: int):
    return st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars).map(tuple)


@st.composite
def series_st(draw, nvars: int = 2, max_deg: int = 3, max_terms: int = 4,
              truncation=None):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = draw(exponent_st(nvars, max_deg))
        terms[e] = draw(fractions_st())
    return SparseSeries(nvars, terms, truncation=truncation)
