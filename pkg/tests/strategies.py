"""Hypothesis strategies for random weighted shifts."""
from hypothesis import strategies as st

from dualeq2.lattice import OpExpr, ShiftMonomial
from dualeq2.polynomial import Poly

UNIMODULAR_2 = [None, [[1, 1], [0, 1]], [[0, 1], [1, 0]], [[1, 0], [-1, 1]], [[-1, 0], [0, 1]]]

small = st.integers(-2, 2)


@st.composite
def linear_poly(draw, d=2, lo=-2, hi=2):
    coeffs = [draw(st.integers(lo, hi)) for _ in range(d)]
    return Poly.linear(coeffs, draw(st.integers(lo, hi)))


@st.composite
def form(draw, d=2):
    p = draw(linear_poly(d))
    if draw(st.booleans()):
        i, j = draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1))
        p = p + Poly.var(d, i) * Poly.var(d, j) * draw(small)
    return p


@st.composite
def monomial(draw, d=2, matrices=UNIMODULAR_2):
    shift = [draw(small) for _ in range(d)]
    poly = draw(linear_poly(d)) if draw(st.booleans()) else Poly.const(d, draw(st.integers(1, 3)))
    if poly.is_zero():
        poly = Poly.const(d, 1)
    A = draw(st.sampled_from(matrices)) if d == 2 else None
    return ShiftMonomial(d, shift, poly, draw(form(d)), draw(form(d)), A)


@st.composite
def expr(draw, d=2, max_terms=2):
    n = draw(st.integers(1, max_terms))
    return OpExpr(d, [draw(monomial(d)) for _ in range(n)])


points = st.tuples(small, small)
