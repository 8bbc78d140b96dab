from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualeq2.polynomial import Poly
from dualeq2.scalars import Deformation, DomainError, ExactScalar

D = Deformation(0.3 + 0.4j)


def test_deformation_rejects_outside_unit_disc():
    with pytest.raises(DomainError):
        Deformation(1.5)
    with pytest.raises(DomainError):
        Deformation(0)


def test_half_powers_use_principal_root():
    assert abs(D.s**2 - D.q) < 1e-15
    assert D.s.real > 0
    assert abs(D.power(2, 0) - D.q) < 1e-15
    assert abs(D.power(0, 2) - D.q.conjugate()) < 1e-15
    assert abs(D.power(2, -2) - D.zeta) < 1e-15


def test_exact_scalar_canonical_form():
    a = ExactScalar({(1, 0): Fraction(1, 2), (1, 0) if False else (2, 3): 0})
    assert a.terms == {(1, 0): Fraction(1, 2)}
    assert ExactScalar({(1, 1): 1}) + ExactScalar({(1, 1): -1}) == ExactScalar.zero()


def test_zeta_is_unimodular_exactly():
    z = ExactScalar.zeta(3)
    assert z * z.conj() == ExactScalar.one()
    assert z.terms == {(6, -6): 1}


def test_exact_scalar_rejects_floats():
    with pytest.raises(TypeError):
        ExactScalar({(0, 0): 0.5})


exps = st.integers(-200, 200)


@given(exps, exps, st.fractions(max_denominator=50).filter(lambda f: f != 0))
def test_float_evaluation_matches_exact(a, b, r):
    x = ExactScalar({(a, b): r})
    direct = float(r) * D.s**a * D.s.conjugate() ** b
    got = x.evaluate(D)
    assert abs(got - direct) <= 1e-12 * abs(direct)


@given(exps, exps, exps, exps)
def test_multiplication_adds_exponents(a1, b1, a2, b2):
    x, y = ExactScalar.q_power(a1, b1), ExactScalar.q_power(a2, b2)
    assert (x * y).terms == {(a1 + a2, b1 + b2): 1}
    assert x.conj().terms == {(b1, a1): 1}


def test_poly_substitution_and_embedding():
    i, j = Poly.var(2, 0), Poly.var(2, 1)
    p = i * j + i * 3 - 2
    # p(A x + s) with A swapping coordinates and s = (1, 0)
    q = p.substitute([[0, 1], [1, 0]], [1, 0])
    for x in [(0, 0), (2, -1), (-3, 4)]:
        assert q(x) == p((x[1] + 1, x[0]))
    e = p.embed([2, 0], 3)
    assert e((5, 7, 2)) == p((2, 5))


def test_poly_vectorised_evaluation():
    i, j = Poly.var(2, 0), Poly.var(2, 1)
    p = (i * j) * Fraction(1, 2) + j
    X = np.array([[1, 2], [-3, 3], [0, 0]])
    assert p.eval_int(X, 2).tolist() == [int(2 * p(x)) for x in X.tolist()]
    with pytest.raises(ValueError):
        p.eval_int(X, 1)
    assert np.allclose(p.eval_array(X), [float(p(x)) for x in X.tolist()])
