import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualeq2.lattice import (
    FiniteVector,
    NotInvertibleError,
    OpExpr,
    ShiftMonomial,
    StructuralError,
    adjoint,
    apply,
    compose,
    conjugate,
    embed_leg,
    equal_exact,
    exact_counterexample,
    flip,
    identity,
    inner,
    tensor,
)
from dualeq2.operators import generator
from dualeq2.polynomial import Poly
from dualeq2.scalars import Deformation, ExactScalar

from strategies import expr, monomial, points

D = Deformation(0.3 + 0.4j)
g = generator


def basis(*x):
    return FiniteVector.basis(x, exact=True)


def single(vec):
    (item,) = vec.to_dict().items()
    return item


def test_apply_examples():
    assert single(apply(g("v"), basis(0, 0))) == ((-1, 0), ExactScalar.one())
    assert single(apply(g("N"), basis(2, 3))) == ((2, 3), ExactScalar.rational(5))
    assert single(apply(g("b"), basis(0, 0))) == ((-1, -1), ExactScalar.one())
    vec = FiniteVector.from_dict(2, {(1, 2): ExactScalar.q_power(1), (0, -4): ExactScalar.zeta(2)},
                                 exact=True)
    assert apply(identity(2), vec).to_dict() == vec.to_dict()


def test_order_of_composition_shows_in_coefficient():
    vn = compose(g("v"), g("n"))
    nv = compose(g("n"), g("v"))
    assert single(apply(vn, basis(0, 0))) == ((-1, 1), ExactScalar.one())
    assert single(apply(nv, basis(0, 0))) == ((-1, 1), ExactScalar.q_power(-2))


def test_compose_cancellations():
    assert equal_exact(compose(g("v"), adjoint(g("v"))), identity(2), 1)
    assert equal_exact(compose(g("n_inv"), g("n")), identity(2))
    assert compose(g("n_inv"), g("n")) == identity(2)


def test_adjoint_examples():
    assert single(apply(adjoint(g("v")), basis(0, 0))) == ((1, 0), ExactScalar.one())
    assert adjoint(g("N")) == g("N")
    assert adjoint(adjoint(g("b"))) == g("b")


def test_equal_exact_examples():
    q2 = ExactScalar.q_power(4)
    assert equal_exact(compose(g("q_N"), g("b_inv")), compose(g("b_inv"), g("q_N")) * q2, 3)
    assert not equal_exact(g("v"), adjoint(g("v")))
    assert exact_counterexample(g("v"), adjoint(g("v"))) is not None


def test_equal_exact_rejects_float_coefficients():
    op = OpExpr(1, [ShiftMonomial(1, (1,), poly=Poly.const(1, 0.5 + 0j))])
    with pytest.raises(TypeError):
        equal_exact(op, op)


def test_embed_leg_examples():
    v1 = embed_leg(g("v"), [1], [2, 2])
    out = apply(v1, basis(0, 0, 5, 7))
    assert single(out) == ((-1, 0, 5, 7), ExactScalar.one())
    assert embed_leg(identity(2), [2], [2, 2]) == identity(4)


def test_embed_leg_errors():
    with pytest.raises(StructuralError):
        embed_leg(g("v"), [3], [2, 2])
    with pytest.raises(StructuralError):
        embed_leg(g("W"), [2, 1], [1, 1])
    with pytest.raises(StructuralError):
        embed_leg(g("v"), [1, 2], [2, 2])


def test_yhat_from_two_what_factors():
    wh = g("W_hat")
    four = [1, 1, 1, 1]
    built = compose(embed_leg(wh, [1, 3], four), embed_leg(wh, [1, 4], four))
    out = apply(built, basis(5, 1, 2, -1))
    assert single(out) == ((5 - 2 + 1, 1, 2, -1), ExactScalar.one())
    assert equal_exact(built, g("Y_hat"))


def test_conjugate_examples():
    P, v, n, ninv = g("P"), g("v"), g("n"), g("n_inv")
    vn = compose(v, n)
    lhs = conjugate(g("Z_hat"), tensor(vn, compose(compose(ninv, v), P)))
    rhs = tensor(compose(P, vn), compose(ninv, v))
    assert equal_exact(lhs, rhs)
    a = g("b_tilde")
    assert conjugate(identity(2), a) == a


def test_conjugate_requires_unitary():
    with pytest.raises(NotInvertibleError):
        conjugate(g("N"), g("v"))


def test_dimension_mismatch_is_structural():
    with pytest.raises(StructuralError):
        compose(g("v"), g("z"))
    with pytest.raises(StructuralError):
        apply(g("v"), FiniteVector.basis((0,), exact=True))


def test_float_and_exact_application_agree():
    op = compose(g("X_hat"), adjoint(g("Z_hat"))) + g("Y_hat") * ExactScalar.q_power(1, 3)
    e = basis(1, -2, 0, 3)
    exact = apply(op, e).to_float(D)
    flt = apply(op, e.to_float(D), D)
    assert (exact - flt).norm() < 1e-14


def test_flip_swaps_legs():
    out = apply(flip(2), basis(1, 2, 3, 4))
    assert single(out)[0] == (3, 4, 1, 2)


# -- properties ------------------------------------------------------------
@given(monomial(), monomial(), monomial(), points)
def test_composition_is_associative(a, b, c, x):
    a, b, c = (OpExpr(2, [m]) for m in (a, b, c))
    left = compose(a, compose(b, c))
    right = compose(compose(a, b), c)
    assert apply(left, basis(*x)).to_dict() == apply(right, basis(*x)).to_dict()


@given(expr(), expr())
def test_adjoint_is_antimultiplicative(a, b):
    assert equal_exact(adjoint(compose(a, b)), compose(adjoint(b), adjoint(a)))


@given(expr(), points, points)
def test_adjoint_matches_inner_product(a, x, y):
    ex, ey = FiniteVector.basis(x), FiniteVector.basis(y)
    lhs = inner(apply(adjoint(a), ex, D), ey)
    rhs = inner(ex, apply(a, ey, D))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@given(expr(), expr())
def test_leg_embedding_is_functorial(a, b):
    legs, dims = [2], [1, 2, 2]
    lhs = embed_leg(compose(a, b), legs, dims)
    rhs = compose(embed_leg(a, legs, dims), embed_leg(b, legs, dims))
    assert lhs == rhs


@given(expr(), expr())
def test_disjoint_legs_commute(a, b):
    a1 = embed_leg(a, [1], [2, 2])
    b2 = embed_leg(b, [2], [2, 2])
    assert equal_exact(compose(a1, b2), compose(b2, a1), 2)


@given(monomial(), st.integers(-3, 3), st.integers(-3, 3))
def test_canonical_form_merges_like_terms(m, r1, r2):
    a = OpExpr(2, [m.with_poly(m.poly * r1), m.with_poly(m.poly * r2)])
    assert a == OpExpr(2, [m.with_poly(m.poly * (r1 + r2))])
