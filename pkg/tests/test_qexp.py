import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualeq2.lattice import FiniteVector, apply, identity, residual, tensor
from dualeq2.operators import generator
from dualeq2.qexp import (
    FiberDescriptor,
    QexpParams,
    apply_fq_shift_class,
    dense_oracle_fq,
    fiber_decompose,
    fiber_invariants,
    fq_array,
    fq_scalar,
    oracle_apply,
    power_index,
    symbol_row,
)
from dualeq2.scalars import DomainError

P = QexpParams(0.3 + 0.4j)
AQ = abs(P.q)

lam_points = st.builds(lambda m, th: AQ**m * cmath.exp(1j * th),
                       st.integers(-6, 6), st.floats(-math.pi, math.pi))


def e4(*x):
    return FiniteVector.basis(x)


def test_fq_special_values():
    assert fq_scalar(0, P) == 1
    assert fq_scalar(-1, P) == -1
    assert fq_scalar(-AQ**-4, P) == -1
    for m in (-3, 0, 2):
        assert abs(fq_scalar(AQ**m, P) - 1) < 1e-12


def test_fq_conjugation_example():
    lam = 1j * AQ
    assert abs(fq_scalar(lam.conjugate(), P) - fq_scalar(lam, P).conjugate()) < 1e-12


def test_fq_rejects_modulus_off_grid():
    with pytest.raises(DomainError):
        fq_scalar(0.7, P)
    with pytest.raises(DomainError):
        power_index(0.7, AQ)
    assert power_index(AQ**-3, AQ) == -3


@given(lam_points)
def test_fq_unimodular(lam):
    assert abs(abs(fq_scalar(lam, P)) - 1) < 1e-12


@given(lam_points)
def test_fq_conjugation_symmetry(lam):
    assert abs(fq_scalar(lam.conjugate(), P) - fq_scalar(lam, P).conjugate()) < 1e-12


@given(lam_points)
def test_fq_recurrence(lam):
    # removing the first factor of the product
    if abs(lam + 1) < 1e-9:
        return
    ratio = fq_scalar(lam, P) / fq_scalar(AQ**2 * lam, P)
    assert abs(ratio - (1 + lam.conjugate()) / (1 + lam)) < 1e-11


def test_fq_array_matches_scalar():
    lam = AQ ** np.arange(-4, 5) * np.exp(1j * np.linspace(-3, 3, 9))
    ref = [fq_scalar(x, P) for x in lam]
    assert np.allclose(fq_array(lam, P), ref, atol=1e-13)


def test_symbol_row_is_a_unit_vector():
    row = symbol_row(2, P)
    assert abs(np.linalg.norm(row.coeffs) - 1) < 1e-10
    assert row.error < 1e-8


# -- fibers ---------------------------------------------------------------
def test_fiber_examples():
    (f,) = fiber_decompose(e4(0, 0, 0, 0))
    assert f.key == (0, 0, 0) and f.t.tolist() == [0]
    (f,) = fiber_decompose(e4(1, 1, -1, -1))
    assert f.key == (0, 0, 0) and f.t.tolist() == [1]
    v = e4(0, 0, 0, 0) + e4(5, 0, 0, 0)
    assert sorted(f.key for f in fiber_decompose(v)) == [(0, 0, 0), (5, 0, 5)]
    assert fiber_decompose(FiniteVector.zero(4)) == []


@given(st.tuples(*[st.integers(-5, 5)] * 4))
def test_fiber_point_roundtrip(x):
    (f,) = fiber_decompose(e4(*x))
    assert tuple(f.point(f.t[0])) == x
    nxt = f.point(f.t[0] + 1)
    assert fiber_invariants(nxt[None, :]).tolist() == [list(f.key)]


# -- functional calculus ------------------------------------------------------
def test_zero_vector_maps_to_zero():
    assert len(apply_fq_shift_class(FiniteVector.zero(4), params=P)) == 0


def test_forward_and_adjoint_at_origin():
    v = e4(0, 0, 0, 0)
    out = apply_fq_shift_class(v, params=P)
    assert abs(out.norm() - 1) < 1e-8
    back = apply_fq_shift_class(out, "adjoint", params=P)
    assert residual(back, v) < 1e-8


def test_direction_validated():
    with pytest.raises(ValueError):
        apply_fq_shift_class(e4(0, 0, 0, 0), "sideways", params=P)


@given(st.tuples(*[st.integers(-3, 3)] * 4), st.sampled_from([1.0, 0.3 + 0.4j, -1.0, 2j]))
def test_unitary_on_basis_vectors(x, lam):
    out = apply_fq_shift_class(e4(*x), params=P, lam=lam)
    assert abs(out.norm() - 1) < 1e-8
    assert residual(apply_fq_shift_class(out, "adjoint", params=P, lam=lam), e4(*x)) < 1e-8


@given(st.tuples(*[st.integers(-3, 3)] * 4))
def test_fibers_are_preserved(x):
    out = apply_fq_shift_class(e4(*x), params=P)
    keys = {f.key for f in fiber_decompose(out)}
    assert keys == {f.key for f in fiber_decompose(e4(*x))}


@given(st.tuples(*[st.integers(-3, 3)] * 4))
def test_commutes_with_total_number(x):
    tot = tensor(generator("N"), identity(2)) + tensor(identity(2), generator("N"))
    v = e4(*x)
    d = P.deform
    a = apply(tot, apply_fq_shift_class(v, params=P), d)
    b = apply_fq_shift_class(apply(tot, v, d), params=P)
    assert residual(a, b) < 1e-10


# -- dense oracle -----------------------------------------------------------
def test_oracle_with_constant_function_is_identity():
    t, U = dense_oracle_fq(8, FiberDescriptor(0, 0, 0), P, func=lambda z: np.ones_like(z))
    assert np.allclose(U, np.eye(16), atol=1e-13)
    assert t.tolist() == list(range(-8, 8))


@pytest.mark.parametrize("c3", [-4, -1, 0, 2])
def test_oracle_is_unitary(c3):
    _, U = dense_oracle_fq(32, FiberDescriptor(1, -1, c3), P)
    assert np.max(np.abs(U.conj().T @ U - np.eye(64))) < 1e-12


def test_oracle_homomorphism():
    f = FiberDescriptor(0, 0, 0)
    _, A = dense_oracle_fq(16, f, P)
    _, B = dense_oracle_fq(16, f, P, func=lambda z: np.conj([fq_scalar(v, P) for v in z]))
    assert np.max(np.abs(B @ A - np.eye(32))) < 1e-10


def test_oracle_window_limit():
    with pytest.raises(ValueError):
        dense_oracle_fq(65, FiberDescriptor(0, 0, 0), P)


def test_oracle_agrees_at_origin():
    v = e4(0, 0, 0, 0)
    assert residual(oracle_apply(v, 32, P), apply_fq_shift_class(v, params=P)) < 1e-8
    assert residual(oracle_apply(v, 32, P, adjoint=True),
                    apply_fq_shift_class(v, "adjoint", params=P)) < 1e-8
