import pytest

from dualeq2.lattice import (
    FiniteVector,
    StructuralError,
    adjoint,
    apply,
    compose,
    equal_exact,
    identity,
    is_unitary,
    tensor,
)
from dualeq2.operators import (
    PRIMITIVES,
    UNITARIES,
    Q,
    ZETA,
    all_identities,
    build_catalog,
    default_catalog,
    embedding_j,
    generator,
    relation_registry,
)
from dualeq2.scalars import ExactScalar

g = generator


def single(vec):
    (item,) = vec.to_dict().items()
    return item


def test_xhat_action_at_origin():
    out = apply(g("X_hat"), FiniteVector.basis((0, 0, 0, 0), exact=True))
    assert single(out) == ((1, 1, -1, -1), ZETA.conj() * Q)


def test_zhat_phase():
    out = apply(g("Z_hat"), FiniteVector.basis((0, 1, 0, 1), exact=True))
    assert single(out) == ((0, 1, 0, 1), ZETA)


def test_n_tilde_offset():
    assert equal_exact(g("N") - g("N_tilde"), identity(2) * -2)


@pytest.mark.parametrize("x, target, coeff", [
    ((3, 5), (2, 5), ExactScalar.one()),
    ((2, 0), (2, 1), ExactScalar.q_power(4)),
])
def test_basic_actions(x, target, coeff):
    name = "v" if target[1] == x[1] else "n"
    out = apply(g(name), FiniteVector.basis(x, exact=True))
    assert single(out) == (target, coeff)


def test_w_and_u_shift_actions():
    assert single(apply(g("W"), FiniteVector.basis((2, 5), exact=True)))[0] == (2, 7)
    assert single(apply(g("U"), FiniteVector.basis((1, 3, 4), exact=True)))[0] == (1, 3, 7)


def test_embedding_j_on_generators():
    I2 = identity(2)
    assert equal_exact(embedding_j(2, g("N")), tensor(I2, g("N")))
    assert equal_exact(embedding_j(2, g("b_tilde")), tensor(g("P"), g("b_tilde")))
    assert embedding_j(1, I2) == identity(4)
    with pytest.raises(StructuralError):
        embedding_j(1, g("z"))


@pytest.mark.parametrize("name", UNITARIES)
def test_unitaries(name):
    assert is_unitary(g(name))


def test_xhat_is_normal_and_commutes_with_total_number():
    X = g("X_hat")
    assert equal_exact(compose(X, adjoint(X)), compose(adjoint(X), X))
    tot = tensor(g("N"), identity(2)) + tensor(identity(2), g("N"))
    assert equal_exact(compose(X, tot), compose(tot, X))


def test_registry_size_and_statements():
    recs = relation_registry()
    assert len(recs) >= 15
    names = [r.name for r in recs]
    assert len(set(names)) == len(names)
    assert all(r.statement for r in recs)
    assert {"Zhat-conj-vn", "Nb-comm", "identity-refl"} <= set(names)
    nb = next(r for r in recs if r.name == "Nb-comm")
    assert nb.statement == "Nb=b(N-2I)"
    assert len(all_identities()) > len(recs)


@pytest.mark.parametrize("rec", relation_registry(), ids=lambda r: r.name)
def test_registry_relation_holds(rec):
    assert rec.lhs.dim == rec.rhs.dim
    assert equal_exact(rec.lhs, rec.rhs, rec.window)


def test_catalog_is_cached_and_unperturbed():
    assert default_catalog() is default_catalog()
    assert not default_catalog().perturbed


def test_perturbation_is_detected():
    cat = build_catalog(perturb="b")
    assert cat.perturbed
    failures = [r.name for r in relation_registry(cat) if not equal_exact(r.lhs, r.rhs, r.window)]
    assert failures


def test_unknown_primitive_rejected():
    assert "X_hat_stated" in PRIMITIVES
    with pytest.raises(KeyError):
        build_catalog(perturb="no-such-op")
    with pytest.raises(KeyError):
        generator("no-such-op")
