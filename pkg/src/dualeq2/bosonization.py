"""Semidirect-product unitary ``W_tilde`` on copies of ``H (x) H_L``.

One copy is the lattice ``Z^3`` with coordinates ``(p, i, j)``.  For two
copies the four legs are ``H, H_L, H, H_L`` and

    W_tilde = W_13 U_23 Vp_34^* F_hat_24 Vp_34

where ``Vp`` is ``V_hat_prime``.  With more copies, copy ``c`` occupies legs
``2c-1`` (``H``) and ``2c`` (``H_L``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .dual_group import (
    DualUnitaryHandle,
    ResidualReport,
    _err,
    apply_Fhat,
    describe,
    params_dict,
)
from .lattice import (
    FiniteVector,
    OpExpr,
    adjoint,
    apply,
    compose,
    embed_leg,
    equal_exact,
    exact_counterexample,
    identity,
    residual,
    tensor,
)
from .operators import H, HL, default_catalog, generator, relation_registry
from .qexp import QexpParams, apply_fq

COPY = (H, HL)
COPY_DIM = H + HL


def boson_catalog() -> dict[str, OpExpr]:
    """``u``, ``N'`` and ``b'`` on ``H (x) H_L`` together with ``q^{N'}``."""
    c = default_catalog()
    return {
        "u": c["u"],
        "N_prime": c["N_prime"],
        "b_prime": c["b_prime"],
        "b_prime_star": adjoint(c["b_prime"]),
        "q_N_prime": tensor(identity(H), c["q_N"]),
        "qbar_N_prime": adjoint(tensor(identity(H), c["q_N"])),
    }


@dataclass(frozen=True)
class WtildeHandle:
    """Parameters for ``W_tilde``.

    Attributes
    ----------
    params : QexpParams
    trivial : bool
        Drop the ``F_hat`` factor, leaving the exact shift ``W_13 U_23``.
    """

    params: QexpParams = field(default_factory=QexpParams)
    trivial: bool = False


def _copy_legs(a: int, b: int) -> tuple[int, int, int, int]:
    if not 1 <= a < b:
        raise ValueError("copies must satisfy 1 <= a < b")
    return (2 * a - 1, 2 * a, 2 * b - 1, 2 * b)


@lru_cache(maxsize=128)
def _factors(a: int, b: int, ncopies: int):
    dims = COPY * ncopies
    h1, l1, h2, l2 = _copy_legs(a, b)
    w = embed_leg(generator("W"), [h1, h2], dims)
    u = embed_leg(generator("U"), [l1, h2], dims)
    vp = embed_leg(generator("V_hat_prime"), [h2, l2], dims)
    return dims, (l1, l2), compose(w, u), vp


def _ncopies(vec: FiniteVector, ncopies) -> int:
    if ncopies is not None:
        return ncopies
    if vec.dim % COPY_DIM:
        raise ValueError("vector dimension is not a multiple of 3")
    return vec.dim // COPY_DIM


def apply_Wtilde(vec: FiniteVector, inverse: bool = False, handle: WtildeHandle | None = None,
                 copies: Sequence[int] = (1, 2), ncopies: int | None = None) -> FiniteVector:
    """Apply ``W_tilde`` (or its adjoint) on two copies of ``H (x) H_L``."""
    handle = handle or WtildeHandle()
    n = _ncopies(vec, ncopies)
    dims, fleg, wu, vp = _factors(int(copies[0]), int(copies[1]), n)
    d = handle.params.deform
    fh = DualUnitaryHandle(1.0, handle.params, trivial=handle.trivial)
    if not inverse:
        out = apply(vp, vec, d)
        out = apply_Fhat(out, False, fh, fleg, dims)
        out = apply(adjoint(vp), out, d)
        return apply(wu, out, d)
    out = apply(adjoint(wu), vec, d)
    out = apply(vp, out, d)
    out = apply_Fhat(out, True, fh, fleg, dims)
    return apply(adjoint(vp), out, d)


@lru_cache(maxsize=16)
def _rewritten_parts(ncopies: int):
    dims = COPY * ncopies
    P = generator("P")
    left = compose(compose(P, generator("b_inv")), generator("q_half_N_tilde"))
    right = compose(generator("q_half_N_tilde"), generator("b"))
    x = embed_leg(tensor(left, generator("P_prime"), right), [2, 3, 4], dims)
    y = embed_leg(generator("Y_hat"), [2, 4], dims)
    w = compose(embed_leg(generator("W"), [1, 3], dims), embed_leg(generator("U"), [2, 3], dims))
    return x, y, w


def apply_Wtilde_rewritten(vec: FiniteVector, params: QexpParams | None = None) -> FiniteVector:
    """``W_13 U_23 F_q(P b^-1 q^{Ñ/2} (x) P' (x) q^{Ñ/2} b)^*_{234} Y_hat_24`` on two copies."""
    params = params or QexpParams()
    x, y, w = _rewritten_parts(2)
    out = apply(y, vec, params.deform)
    out = apply_fq(x, out, params, adjoint=True)
    return apply(w, out, params.deform)


def ordinary_pentagon_residual(vec: FiniteVector, handle: WtildeHandle | None = None
                               ) -> ResidualReport:
    """``W23 W12`` against ``W12 W13 W23`` on three copies (``Z^9``)."""
    handle = handle or WtildeHandle()
    lhs = apply_Wtilde(apply_Wtilde(vec, False, handle, (1, 2)), False, handle, (2, 3))
    rhs = apply_Wtilde(vec, False, handle, (2, 3))
    rhs = apply_Wtilde(rhs, False, handle, (1, 3))
    rhs = apply_Wtilde(rhs, False, handle, (1, 2))
    name = "boson-pentagon" if not handle.trivial else "boson-pentagon-trivial"
    return ResidualReport(name, describe(vec), residual(lhs, rhs), _err(lhs, rhs),
                          params_dict(handle.params))


BOSON_GENERATORS = ("u", "N_prime", "b_prime", "b_prime_star")


def boson_comult_forms(gen: str) -> dict[str, OpExpr]:
    """Closed forms of ``W_tilde (g (x) 1) W_tilde^*`` on two copies.

    ``"stated"`` is the form with a bare ``(x) 1`` on the first term.
    For ``b'`` and ``b'^*`` a ``"corrected"`` form is added whose first term
    carries ``u^*`` (resp. ``u``) on the second copy: the ``U`` factor of
    ``W_tilde`` moves the second ``H`` leg by the ``j`` that ``b'`` lowers.
    """
    bc = boson_catalog()
    one = identity(COPY_DIM)
    u = bc["u"]
    if gen == "u":
        return {"stated": tensor(u, u)}
    if gen == "N_prime":
        return {"stated": tensor(bc["N_prime"], one) + tensor(one, bc["N_prime"])}
    if gen == "b_prime":
        second = tensor(bc["q_N_prime"], bc["b_prime"])
        return {"stated": tensor(bc["b_prime"], one) + second,
                "corrected": tensor(bc["b_prime"], adjoint(u)) + second}
    if gen == "b_prime_star":
        second = tensor(bc["qbar_N_prime"], bc["b_prime_star"])
        return {"stated": tensor(bc["b_prime_star"], one) + second,
                "corrected": tensor(bc["b_prime_star"], u) + second}
    raise ValueError(f"unknown generator {gen!r}; choose from {BOSON_GENERATORS}")


def boson_comult_check(gen: str, vec: FiniteVector, handle: WtildeHandle | None = None
                       ) -> ResidualReport:
    """``W_tilde (g (x) 1) W_tilde^* vec`` against the stated closed form on ``Z^6``.

    The report's ``extra`` holds the residual of the corrected form when
    one exists.
    """
    handle = handle or WtildeHandle()
    d = handle.params.deform
    forms = boson_comult_forms(gen)
    g = tensor(boson_catalog()[gen], identity(COPY_DIM))
    lhs = apply_Wtilde(apply(g, apply_Wtilde(vec, True, handle), d), False, handle)
    rhs = apply(forms["stated"], vec, d)
    extra = {}
    if "corrected" in forms:
        extra["corrected"] = residual(lhs, apply(forms["corrected"], vec, d))
    return ResidualReport(f"boson-comult-{gen.replace('_', '-')}", describe(vec),
                          residual(lhs, rhs), _err(lhs, rhs), params_dict(handle.params), extra)


@dataclass
class ExactReport:
    """Outcome of an exact identity check."""

    identity: str
    statement: str
    passed: bool
    counterexample: tuple | None = None
    expect_equal: bool = True

    def as_dict(self) -> dict:
        return {"identity": self.identity, "statement": self.statement, "passed": self.passed,
                "counterexample": list(self.counterexample) if self.counterexample else None}


BOSON_RELATIONS = ("boson-uN", "boson-ub", "boson-Nb", "boson-zj", "Vprime-N", "Vprime-b-tilde")


def boson_relations_check(catalog=None) -> list[ExactReport]:
    """Exact generator relations, plus the control ``ub' != b'u``."""
    recs = {r.name: r for r in relation_registry(catalog)}
    out = []
    for name in BOSON_RELATIONS:
        r = recs[name]
        cx = exact_counterexample(r.lhs, r.rhs, r.window)
        out.append(ExactReport(name, r.statement, cx is None, cx))
    bc = boson_catalog()
    cx = exact_counterexample(compose(bc["u"], bc["b_prime"]), compose(bc["b_prime"], bc["u"]))
    out.append(ExactReport("boson-ub-control", "ub'≠b'u", cx is not None, cx, expect_equal=False))
    return out


def spectrum_checks() -> dict[str, bool]:
    """Generator-level spectral conditions read off the monomial structure.

    ``N'`` must be diagonal with an integer-valued polynomial eigenvalue;
    ``b'^* b'`` must be diagonal with eigenvalue ``|q|^{2m}`` at each basis
    vector (equal even ``s`` and ``sbar`` exponents, unit polynomial), so
    ``|b'|`` has eigenvalues in ``|q|^Z``.
    """
    bc = boson_catalog()
    (n,) = bc["N_prime"].monomials
    n_ok = (n.is_translation() and not any(n.shift) and n.qform.is_zero()
            and n.qbarform.is_zero()
            and all(isinstance(c, int) for c in n.poly.terms.values()))
    (m,) = compose(bc["b_prime_star"], bc["b_prime"]).monomials
    b_ok = (m.is_translation() and not any(m.shift) and m.poly == 1 and m.qform == m.qbarform
            and all(c % 2 == 0 for c in m.qform.terms.values()))
    return {"N_prime_integer_diagonal": bool(n_ok), "abs_b_prime_in_q_powers": bool(b_ok)}


# -- generator-level projection ------------------------------------------------
_G_IMAGE = {"u": "u", "N'": None, "b'": None, "q^N'": "1", "1": "1", "u*": "u*"}

_COMULT_WORDS = {
    "u": [(("u",), ("u",))],
    "N'": [(("N'",), ("1",)), (("1",), ("N'",))],
    "b'": [(("b'",), ("1",)), (("q^N'",), ("b'",))],
}


def _g_word(word):
    out = []
    for s in word:
        img = _G_IMAGE[s]
        if img is None:
            return None
        if img != "1":
            out.append(img)
    return tuple(out) or ("1",)


def _coproduct_of(word):
    if word is None:
        return []
    (sym,) = word
    return sorted(_COMULT_WORDS[sym])


def projection_g_check() -> dict[str, bool]:
    """Substitution ``u -> u, N' -> 0, b' -> 0`` against the closed coproducts.

    Checks ``g(g(x)) = g(x)`` and ``(g (x) g) Delta(x) = Delta(g(x))`` for the
    three generators, with words in the generators as a tiny term algebra.
    """
    res = {}
    for x, terms in _COMULT_WORDS.items():
        gx = _g_word((x,))
        res[f"idempotent_{x}"] = gx is None or _g_word(gx) == gx
        image = []
        for left, right in terms:
            gl, gr = _g_word(left), _g_word(right)
            if gl is not None and gr is not None:
                image.append((gl, gr))
        res[f"coproduct_{x}"] = sorted(image) == _coproduct_of(gx)
    return res
