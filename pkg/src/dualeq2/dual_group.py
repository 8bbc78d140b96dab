"""The unitary ``F_hat = F_q(X_hat)^* Y_hat`` and its identities.

Everything acts on float vectors over ``Z^{2n}`` (``n`` copies of ``H_L``);
leg numbers are 1-based copies of ``H_L``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .lattice import (
    FiniteVector,
    OpExpr,
    adjoint,
    apply,
    compose,
    embed_leg,
    identity,
    permute_legs,
    residual,
    tensor,
)
from .operators import HL, generator
from .qexp import QexpParams, apply_fq, power_index


@dataclass(frozen=True)
class DualUnitaryHandle:
    """``F_hat^lam = F_q(lam X_hat)^* Y_hat``.

    Attributes
    ----------
    lam : complex
        Zero or a number whose modulus is a power of ``|q|``; ``lam = 1``
        gives ``F_hat`` and ``lam = 0`` gives ``Y_hat``.
    params : QexpParams
    trivial : bool
        Replace the whole unitary by the identity (harness control).
    """

    lam: complex = 1.0
    params: QexpParams = field(default_factory=QexpParams)
    trivial: bool = False

    def __post_init__(self):
        lam = complex(self.lam)
        object.__setattr__(self, "lam", lam)
        if lam != 0:
            power_index(abs(lam), self.params.absq)

    def with_lam(self, lam: complex) -> "DualUnitaryHandle":
        return DualUnitaryHandle(lam, self.params, self.trivial)

    def with_params(self, params: QexpParams) -> "DualUnitaryHandle":
        return DualUnitaryHandle(self.lam, params, self.trivial)


@dataclass
class ResidualReport:
    """Outcome of one numerical identity check on one vector.

    Attributes
    ----------
    identity : str
    vector : list
        Support of the test vector (list of coordinate tuples).
    residual : float
        l2 norm of the difference of the two sides.
    error_estimate : float
        Sum of the truncation estimates carried by both sides.
    params : dict
    extra : dict
        Further named residuals (alternative readings, controls).
    """

    identity: str
    vector: list
    residual: float
    error_estimate: float
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def passed(self, tol: float) -> bool:
        return self.residual <= tol + self.error_estimate

    def as_dict(self) -> dict:
        return {
            "identity": self.identity,
            "vector": [list(map(int, v)) for v in self.vector],
            "residual": float(self.residual),
            "error_estimate": float(self.error_estimate),
            "extra": {k: float(v) for k, v in sorted(self.extra.items())},
        }


def describe(vec: FiniteVector) -> list:
    return [tuple(int(c) for c in row) for row in vec.coords]


def params_dict(params: QexpParams) -> dict:
    return {
        "q": [params.q.real, params.q.imag],
        "fourier_samples": params.fourier_samples,
        "coeff_cutoff": params.coeff_cutoff,
        "product_cutoff": params.product_cutoff,
    }


@lru_cache(maxsize=256)
def _legged(name: str, legs: tuple[int, ...], dims: tuple[int, ...]) -> OpExpr:
    return embed_leg(generator(name), list(legs), list(dims))


def _dims_for(vec: FiniteVector, dims) -> tuple[int, ...]:
    if dims is not None:
        return tuple(dims)
    if vec.dim % HL:
        raise ValueError("vector dimension is not a multiple of 2; pass dims")
    return (HL,) * (vec.dim // HL)


def apply_Fhat(vec: FiniteVector, inverse: bool = False,
               handle: DualUnitaryHandle | None = None, legs: Sequence[int] = (1, 2),
               dims: Sequence[int] | None = None) -> FiniteVector:
    """Apply ``F_hat^lam`` (or its adjoint) on the given pair of ``H_L`` legs."""
    handle = handle or DualUnitaryHandle()
    if handle.trivial:
        return vec
    dims = _dims_for(vec, dims)
    legs = tuple(legs)
    deform = handle.params.deform
    X = _legged("X_hat", legs, dims)
    Y = _legged("Y_hat", legs, dims)
    if not inverse:
        out = apply(Y, vec, deform)
        return apply_fq(X, out, handle.params, adjoint=True, lam=handle.lam)
    out = apply_fq(X, vec, handle.params, adjoint=False, lam=handle.lam)
    return apply(adjoint(Y), out, deform)


def _err(*vs: FiniteVector) -> float:
    return float(sum(v.error for v in vs))


def _psi_hat(dims=(HL, HL, HL)) -> OpExpr:
    return _legged("Psi_hat", (2, 3), tuple(dims))


def braided_pentagon_residual(vec: FiniteVector, handle: DualUnitaryHandle | None = None
                              ) -> ResidualReport:
    """``F23 F12`` against ``F12 Psi23 F12 Psi23^* F23`` on ``Z^6``."""
    handle = handle or DualUnitaryHandle()
    d = handle.params.deform
    psi = _psi_hat()
    lhs = apply_Fhat(apply_Fhat(vec, False, handle, (1, 2)), False, handle, (2, 3))
    r = apply_Fhat(vec, False, handle, (2, 3))
    r = apply(adjoint(psi), r, d)
    r = apply_Fhat(r, False, handle, (1, 2))
    r = apply(psi, r, d)
    rhs = apply_Fhat(r, False, handle, (1, 2))
    return ResidualReport("braided-pentagon", describe(vec), residual(lhs, rhs), _err(lhs, rhs),
                          params_dict(handle.params))


COMULT_GENERATORS = ("N", "b_tilde", "b_tilde_star")


def comult_closed_form(gen: str) -> OpExpr:
    """Closed form of ``F_hat (g (x) 1) F_hat^*`` stated for each generator."""
    I2 = identity(HL)
    if gen == "N":
        return tensor(generator("N"), I2) + tensor(I2, generator("N"))
    bt = tensor(generator("b_tilde"), I2) + tensor(
        compose(generator("q_N"), generator("P")), generator("b_tilde"))
    if gen == "b_tilde":
        return bt
    if gen == "b_tilde_star":
        return adjoint(bt)
    raise ValueError(f"unknown generator {gen!r}; choose from {COMULT_GENERATORS}")


def comult_check(gen: str, vec: FiniteVector, handle: DualUnitaryHandle | None = None
                 ) -> ResidualReport:
    """``F_hat (g (x) 1) F_hat^* vec`` against the closed form on ``Z^4``."""
    handle = handle or DualUnitaryHandle()
    d = handle.params.deform
    closed = comult_closed_form(gen)
    g = tensor(generator(gen), identity(HL))
    lhs = apply_Fhat(apply(g, apply_Fhat(vec, True, handle), d), False, handle)
    rhs = apply(closed, vec, d)
    return ResidualReport(f"comult-{gen.replace('_', '-')}", describe(vec), residual(lhs, rhs),
                          _err(lhs, rhs), params_dict(handle.params))


MIDDLE_LEGS = ("P_star", "P")


def slice_operator(middle: str = "P_star") -> OpExpr:
    """``P b^-1 q^{Ñ/2} (x) M (x) q^{Ñ/2} b`` with ``M`` either ``P^*`` or ``P``."""
    if middle not in MIDDLE_LEGS:
        raise ValueError(f"middle must be one of {MIDDLE_LEGS}")
    P = generator("P")
    mid = adjoint(P) if middle == "P_star" else P
    left = compose(compose(P, generator("b_inv")), generator("q_half_N_tilde"))
    right = compose(generator("q_half_N_tilde"), generator("b"))
    return tensor(left, mid, right)


def apply_slice_rhs(vec: FiniteVector, lam: complex, params: QexpParams,
                    middle: str = "P_star") -> FiniteVector:
    """``F_q(lam * slice_operator)^* Y_hat_13``."""
    y13 = _legged("Y_hat", (1, 3), (HL, HL, HL))
    out = apply(y13, vec, params.deform)
    return apply_fq(slice_operator(middle), out, params, adjoint=True, lam=lam)


def slice_lhs(vec: FiniteVector, lam: complex, handle: DualUnitaryHandle) -> FiniteVector:
    """``(F^lam)^*_12 F_23 F^lam_12 F^*_23`` applied to ``vec``."""
    hl = handle.with_lam(lam)
    h1 = handle.with_lam(1.0)
    out = apply_Fhat(vec, True, h1, (2, 3))
    out = apply_Fhat(out, False, hl, (1, 2))
    out = apply_Fhat(out, False, h1, (2, 3))
    return apply_Fhat(out, True, hl, (1, 2))


def slice_identity_residual(lam: complex, vec: FiniteVector,
                            handle: DualUnitaryHandle | None = None,
                            middle: str = "P_star") -> ResidualReport:
    """Four-factor product against ``S'(lam)``.

    ``middle`` selects the diagonal operator on the middle leg of ``S'``.
    The report's ``extra`` field also carries the residual against the
    conjugated form ``Psi_hat_23 F^lam_12 Psi_hat_23^*`` in both readings of
    the right-hand conjugator, and against ``Y_hat_13`` when ``lam = 0``.
    """
    handle = handle or DualUnitaryHandle()
    p = handle.params
    d = p.deform
    lhs = slice_lhs(vec, lam, handle)
    rhs = apply_slice_rhs(vec, lam, p, middle)
    extra = {}
    psi_hat = _psi_hat()
    hl = handle.with_lam(lam)
    for reading, right in (("psi_hat_star", adjoint(psi_hat)),
                           ("psi", _legged("Psi", (2, 3), (HL, HL, HL)))):
        alt = apply(psi_hat, apply_Fhat(apply(right, vec, d), False, hl, (1, 2)), d)
        extra[f"conjugated_{reading}"] = residual(lhs, alt)
    if lam == 0:
        extra["y13"] = residual(lhs, apply(_legged("Y_hat", (1, 3), (HL, HL, HL)), vec, d))
    name = "slice" if middle == "P_star" else "slice-middle-P"
    return ResidualReport(name, describe(vec), residual(lhs, rhs), _err(lhs, rhs),
                          {**params_dict(p), "lambda": [complex(lam).real, complex(lam).imag]},
                          extra)


def seeded_basis_vectors(count: int, dim: int, window: int, seed: int,
                         include_origin: bool = True) -> list[FiniteVector]:
    """Deterministic basis vectors with coordinates in ``[-window, window]``."""
    rng = np.random.default_rng(seed)
    out = []
    if include_origin and count:
        out.append(FiniteVector.basis((0,) * dim))
    while len(out) < count:
        out.append(FiniteVector.basis(tuple(rng.integers(-window, window + 1, size=dim))))
    return out
