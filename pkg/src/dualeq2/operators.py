"""Named operators on ``H = l2(Z)`` and ``H_L = l2(Z^2)`` and their identities.

Basis conventions: ``e_{ij}`` in ``H_L`` is the lattice point ``(i, j)``,
``e_p`` in ``H`` is ``(p,)``; tensor products concatenate coordinates.
``zeta = q / conj(q)`` and ``zeta**m`` is the exact term ``s^{2m} sbar^{-2m}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .lattice import (
    OpExpr,
    StructuralError,
    ShiftMonomial,
    adjoint,
    compose,
    compose_all,
    embed_leg,
    flip,
    identity,
    inverse,
    permute_legs,
    tensor,
)
from .polynomial import Poly
from .scalars import ExactScalar

HL = 2  # lattice dimension of H_L
H = 1  # lattice dimension of H

DEFAULT_PERTURBATION = Fraction(1001, 1000)

Q = ExactScalar.q_power(2)
ABS_Q = ExactScalar.q_power(1, 1)
ZETA = ExactScalar.zeta(1)


def _x(d: int, i: int) -> Poly:
    return Poly.var(d, i)


def _zeta_form(d: int, expo: Poly):
    """(qform, qbarform) for ``zeta**expo``."""
    return expo * 2, expo * -2


def _mono(d, shift=None, poly=None, qform=None, qbarform=None, matrix=None) -> OpExpr:
    return OpExpr(d, [ShiftMonomial(d, shift, poly, qform, qbarform, matrix)])


def _primitive_specs() -> dict[str, Callable[[], OpExpr]]:
    """Generators given directly by a basis action."""
    i, j = _x(HL, 0), _x(HL, 1)
    specs: dict[str, Callable[[], OpExpr]] = {
        # H_L
        "v": lambda: _mono(HL, (-1, 0)),
        "n": lambda: _mono(HL, (0, 1), qform=i * 2),
        "n_inv": lambda: _mono(HL, (0, -1), qform=i * -2),
        "N": lambda: _mono(HL, poly=i + j),
        "b": lambda: _mono(HL, (-1, -1), qform=j - i),
        "b_inv": lambda: _mono(HL, (1, 1), qform=i - j),
        "P": lambda: _mono(HL, None, None, *_zeta_form(HL, -j)),
        "q_half_N": lambda: _mono(HL, qform=i + j),
        "q_half_N_tilde": lambda: _mono(HL, qform=i + j + 2),
        "q_N": lambda: _mono(HL, qform=(i + j) * 2),
        "phase_b_tilde": lambda: _mono(HL, (-1, -1), qform=j, qbarform=-j),
        "modulus_b_tilde": lambda: _mono(HL, qform=j, qbarform=j),
        # H
        "z": lambda: _mono(H, (1,)),
        "P_prime": lambda: _mono(H, None, None, *_zeta_form(H, -_x(H, 0))),
        # H (x) H
        "W": lambda: _mono(2 * H, matrix=[[1, 0], [1, 1]]),
        # H_L (x) H : e_{ij} (x) e_k -> e_{ij} (x) e_{j+k}
        "U": lambda: _mono(HL + H, matrix=[[1, 0, 0], [0, 1, 0], [0, 1, 1]]),
        # H (x) H_L : zeta^{-p j}
        "V_hat_prime": lambda: _mono(
            H + HL, None, None, *_zeta_form(H + HL, -_x(3, 0) * _x(3, 2))),
        # H_L (x) H_L
        "Y_hat": lambda: _mono(
            2 * HL, matrix=[[1, 0, -1, -1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        "Z_hat": lambda: _mono(2 * HL, None, None, *_zeta_form(4, _x(4, 1) * _x(4, 3))),
        # zeta^{-j-1} q^{i+l+1} e_{i+1,j+1} (x) e_{k-1,l-1}
        "X_hat_stated": lambda: _stated_xhat(),
    }
    return specs


def _stated_xhat() -> OpExpr:
    i, j, l = _x(4, 0), _x(4, 1), _x(4, 3)
    zq, zb = _zeta_form(4, -j - 1)
    return _mono(4, (1, 1, -1, -1), qform=zq + (i + l + 1) * 2, qbarform=zb)


@dataclass(frozen=True)
class GeneratorCatalog:
    """Immutable mapping from generator names to operators.

    Attributes
    ----------
    ops : mapping of str to OpExpr
    legs : mapping of str to tuple of int
        Lattice dimension of each tensor leg the operator acts on.
    perturbed : str or None
        Name of the primitive whose polynomial was scaled (harness control).
    """

    ops: Mapping[str, OpExpr]
    legs: Mapping[str, tuple[int, ...]]
    perturbed: str | None = None

    def __getitem__(self, name: str) -> OpExpr:
        try:
            return self.ops[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}; known: {sorted(self.ops)}") from None

    def __contains__(self, name):
        return name in self.ops

    def names(self) -> list[str]:
        return sorted(self.ops)


PRIMITIVES = tuple(_primitive_specs())


def build_catalog(perturb: str | None = None,
                  factor: Fraction = DEFAULT_PERTURBATION) -> GeneratorCatalog:
    """Build every named operator.

    Parameters
    ----------
    perturb : str, optional
        Primitive generator whose coefficient is multiplied by ``factor``
        before anything is derived from it.
    """
    specs = _primitive_specs()
    if perturb is not None and perturb not in specs:
        raise KeyError(f"{perturb!r} is not a primitive generator")
    ops: dict[str, OpExpr] = {}
    for name, make in specs.items():
        op = make()
        if name == perturb:
            op = op * factor
        ops[name] = op
    legs: dict[str, tuple[int, ...]] = {
        **{k: (HL,) for k in ("v", "n", "n_inv", "N", "b", "b_inv", "P", "q_half_N",
                              "q_half_N_tilde", "q_N", "phase_b_tilde", "modulus_b_tilde")},
        "z": (H,), "P_prime": (H,), "W": (H, H), "U": (HL, H), "V_hat_prime": (H, HL),
        "Y_hat": (HL, HL), "Z_hat": (HL, HL), "X_hat_stated": (HL, HL),
    }

    def add(name, op, lg):
        ops[name] = op
        legs[name] = lg

    I2 = identity(HL)
    add("v_star", adjoint(ops["v"]), (HL,))
    add("N_tilde", ops["N"] + I2 * 2, (HL,))
    add("q_minus_half_N", inverse(ops["q_half_N"]), (HL,))
    add("b_tilde", compose(ops["q_half_N_tilde"], ops["b"]), (HL,))
    add("b_tilde_star", adjoint(ops["b_tilde"]), (HL,))
    add("z_star", adjoint(ops["z"]), (H,))
    sig_h = flip(H)
    sig_l = flip(HL)
    add("Sigma", sig_l, (HL, HL))
    add("W_hat", compose_all(sig_h, adjoint(ops["W"]), sig_h), (H, H))
    add("Z", compose_all(sig_l, adjoint(ops["Z_hat"]), sig_l), (HL, HL))
    add("Psi_hat", compose(ops["Z_hat"], sig_l), (HL, HL))
    add("Psi", compose(ops["Z"], sig_l), (HL, HL))
    left = compose_all(ops["P"], ops["b_inv"], ops["q_half_N_tilde"])
    right = compose(ops["q_half_N_tilde"], ops["b"])
    add("X_hat", tensor(left, right), (HL, HL))
    # bosonization generators on H (x) H_L
    vp = ops["V_hat_prime"]
    add("u", tensor(ops["z"], I2), (H, HL))
    add("N_prime", compose_all(adjoint(vp), tensor(identity(H), ops["N"]), vp), (H, HL))
    add("b_prime", compose_all(adjoint(vp), tensor(identity(H), ops["b_tilde"]), vp), (H, HL))
    return GeneratorCatalog(ops, legs, perturb)


_DEFAULT: GeneratorCatalog | None = None


def default_catalog() -> GeneratorCatalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = build_catalog()
    return _DEFAULT


def generator(name: str, catalog: GeneratorCatalog | None = None) -> OpExpr:
    """Named operator from the (default) catalog."""
    return (catalog or default_catalog())[name]


def embedding_j(which: int, gen: OpExpr, catalog: GeneratorCatalog | None = None) -> OpExpr:
    """``j1(g) = g (x) 1`` and ``j2(g) = Zhat (1 (x) g) Zhat^*`` on ``H_L (x) H_L``."""
    if gen.dim != HL:
        raise StructuralError(f"embedding_j needs an operator on H_L, got dimension {gen.dim}")
    if which == 1:
        return embed_leg(gen, [1], [HL, HL])
    if which == 2:
        zh = generator("Z_hat", catalog)
        return _sandwich(zh, embed_leg(gen, [2], [HL, HL]))
    raise ValueError("which must be 1 or 2")


def _sandwich(u: OpExpr, a: OpExpr) -> OpExpr:
    # u a u^* without the unitarity check, so perturbed catalogs still build
    return compose_all(u, a, adjoint(u))


@dataclass(frozen=True)
class IdentityRecord:
    """One operator identity.

    Attributes
    ----------
    name : str
    statement : str
        The identity written out, e.g. ``"Nb=b(N-2I)"``.
    mode : {"exact", "numeric"}
    lhs, rhs : OpExpr or None
        Present for exact records; numeric records are run by the suites.
    window : int or None
        Window override for the exact check.
    """

    name: str
    statement: str
    mode: str = "exact"
    lhs: OpExpr | None = field(default=None, repr=False, compare=False)
    rhs: OpExpr | None = field(default=None, repr=False, compare=False)
    window: int | None = None


UNITARIES = ("v", "P", "W", "W_hat", "U", "V_hat_prime", "Y_hat", "Z_hat", "Z", "P_prime",
             "phase_b_tilde", "z", "Sigma")


def relation_registry(catalog: GeneratorCatalog | None = None) -> list[IdentityRecord]:
    """Every exactly checkable identity among the catalog operators."""
    c = catalog or default_catalog()
    g = c.__getitem__
    I2, I4 = identity(HL), identity(2 * HL)
    t = tensor
    recs: list[IdentityRecord] = []

    def rec(name, statement, lhs, rhs, window=None):
        recs.append(IdentityRecord(name, statement, "exact", lhs, rhs, window))

    rec("identity-refl", "I=I", I2, I2)
    for u in UNITARIES:
        op = g(u)
        rec(f"unitary-{u}", f"{u} {u}*=I", compose(op, adjoint(op)), identity(op.dim))
        rec(f"isometry-{u}", f"{u}* {u}=I", compose(adjoint(op), op), identity(op.dim))
    rec("n-inverse", "n^-1 n=I", compose(g("n_inv"), g("n")), I2)
    rec("n-inverse-right", "n n^-1=I", compose(g("n"), g("n_inv")), I2)
    rec("b-inverse", "b b^-1=I", compose(g("b"), g("b_inv")), I2)
    rec("b-inverse-left", "b^-1 b=I", compose(g("b_inv"), g("b")), I2)
    rec("N-tilde", "N-Ñ=-2I", g("N") - g("N_tilde"), I2 * -2)
    rec("vnv*", "vnv*=qn", compose_all(g("v"), g("n"), g("v_star")), g("n") * Q)
    rec("q-half-N-squared", "q^{N/2}q^{N/2}=q^N", compose(g("q_half_N"), g("q_half_N")), g("q_N"))
    rec("q-half-N-tilde", "q^{Ñ/2}=q q^{N/2}", g("q_half_N_tilde"), g("q_half_N") * Q)
    vn = compose(g("v"), g("n"))
    ninv_v = compose(g("n_inv"), g("v"))
    rec("Zhat-conj-vn", "Ẑ(vn⊗n^-1vP)Ẑ*=Pvn⊗n^-1v",
        _sandwich(g("Z_hat"), t(vn, compose(ninv_v, g("P")))),
        t(compose(g("P"), vn), ninv_v))
    rec("Yhat-conj-Pvn", "Ŷ(Pvn⊗n^-1v)Ŷ*=Pv*n⊗q^2q^{N/2}b",
        _sandwich(g("Y_hat"), t(compose(g("P"), vn), ninv_v)),
        t(compose_all(g("P"), g("v_star"), g("n")),
          compose(g("q_half_N"), g("b")) * (Q * Q)))
    rec("ninv-v", "n^-1v=q^{-N/2}b", ninv_v, compose(g("q_minus_half_N"), g("b")))
    rec("vstar-n", "v*n=b^-1q^{N/2}", compose(g("v_star"), g("n")),
        compose(g("b_inv"), g("q_half_N")))
    rec("b-tilde-polar", "ph(b̃)|b̃|=b̃", compose(g("phase_b_tilde"), g("modulus_b_tilde")),
        g("b_tilde"))
    rec("b-tilde-star", "b̃*b̃=|q|^-2 b̃b̃*", compose(g("b_tilde_star"), g("b_tilde")),
        compose(g("b_tilde"), g("b_tilde_star")) * ExactScalar.q_power(-2, -2))
    rec("b-tilde-scaling", "ph(b̃)|b̃|ph(b̃)*=|q||b̃|",
        _sandwich(g("phase_b_tilde"), g("modulus_b_tilde")), g("modulus_b_tilde") * ABS_Q)
    rec("Zhat-conj-b", "Ẑ(1⊗q^{Ñ/2}b)Ẑ*=P⊗q^{Ñ/2}b",
        _sandwich(g("Z_hat"), t(I2, compose(g("q_half_N_tilde"), g("b")))),
        t(g("P"), compose(g("q_half_N_tilde"), g("b"))))
    rec("U-conj-b-tilde", "U(b̃⊗1)U*=b̃⊗z*",
        _sandwich(g("U"), t(g("b_tilde"), identity(H))), t(g("b_tilde"), g("z_star")))
    rec("qN-binv", "q^Nb^-1=q^2b^-1q^N", compose(g("q_N"), g("b_inv")),
        compose(g("b_inv"), g("q_N")) * (Q * Q))
    rec("Nb-comm", "Nb=b(N-2I)", compose(g("N"), g("b")), compose(g("b"), g("N") - I2 * 2))
    rec("Nbinv-comm", "Nb^-1=b^-1(N+2I)", compose(g("N"), g("b_inv")),
        compose(g("b_inv"), g("N") + I2 * 2))
    four = [H, H, H, H]
    wh = g("W_hat")
    rec("Yhat-WW", "Ŷ=Ŵ13Ŵ14", g("Y_hat"),
        compose(embed_leg(wh, [1, 3], four), embed_leg(wh, [1, 4], four)))
    rec("Xhat-built", "Pb^-1q^{Ñ/2}⊗q^{Ñ/2}b=X̂", g("X_hat"), g("X_hat_stated"), window=5)
    xh = g("X_hat")
    rec("Xhat-normal", "X̂X̂*=X̂*X̂", compose(xh, adjoint(xh)), compose(adjoint(xh), xh))
    ntot = t(g("N"), I2) + t(I2, g("N"))
    rec("Xhat-N-comm", "X̂(N⊗1+1⊗N)=(N⊗1+1⊗N)X̂", compose(xh, ntot), compose(ntot, xh))
    rec("Yhat-N", "Ŷ(N⊗1)Ŷ*=N⊗1+1⊗N", _sandwich(g("Y_hat"), t(g("N"), I2)), ntot)
    rec("Yhat-Zhat-comm", "ŶẐ=ẐŶ", compose(g("Y_hat"), g("Z_hat")),
        compose(g("Z_hat"), g("Y_hat")))
    rec("j2-N", "Ẑ(1⊗N)Ẑ*=1⊗N", embedding_j(2, g("N"), c), t(I2, g("N")))
    rec("j2-b-tilde", "Ẑ(1⊗b̃)Ẑ*=P⊗b̃", embedding_j(2, g("b_tilde"), c),
        t(g("P"), g("b_tilde")))
    i, j, k, l = (_x(4, n) for n in range(4))
    rec("Z-action", "Z e_ij⊗e_kl=ζ^{-jl}e_ij⊗e_kl", g("Z"),
        _mono(4, None, None, *_zeta_form(4, -j * l)))
    rec("braiding-readings", "Ψ̂*=ZΣ", adjoint(g("Psi_hat")), g("Psi"))
    rec("What-action", "Ŵe_a⊗e_b=e_{a-b}⊗e_b", g("W_hat"), _mono(2, matrix=[[1, -1], [0, 1]]))
    w3 = [H, H, H]
    W = g("W")
    rec("W-pentagon", "W23W12=W12W13W23",
        compose(embed_leg(W, [2, 3], w3), embed_leg(W, [1, 2], w3)),
        compose_all(embed_leg(W, [1, 2], w3), embed_leg(W, [1, 3], w3), embed_leg(W, [2, 3], w3)))
    rec("W-z", "W(z⊗1)W*=z⊗z", _sandwich(W, t(g("z"), identity(H))), t(g("z"), g("z")))
    vp = g("V_hat_prime")
    rec("Vprime-N", "V̂'*(1⊗N)V̂'=1⊗N", g("N_prime"), t(identity(H), g("N")))
    rec("Vprime-b-tilde", "V̂'*(1⊗b̃)V̂'=P'⊗b̃", g("b_prime"), t(g("P_prime"), g("b_tilde")))
    rec("Vprime-action", "V̂' e_p⊗e_ij=ζ^{-pj}e_p⊗e_ij", vp,
        _mono(3, None, None, *_zeta_form(3, -_x(3, 0) * _x(3, 2))))
    u, Np, bp = g("u"), g("N_prime"), g("b_prime")
    I3 = identity(H + HL)
    rec("boson-uN", "uN'=N'u", compose(u, Np), compose(Np, u))
    rec("boson-ub", "ub'=ζb'u", compose(u, bp), compose(bp, u) * ZETA)
    rec("boson-Nb", "N'b'=b'(N'-2I)", compose(Np, bp), compose(bp, Np - I3 * 2))
    rec("boson-zj", "j_T(z)j(b̃)=ζj(b̃)j_T(z)", compose(u, t(g("P_prime"), g("b_tilde"))),
        compose(t(g("P_prime"), g("b_tilde")), u) * ZETA)
    return recs


NUMERIC_IDENTITIES: tuple[IdentityRecord, ...] = (
    IdentityRecord("braided-pentagon", "F̂23F̂12=F̂12Ψ̂23F̂12Ψ̂23*F̂23", "numeric"),
    IdentityRecord("comult-N", "Δ̂(N)=N⊗1∔1⊗N", "numeric"),
    IdentityRecord("comult-b-tilde", "Δ̂(b̃)=b̃⊗1∔q^N P⊗b̃", "numeric"),
    IdentityRecord("comult-b-tilde-star", "Δ̂(b̃*)=b̃*⊗1∔(q^N P⊗b̃)*", "numeric"),
    IdentityRecord("slice", "(F̂^λ)*12F̂23F̂^λ12F̂*23=F_q(λPb^-1q^{Ñ/2}⊗P*⊗q^{Ñ/2}b)*Ŷ13",
                   "numeric"),
    IdentityRecord("boson-pentagon", "W̃23W̃12=W̃12W̃13W̃23", "numeric"),
    IdentityRecord("boson-comult-u", "Δ(u)=u⊗u", "numeric"),
    IdentityRecord("boson-comult-N-prime", "Δ(N')=N'⊗1∔1⊗N'", "numeric"),
    IdentityRecord("boson-comult-b-prime", "Δ(b')=b'⊗1∔q^{N'}⊗b'", "numeric"),
    IdentityRecord("boson-comult-b-prime-star", "Δ(b'*)=b'*⊗1∔q̄^{N'}⊗b'*", "numeric"),
)


def all_identities(catalog: GeneratorCatalog | None = None) -> list[IdentityRecord]:
    return relation_registry(catalog) + list(NUMERIC_IDENTITIES)


def stated_actions() -> dict[str, str]:
    """Basis actions the catalog is built from, as readable strings."""
    return {
        "v": "e_ij -> e_{i-1,j}",
        "n": "e_ij -> q^i e_{i,j+1}",
        "n_inv": "e_ij -> q^-i e_{i,j-1}",
        "N": "e_ij -> (i+j) e_ij",
        "b": "e_ij -> q^{(j-i)/2} e_{i-1,j-1}",
        "b_inv": "e_ij -> q^{-(j-i)/2} e_{i+1,j+1}",
        "P": "e_ij -> zeta^-j e_ij",
        "b_tilde": "e_ij -> q^j e_{i-1,j-1}",
        "X_hat": "e_ij⊗e_kl -> zeta^{-j-1} q^{i+l+1} e_{i+1,j+1}⊗e_{k-1,l-1}",
        "Y_hat": "e_ij⊗e_kl -> e_{i-k-l,j}⊗e_kl",
        "Z_hat": "e_ij⊗e_kl -> zeta^{jl} e_ij⊗e_kl",
        "W": "e_p⊗e_k -> e_p⊗e_{k+p}",
        "U": "e_ij⊗e_k -> e_ij⊗e_{j+k}",
        "V_hat_prime": "e_p⊗e_ij -> zeta^{-pj} e_p⊗e_ij",
        "P_prime": "e_p -> zeta^-p e_p",
        "z": "e_p -> e_{p+1}",
    }
