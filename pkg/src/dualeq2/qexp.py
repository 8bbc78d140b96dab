"""Quantum exponential ``F_q`` and its functional calculus on weighted shifts.

For a translation monomial ``T e_x = w(x) e_{x+delta}`` whose modulus
``|w|`` is constant along each orbit ``x + Z*delta``, ``T`` restricted to
an orbit is ``r * U`` with ``U`` a unitary weighted shift.  Writing the
Fourier series ``F_q(r e^{i theta}) = sum_m Phi_m(r) e^{i m theta}`` gives

    F_q(T) = sum_m Phi_m(r) U^m

and ``U^m`` has a closed-form phase when the exponent forms of ``w`` are
affine.  The coefficients come from an FFT of ``F_q`` on the circle of
radius ``r``; the sampling error is estimated by doubling the sample count.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .lattice import FiniteVector, OpExpr, ShiftMonomial, as_expr
from .scalars import Deformation, DomainError

LOG_TOL = 1e-9


@dataclass(frozen=True)
class QexpParams:
    """Numerical parameters of the functional calculus.

    Attributes
    ----------
    q : complex
        Deformation parameter, ``0 < |q| < 1``.
    product_cutoff : int or None
        Number of product factors; ``None`` picks it per argument so the
        tail is below 1e-16.
    fourier_samples : int
        FFT length ``M`` (power of two, at least 64).
    coeff_cutoff : float
        Fourier coefficients with modulus at most this are dropped; their
        l1 mass enters the error estimate.
    """

    q: complex = 0.3 + 0.4j
    product_cutoff: int | None = None
    fourier_samples: int = 4096
    coeff_cutoff: float = 1e-15

    def __post_init__(self):
        object.__setattr__(self, "q", complex(self.q))
        Deformation(self.q)
        M = self.fourier_samples
        if M < 64 or M & (M - 1):
            raise ValueError(f"fourier_samples must be a power of two >= 64, got {M}")
        if not self.coeff_cutoff > 0:
            raise ValueError("coeff_cutoff must be positive")
        if self.product_cutoff is not None and self.product_cutoff < 1:
            raise ValueError("product_cutoff must be positive")

    @property
    def deform(self) -> Deformation:
        return Deformation(self.q)

    @property
    def absq(self) -> float:
        return abs(self.q)

    @property
    def drop(self) -> float:
        """Vector entries at or below this modulus are discarded."""
        return self.coeff_cutoff * 1e-3

    def with_samples(self, M: int) -> "QexpParams":
        return QexpParams(self.q, self.product_cutoff, M, self.coeff_cutoff)

    def cutoff_for(self, r: float) -> int:
        if self.product_cutoff is not None:
            return self.product_cutoff
        a = self.absq
        need = math.log(1e-17 * (1 - a * a) / (1 + r)) / (2 * math.log(a))
        return max(1, math.ceil(need))


def power_index(modulus: float, absq: float) -> int:
    """Integer ``m`` with ``modulus = absq**m``; raises off the lattice of powers."""
    m = math.log(modulus) / math.log(absq)
    k = round(m)
    if abs(m - k) > LOG_TOL:
        raise DomainError(f"|lambda| = {modulus:.17g} is not an integer power of |q| = {absq}")
    return int(k)


def fq_scalar(lam: complex, params: QexpParams | None = None) -> complex:
    """``F_q(lam) = prod_k (1 + |q|^{2k} conj(lam)) / (1 + |q|^{2k} lam)``.

    Parameters
    ----------
    lam : complex
        Zero or a complex number whose modulus is an integer power of ``|q|``.

    Returns
    -------
    complex
        A unimodular number; exactly ``-1`` on ``{-|q|^{-2k} : k >= 0}``.

    Raises
    ------
    DomainError
        When ``|lam|`` is not a power of ``|q|``.
    """
    params = params or QexpParams()
    lam = complex(lam)
    if lam == 0:
        return 1.0 + 0j
    m = power_index(abs(lam), params.absq)
    if m <= 0 and m % 2 == 0 and abs(abs(cmath.phase(lam)) - math.pi) < 1e-12:
        return -1.0 + 0j
    K = params.cutoff_for(abs(lam))
    return complex(_kernels.fq_product(np.array([lam]), params.absq, K)[0])


def fq_array(lam: np.ndarray, params: QexpParams) -> np.ndarray:
    """Vectorised ``F_q`` on points of one circle (no domain check)."""
    lam = np.asarray(lam, dtype=np.complex128)
    r = float(np.max(np.abs(lam), initial=0.0))
    return _kernels.fq_product(lam, params.absq, params.cutoff_for(r))


# -- symbols -----------------------------------------------------------------
@dataclass(frozen=True)
class SymbolRow:
    """Fourier data of ``theta -> F_q(r e^{i theta})`` for one radius.

    Attributes
    ----------
    half_power : int
        ``r = |q|**(half_power / 2)``.
    ms, coeffs : arrays
        Indices and values of the retained coefficients, covering the full
        range where ``|Phi_m|`` exceeds the cutoff.
    tail : float
        l1 mass of the dropped coefficients.
    sampling_error : float
        l1 difference to the table computed with twice the samples.
    """

    half_power: int
    ms: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)
    tail: float
    sampling_error: float

    @property
    def error(self) -> float:
        return self.tail + self.sampling_error

    def parseval(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def _fourier_table(absq: float, half_power: int, M: int, params: QexpParams) -> np.ndarray:
    r = absq ** (half_power / 2)
    theta = 2 * np.pi * np.arange(M) / M
    return np.fft.fft(fq_array(r * np.exp(1j * theta), params)) / M


@lru_cache(maxsize=4096)
def _symbol_row(q: complex, M: int, eps: float, K, half_power: int) -> SymbolRow:
    params = QexpParams(q, K, M, eps)
    absq = abs(q)
    c = _fourier_table(absq, half_power, M, params)
    c2 = _fourier_table(absq, half_power, 2 * M, params)
    freqs = np.fft.fftfreq(M, 1.0 / M).astype(np.int64)
    freqs2 = np.fft.fftfreq(2 * M, 1.0 / (2 * M)).astype(np.int64)
    big = np.abs(c) > eps
    lo, hi = int(freqs[big].min()), int(freqs[big].max())
    ms = np.arange(lo, hi + 1, dtype=np.int64)
    coeffs = c[ms % M]
    keep = np.abs(coeffs) > eps
    tail = float(np.sum(np.abs(c)) - np.sum(np.abs(coeffs[keep])))
    in_range = np.abs(freqs2) < M // 2
    diff = np.abs(c2[in_range] - c[freqs2[in_range] % M]).sum() + np.abs(c2[~in_range]).sum()
    return SymbolRow(half_power, ms[keep], coeffs[keep].copy(), max(tail, 0.0), float(diff))


def symbol_row(half_power: int, params: QexpParams) -> SymbolRow:
    """Cached Fourier data for radius ``|q|**(half_power/2)``."""
    return _symbol_row(params.q, params.fourier_samples, params.coeff_cutoff,
                       params.product_cutoff, int(half_power))


# -- functional calculus -----------------------------------------------------
@dataclass(frozen=True)
class ShiftClassData:
    """Orbit data of a translation monomial with affine exponent forms."""

    delta: np.ndarray
    e_lin: np.ndarray
    e_const: int
    d_lin: np.ndarray
    d_const: int
    d_step: int
    lam_power: int
    arg_lam: float


def shift_class_data(mono: ShiftMonomial, lam: complex, params: QexpParams) -> ShiftClassData:
    """Validate ``lam * mono`` for the functional calculus and extract its orbit data."""
    if not mono.is_translation():
        raise ValueError("functional calculus needs a pure translation")
    if not mono.poly.is_constant():
        raise ValueError("functional calculus needs a constant coefficient polynomial")
    if max(mono.qform.degree(), mono.qbarform.degree()) > 1:
        raise ValueError("functional calculus needs affine exponent forms")
    delta = np.array(mono.shift, dtype=np.int64)
    if not delta.any():
        raise ValueError("functional calculus needs a nonzero shift")
    d = mono.dim

    def lin(p):
        v = np.zeros(d, dtype=np.int64)
        for m, c in p.terms.items():
            if any(m):
                v[m.index(1)] = c
        return v, int(p.constant_value())

    a_lin, a0 = lin(mono.qform)
    b_lin, b0 = lin(mono.qbarform)
    e_lin, e0 = a_lin + b_lin, a0 + b0
    if int(e_lin @ delta) != 0:
        raise ValueError("modulus of the weight is not constant along orbits")
    c0 = complex(mono.poly.constant_value()) * complex(lam)
    lam_power = power_index(abs(c0), params.absq)
    d_lin = a_lin - b_lin
    return ShiftClassData(delta, e_lin, e0, d_lin, a0 - b0, int(d_lin @ delta),
                          lam_power, cmath.phase(c0))


def apply_fq(op: OpExpr | ShiftMonomial, vec: FiniteVector, params: QexpParams,
             adjoint: bool = False, lam: complex = 1.0,
             backend: str | None = None) -> FiniteVector:
    """Apply ``F_q(lam * op)`` (or its adjoint) to a float vector.

    Parameters
    ----------
    op : single-monomial OpExpr or ShiftMonomial
        Translation with constant polynomial and affine exponents whose
        modulus is constant along orbits.
    adjoint : bool
        Apply ``F_q(lam * op)^*`` instead.

    Returns
    -------
    FiniteVector
        Its ``error`` field adds the l2 bound from dropped coefficients,
        the doubled-sampling estimate and the dropped small entries.
    """
    op = as_expr(op)
    if len(op.monomials) != 1:
        raise ValueError("functional calculus needs a single monomial")
    if vec.exact:
        raise TypeError("functional calculus runs in float mode")
    if op.dim != vec.dim:
        raise ValueError("dimension mismatch")
    if lam == 0 or len(vec) == 0:
        return vec
    data = shift_class_data(op.monomials[0], lam, params)
    deform = params.deform
    E = vec.coords @ data.e_lin + data.e_const
    half = 2 * data.lam_power + E
    keys, grp = np.unique(half, return_inverse=True)
    ptr = [0]
    ms, cs = [], []
    err = 0.0
    for g, h in enumerate(keys):
        row = symbol_row(int(h), params)
        m, c = row.ms, row.coeffs
        if adjoint:
            m, c = -m[::-1], np.conj(c[::-1])
        ms.append(m)
        cs.append(c)
        ptr.append(ptr[-1] + len(m))
        err += float(np.linalg.norm(vec.values[grp == g])) * row.error
    Xo, Vo = _kernels.orbit_expand(
        vec.coords, vec.values, grp.ravel(), np.array(ptr), np.concatenate(ms),
        np.concatenate(cs), data.delta, data.d_lin, data.d_const, data.d_step,
        deform.theta_s, data.arg_lam, backend=backend)
    Xo, Vo = _kernels.coalesce(Xo, Vo, 0.0, backend=backend)
    out = FiniteVector(vec.dim, Xo, Vo, vec.error + err, canonical=True)
    return out.dropped(params.drop)


# -- fibers of X-hat -----------------------------------------------------------
@dataclass(frozen=True)
class FiberDescriptor:
    """Orbit class of ``X_hat`` on ``Z^4``.

    Attributes
    ----------
    c1, c2, c3 : int
        Invariants ``i-j``, ``k-l``, ``i+l`` of the shift
        ``(i,j,k,l) -> (i+1,j+1,k-1,l-1)``.
    t : array of int
        Orbit parameter ``t = j`` of the member points.
    rows : array of int
        Positions of the member points in the decomposed vector.
    """

    c1: int
    c2: int
    c3: int
    t: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64), compare=False)
    rows: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64), compare=False)

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.c1, self.c2, self.c3)

    @property
    def modulus_class(self) -> int:
        """``c`` with ``|X_hat| = |q|**c`` on the fiber."""
        return self.c3 + 1

    def point(self, t) -> np.ndarray:
        """Lattice points with orbit parameter ``t``."""
        t = np.asarray(t, dtype=np.int64)
        i = self.c1 + t
        l = self.c3 - i
        return np.stack([i, t, self.c2 + l, l], axis=-1)

    def gauge(self, t, zeta: complex) -> np.ndarray:
        """Diagonal phases ``zeta**(-t(t+1)/2)`` turning the fiber operator into ``q^c S``."""
        t = np.asarray(t, dtype=np.float64)
        return np.exp(-1j * cmath.phase(zeta) * t * (t + 1) / 2)


def fiber_invariants(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    return np.stack([X[:, 0] - X[:, 1], X[:, 2] - X[:, 3], X[:, 0] + X[:, 3]], axis=1)


def fiber_decompose(vec: FiniteVector) -> list[FiberDescriptor]:
    """Partition the support of a ``Z^4`` vector into ``X_hat`` fibers."""
    if vec.dim != 4:
        raise ValueError("fibers are defined on H_L (x) H_L (dimension 4)")
    if len(vec) == 0:
        return []
    inv = fiber_invariants(vec.coords)
    keys, grp = np.unique(inv, axis=0, return_inverse=True)
    grp = grp.ravel()
    out = []
    for g, (c1, c2, c3) in enumerate(keys):
        rows = np.flatnonzero(grp == g)
        out.append(FiberDescriptor(int(c1), int(c2), int(c3), vec.coords[rows, 1].copy(), rows))
    return out


def _xhat() -> OpExpr:
    from .operators import generator

    return generator("X_hat")


def apply_fq_shift_class(vec: FiniteVector, direction: str = "forward",
                         params: QexpParams | None = None, lam: complex = 1.0,
                         backend: str | None = None) -> FiniteVector:
    """``F_q(lam X_hat)`` (``direction="forward"``) or its adjoint on ``Z^4``."""
    if direction not in ("forward", "adjoint"):
        raise ValueError("direction must be 'forward' or 'adjoint'")
    return apply_fq(_xhat(), vec, params or QexpParams(), adjoint=direction == "adjoint",
                    lam=lam, backend=backend)


MAX_ORACLE_WINDOW = 64


def dense_oracle_fq(window: int, fiber: FiberDescriptor, params: QexpParams | None = None,
                    func: Callable[[np.ndarray], np.ndarray] | None = None,
                    lam: complex = 1.0, center: int = 0):
    """Dense matrix of ``f(lam X_hat)`` on a periodically wrapped fiber window.

    The fiber operator is ``lam q^c G S G^{-1}`` with ``S`` the shift
    ``t -> t+1`` and ``G`` the gauge of :meth:`FiberDescriptor.gauge`.  On
    ``2*window`` sites ``S`` is a circulant, diagonalised here by an explicit
    DFT matrix.

    Returns
    -------
    t : (2*window,) int array
        Orbit parameters ``center-window .. center+window-1``.
    matrix : (2*window, 2*window) complex array
    """
    if window > MAX_ORACLE_WINDOW:
        raise ValueError(f"oracle window {window} exceeds {MAX_ORACLE_WINDOW}")
    if window < 1:
        raise ValueError("oracle window must be positive")
    params = params or QexpParams()
    if func is None:
        func = lambda z: np.array([fq_scalar(v, params) for v in z])
    n = 2 * window
    t = np.arange(center - window, center + window, dtype=np.int64)
    k = np.arange(n)
    F = np.exp(2j * np.pi * np.outer(np.arange(n), k) / n) / math.sqrt(n)
    eig = complex(lam) * params.q ** fiber.modulus_class * np.exp(-2j * np.pi * k / n)
    core = F @ np.diag(func(eig)) @ F.conj().T
    g = fiber.gauge(t, params.deform.zeta)
    return t, (g[:, None] * core) * np.conj(g)[None, :]


def oracle_apply(vec: FiniteVector, window: int, params: QexpParams | None = None,
                 adjoint: bool = False, lam: complex = 1.0) -> FiniteVector:
    """Apply ``F_q(lam X_hat)`` fiber by fiber with the dense oracle."""
    params = params or QexpParams()
    coords, vals = [], []
    for fib in fiber_decompose(vec):
        center = int(round(float(np.mean(fib.t))))
        t, mat = dense_oracle_fq(window, fib, params, lam=lam, center=center)
        if adjoint:
            mat = mat.conj().T
        pos = fib.t - t[0]
        if pos.min() < 0 or pos.max() >= len(t):
            raise ValueError("fiber support does not fit in the oracle window")
        x = np.zeros(len(t), dtype=np.complex128)
        x[pos] = vec.values[fib.rows]
        coords.append(fib.point(t))
        vals.append(mat @ x)
    if not coords:
        return FiniteVector.zero(4)
    return FiniteVector(4, np.concatenate(coords), np.concatenate(vals))
