"""Weighted shift operators on ``l2(Z^d)`` and finitely supported vectors.

A :class:`ShiftMonomial` maps the basis vector ``e_x`` to
``c(x) e_{A x + delta}`` where ``A`` is a unimodular integer matrix and

    c(x) = p(x) * s**L1(x) * sbar**L2(x)

with ``p`` a rational polynomial and ``L1``, ``L2`` integer polynomials
(``s`` is the principal square root of ``q``).  Plain translations have
``A = I``; leg swaps and maps such as ``e_p (x) e_k -> e_p (x) e_{k+p}``
use a non-trivial ``A``.  Quadratic exponents cover diagonal braiding
phases like ``zeta**(j*l)``.  The class is closed under composition,
adjoint and leg embedding, which is all the identity checks need.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .polynomial import Poly, common_denominator
from .scalars import Deformation, ExactScalar

Matrix = tuple[tuple[int, ...], ...]


class StructuralError(ValueError):
    """Dimension or leg mismatch between operands."""


class NotInvertibleError(ValueError):
    """Conjugating operator is not unitary within the shift class."""


# -- small integer linear algebra ----------------------------------------
def _identity_matrix(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def _normalize_matrix(A, d: int) -> Matrix | None:
    if A is None:
        return None
    A = tuple(tuple(int(v) for v in row) for row in A)
    if len(A) != d or any(len(r) != d for r in A):
        raise StructuralError(f"matrix must be {d}x{d}")
    return None if A == _identity_matrix(d) else A


def _matmul(A: Matrix | None, B: Matrix | None, d: int) -> Matrix | None:
    if A is None:
        return B
    if B is None:
        return A
    prod = np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)
    return _normalize_matrix(prod.tolist(), d)


def _matvec(A: Matrix | None, v: Sequence[int]) -> tuple[int, ...]:
    if A is None:
        return tuple(int(x) for x in v)
    return tuple(int(sum(a * x for a, x in zip(row, v))) for row in A)


def _inverse(A: Matrix | None, d: int) -> Matrix | None:
    if A is None:
        return None
    M = np.array(A, dtype=np.int64)
    inv = np.rint(np.linalg.inv(M.astype(np.float64))).astype(np.int64)
    if not np.array_equal(M @ inv, np.eye(d, dtype=np.int64)):
        raise NotInvertibleError("lattice map is not unimodular")
    return _normalize_matrix(inv.tolist(), d)


# -- monomials -------------------------------------------------------------
def _as_form(f, d: int) -> Poly:
    if f is None:
        return Poly(d)
    if isinstance(f, Poly):
        p = f
    elif isinstance(f, Number):
        p = Poly.const(d, f)
    else:
        f = list(f)
        p = Poly.linear(f[:d], f[d] if len(f) > d else 0)
    if p.nvars != d:
        raise StructuralError("exponent form has the wrong number of variables")
    for c in p.terms.values():
        if not isinstance(c, int):
            raise TypeError("exponent forms need integer coefficients")
    return p


def _as_poly(p, d: int) -> Poly:
    if p is None:
        return Poly.const(d, 1)
    if isinstance(p, Poly):
        if p.nvars != d:
            raise StructuralError("coefficient polynomial has the wrong number of variables")
        return p
    return Poly.const(d, p)


class ShiftMonomial:
    """``e_x -> p(x) s^{L1(x)} sbar^{L2(x)} e_{A x + shift}``.

    Parameters
    ----------
    dim : int
        Lattice dimension ``d``.
    shift : sequence of int, optional
        Translation ``delta``; defaults to zero.
    poly : Poly or number, optional
        Polynomial prefactor; defaults to 1.
    qform, qbarform : Poly or sequence, optional
        Exponents of ``s`` and ``sbar``.  A sequence is read as linear
        coefficients followed by an optional constant.
    matrix : sequence of sequences, optional
        Unimodular linear part; ``None`` means the identity.
    """

    __slots__ = ("dim", "shift", "poly", "qform", "qbarform", "matrix", "_key")

    def __init__(self, dim, shift=None, poly=None, qform=None, qbarform=None, matrix=None):
        self.dim = int(dim)
        self.shift = tuple(int(v) for v in (shift if shift is not None else (0,) * self.dim))
        if len(self.shift) != self.dim:
            raise StructuralError("shift length differs from the dimension")
        self.poly = _as_poly(poly, self.dim)
        self.qform = _as_form(qform, self.dim)
        self.qbarform = _as_form(qbarform, self.dim)
        self.matrix = _normalize_matrix(matrix, self.dim)
        self._key = None

    @property
    def map_key(self):
        return (self.matrix, self.shift)

    @property
    def coeff_key(self):
        return (self.qform.key, self.qbarform.key)

    @property
    def key(self):
        if self._key is None:
            self._key = (self.map_key, self.coeff_key, self.poly.key)
        return self._key

    def __eq__(self, other):
        return isinstance(other, ShiftMonomial) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = [f"shift={self.shift}"]
        if self.matrix is not None:
            parts.append(f"A={self.matrix}")
        parts.append(f"p={self.poly}")
        if not self.qform.is_zero():
            parts.append(f"s^({self.qform})")
        if not self.qbarform.is_zero():
            parts.append(f"sbar^({self.qbarform})")
        return "ShiftMonomial(" + ", ".join(parts) + ")"

    # -- structure ---------------------------------------------------------
    def is_translation(self) -> bool:
        return self.matrix is None

    def is_exact(self) -> bool:
        return self.poly.is_exact()

    def degree(self) -> int:
        """Largest single-variable degree among the coefficient data."""
        return max(self.poly.max_var_degree(), self.qform.max_var_degree(),
                   self.qbarform.max_var_degree())

    def with_poly(self, poly: Poly) -> "ShiftMonomial":
        return ShiftMonomial(self.dim, self.shift, poly, self.qform, self.qbarform, self.matrix)

    # -- evaluation --------------------------------------------------------
    def target(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        Y = X if self.matrix is None else X @ np.array(self.matrix, dtype=np.int64).T
        return Y + np.array(self.shift, dtype=np.int64)

    def coefficient_exact(self, x: Sequence[int]) -> ExactScalar:
        r = Fraction(self.poly(x))
        return ExactScalar({(self.qform(x), self.qbarform(x)): r})

    def coefficient_array(self, X: np.ndarray, deform: Deformation) -> np.ndarray:
        p = self.poly.eval_array(X)
        a = self.qform.eval_int(X)
        b = self.qbarform.eval_int(X)
        return p * deform.power(a, b)

    # -- algebra -----------------------------------------------------------
    def compose(self, inner: "ShiftMonomial") -> "ShiftMonomial":
        """``self`` after ``inner``."""
        if inner.dim != self.dim:
            raise StructuralError("dimension mismatch in composition")
        d = self.dim
        A_in = inner.matrix
        sub = lambda f: f.substitute(A_in, inner.shift)
        return ShiftMonomial(
            d,
            shift=tuple(a + b for a, b in zip(_matvec(self.matrix, inner.shift), self.shift)),
            poly=inner.poly * sub(self.poly),
            qform=inner.qform + sub(self.qform),
            qbarform=inner.qbarform + sub(self.qbarform),
            matrix=_matmul(self.matrix, A_in, d),
        )

    def adjoint(self) -> "ShiftMonomial":
        d = self.dim
        Ainv = _inverse(self.matrix, d)
        back = tuple(-v for v in _matvec(Ainv, self.shift))
        sub = lambda f: f.substitute(Ainv, back)
        return ShiftMonomial(
            d,
            shift=back,
            poly=sub(self.poly.conj()),
            qform=sub(self.qbarform),
            qbarform=sub(self.qform),
            matrix=Ainv,
        )

    def inverse(self) -> "ShiftMonomial":
        """Two-sided inverse; needs a constant nonzero polynomial."""
        if not self.poly.is_constant() or self.poly.is_zero():
            raise NotInvertibleError("only monomials with constant coefficient polynomial invert")
        d = self.dim
        Ainv = _inverse(self.matrix, d)
        back = tuple(-v for v in _matvec(Ainv, self.shift))
        c = self.poly.constant_value()
        c = Fraction(1) / Fraction(c) if isinstance(c, Rational) else 1 / c
        sub = lambda f: -f.substitute(Ainv, back)
        return ShiftMonomial(d, shift=back, poly=c, qform=sub(self.qform),
                             qbarform=sub(self.qbarform), matrix=Ainv)

    def embed(self, var_map: Sequence[int], dim: int) -> "ShiftMonomial":
        shift = [0] * dim
        for i, v in enumerate(var_map):
            shift[v] = self.shift[i]
        A = None
        if self.matrix is not None:
            A = [list(r) for r in _identity_matrix(dim)]
            for r, vr in enumerate(var_map):
                for c, vc in enumerate(var_map):
                    A[vr][vc] = self.matrix[r][c]
        return ShiftMonomial(
            dim,
            shift=shift,
            poly=self.poly.embed(var_map, dim),
            qform=self.qform.embed(var_map, dim),
            qbarform=self.qbarform.embed(var_map, dim),
            matrix=A,
        )


# -- expressions -----------------------------------------------------------
class OpExpr:
    """Finite sum of :class:`ShiftMonomial` on a fixed lattice ``Z^dim``.

    Summands with the same lattice map and exponent forms are merged by
    adding their polynomials, so the canonical form is unique for a given
    set of (map, forms) classes.
    """

    __slots__ = ("dim", "monomials", "_key")

    def __init__(self, dim: int, monomials: Iterable[ShiftMonomial] = ()):
        self.dim = int(dim)
        groups: dict = {}
        proto: dict = {}
        for m in monomials:
            if m.dim != self.dim:
                raise StructuralError(f"monomial of dimension {m.dim} in a {self.dim}-dim expression")
            k = (m.map_key, m.coeff_key)
            groups[k] = groups[k] + m.poly if k in groups else m.poly
            proto.setdefault(k, m)
        mons = [proto[k].with_poly(p) for k, p in groups.items() if not p.is_zero()]
        mons.sort(key=lambda m: repr(m.key))
        self.monomials = tuple(mons)
        self._key = None

    @classmethod
    def of(cls, *monomials: ShiftMonomial) -> "OpExpr":
        return cls(monomials[0].dim, monomials)

    @property
    def key(self):
        if self._key is None:
            self._key = (self.dim, tuple(m.key for m in self.monomials))
        return self._key

    def __eq__(self, other):
        """Structural equality of canonical forms (see :func:`equal_exact`)."""
        return isinstance(other, OpExpr) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"OpExpr(dim={self.dim}, " + " + ".join(map(repr, self.monomials)) + ")"

    def __len__(self):
        return len(self.monomials)

    def is_exact(self) -> bool:
        return all(m.is_exact() for m in self.monomials)

    def degree(self) -> int:
        return max((m.degree() for m in self.monomials), default=0)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "OpExpr") -> "OpExpr":
        _check_dims(self, other)
        return OpExpr(self.dim, self.monomials + other.monomials)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c) -> "OpExpr":
        if isinstance(c, ExactScalar):
            mons = []
            for m in self.monomials:
                for (a, b), r in c.terms.items():
                    mons.append(ShiftMonomial(m.dim, m.shift, m.poly * r, m.qform + a,
                                              m.qbarform + b, m.matrix))
            return OpExpr(self.dim, mons)
        if isinstance(c, Number):
            return OpExpr(self.dim, [m.with_poly(m.poly * c) for m in self.monomials])
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "OpExpr") -> "OpExpr":
        return compose(self, other)

    @property
    def H(self) -> "OpExpr":
        return adjoint(self)


def _check_dims(a, b):
    if a.dim != b.dim:
        raise StructuralError(f"dimension mismatch: {a.dim} vs {b.dim}")


def as_expr(op) -> OpExpr:
    return OpExpr(op.dim, [op]) if isinstance(op, ShiftMonomial) else op


def identity(dim: int) -> OpExpr:
    return OpExpr(dim, [ShiftMonomial(dim)])


def scalar(dim: int, c) -> OpExpr:
    return identity(dim) * c


def compose(a: OpExpr, b: OpExpr) -> OpExpr:
    """Operator product ``a b`` (``b`` acts first)."""
    a, b = as_expr(a), as_expr(b)
    _check_dims(a, b)
    return OpExpr(a.dim, [ma.compose(mb) for ma in a.monomials for mb in b.monomials])


def compose_all(*ops: OpExpr) -> OpExpr:
    """Product of the operands in reading order (the last acts first)."""
    out = as_expr(ops[0])
    for op in ops[1:]:
        out = compose(out, op)
    return out


def adjoint(op: OpExpr) -> OpExpr:
    op = as_expr(op)
    return OpExpr(op.dim, [m.adjoint() for m in op.monomials])


def inverse(op: OpExpr) -> OpExpr:
    """Inverse of a single-monomial expression."""
    op = as_expr(op)
    if len(op.monomials) != 1:
        raise NotInvertibleError("inverse is only available for single monomials")
    return OpExpr(op.dim, [op.monomials[0].inverse()])


def _leg_var_map(legs: Sequence[int], ambient_dims: Sequence[int]) -> list[int]:
    n = len(ambient_dims)
    if not legs:
        raise StructuralError("no legs selected")
    if any(not 1 <= l <= n for l in legs):
        raise StructuralError(f"legs {list(legs)} out of range 1..{n}")
    if any(b <= a for a, b in zip(legs, legs[1:])):
        raise StructuralError(f"legs {list(legs)} must be strictly increasing")
    offsets = np.concatenate([[0], np.cumsum(ambient_dims)]).astype(int)
    out = []
    for l in legs:
        out.extend(range(offsets[l - 1], offsets[l]))
    return out


def embed_leg(op: OpExpr, legs: Sequence[int], ambient_dims: Sequence[int]) -> OpExpr:
    """Place ``op`` on the given 1-based legs, identity on the others."""
    op = as_expr(op)
    var_map = _leg_var_map(legs, ambient_dims)
    if len(var_map) != op.dim:
        raise StructuralError(
            f"operator has dimension {op.dim}, selected legs have {len(var_map)}")
    total = int(sum(ambient_dims))
    return OpExpr(total, [m.embed(var_map, total) for m in op.monomials])


def tensor(*ops: OpExpr) -> OpExpr:
    """Elementary tensor ``ops[0] (x) ops[1] (x) ...``."""
    ops = [as_expr(o) for o in ops]
    dims = [o.dim for o in ops]
    out = None
    for i, o in enumerate(ops, start=1):
        e = embed_leg(o, [i], dims)
        out = e if out is None else compose(out, e)
    return out


def permute_legs(ambient_dims: Sequence[int], perm: Sequence[int]) -> OpExpr:
    """Unitary sending leg ``perm[k]`` (1-based) of the input to position ``k+1``.

    Only permutations that keep ``ambient_dims`` fixed are operators on the
    same space; the flip of two equal legs is the usual ``Sigma``.
    """
    dims = list(ambient_dims)
    if sorted(perm) != list(range(1, len(dims) + 1)):
        raise StructuralError("not a permutation")
    if [dims[p - 1] for p in perm] != dims:
        raise StructuralError("permutation must preserve the leg dimensions")
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offsets[-1])
    A = np.zeros((total, total), dtype=np.int64)
    for k, p in enumerate(perm):
        for r in range(dims[k]):
            A[offsets[k] + r, offsets[p - 1] + r] = 1
    return OpExpr(total, [ShiftMonomial(total, matrix=A.tolist())])


def flip(leg_dim: int) -> OpExpr:
    """``Sigma``: swap of two copies of a ``leg_dim``-dimensional lattice."""
    return permute_legs([leg_dim, leg_dim], [2, 1])


def is_unitary(u: OpExpr, window: int | None = None) -> bool:
    u = as_expr(u)
    one = identity(u.dim)
    uu, u_u = compose(u, adjoint(u)), compose(adjoint(u), u)
    if uu == one and u_u == one:
        return True
    if not u.is_exact():
        return False
    return equal_exact(uu, one, window) and equal_exact(u_u, one, window)


def conjugate(u: OpExpr, a: OpExpr) -> OpExpr:
    """``u a u*`` for a unitary ``u`` of the shift class."""
    u, a = as_expr(u), as_expr(a)
    _check_dims(u, a)
    if not is_unitary(u):
        raise NotInvertibleError("conjugating operator is not unitary")
    return compose(compose(u, a), adjoint(u))


# -- vectors ---------------------------------------------------------------
class FiniteVector:
    """Finitely supported vector on ``Z^dim``.

    Parameters
    ----------
    coords : (n, dim) int array
    values : (n,) complex array (float mode) or object array of ExactScalar
    error : float
        Accumulated truncation-error estimate carried from numerical steps.
    """

    __slots__ = ("dim", "coords", "values", "error")

    def __init__(self, dim, coords, values, error: float = 0.0, canonical: bool = False):
        self.dim = int(dim)
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.dim)
        exact = isinstance(values, np.ndarray) and values.dtype == object or (
            not isinstance(values, np.ndarray) and any(isinstance(v, ExactScalar) for v in values))
        if exact:
            vals = np.empty(len(coords), dtype=object)
            vals[:] = [v if isinstance(v, ExactScalar) else ExactScalar.rational(v) for v in values]
            if not canonical:
                coords, vals = _coalesce_exact(coords, vals)
        else:
            vals = np.asarray(values, dtype=np.complex128).reshape(-1)
            if not canonical:
                coords, vals = _kernels.coalesce(coords, vals, 0.0)
        self.coords = coords
        self.values = vals
        self.error = float(error)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    @classmethod
    def zero(cls, dim: int, exact: bool = False) -> "FiniteVector":
        vals = np.empty(0, dtype=object) if exact else np.zeros(0, np.complex128)
        return cls(dim, np.zeros((0, dim), np.int64), vals, canonical=True)

    @classmethod
    def basis(cls, x: Sequence[int], exact: bool = False, value=1) -> "FiniteVector":
        x = tuple(int(v) for v in x)
        if exact:
            vals = np.empty(1, dtype=object)
            vals[0] = value if isinstance(value, ExactScalar) else ExactScalar.rational(value)
        else:
            vals = np.array([value], dtype=np.complex128)
        return cls(len(x), np.array([x]), vals)

    @classmethod
    def from_dict(cls, dim: int, entries: dict, exact: bool = False) -> "FiniteVector":
        if not entries:
            return cls.zero(dim, exact)
        coords = np.array(list(entries.keys()), dtype=np.int64).reshape(-1, dim)
        vals = list(entries.values())
        if exact:
            arr = np.empty(len(vals), dtype=object)
            arr[:] = vals
            vals = arr
        return cls(dim, coords, vals)

    def to_dict(self) -> dict:
        return {tuple(int(v) for v in c): val for c, val in zip(self.coords, self.values)}

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"FiniteVector(dim={self.dim}, mode={mode}, support={len(self)})"

    def norm(self) -> float:
        if self.exact:
            raise TypeError("norm needs float mode; call to_float first")
        return float(np.linalg.norm(self.values))

    def to_float(self, deform: Deformation) -> "FiniteVector":
        if not self.exact:
            return self
        vals = np.array([v.evaluate(deform) for v in self.values], dtype=np.complex128)
        return FiniteVector(self.dim, self.coords, vals, self.error)

    def __add__(self, other: "FiniteVector") -> "FiniteVector":
        _check_dims(self, other)
        if self.exact != other.exact:
            raise TypeError("cannot mix exact and float vectors")
        vals = np.concatenate([self.values, other.values])
        return FiniteVector(self.dim, np.concatenate([self.coords, other.coords]), vals,
                            self.error + other.error)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FiniteVector":
        if self.exact:
            vals = np.empty(len(self.values), dtype=object)
            vals[:] = [v * c for v in self.values]
        else:
            vals = self.values * complex(c)
        return FiniteVector(self.dim, self.coords, vals, self.error * abs(complex(c))
                            if not self.exact else self.error)

    def with_error(self, error: float) -> "FiniteVector":
        return FiniteVector(self.dim, self.coords, self.values, error, canonical=True)

    def dropped(self, eps: float) -> "FiniteVector":
        """Remove entries with modulus at most ``eps``, adding their norm to the error."""
        small = np.abs(self.values) <= eps
        lost = float(np.linalg.norm(self.values[small]))
        return FiniteVector(self.dim, self.coords[~small], self.values[~small],
                            self.error + lost, canonical=True)


def _coalesce_exact(coords, vals):
    acc: dict = {}
    for c, v in zip(map(tuple, coords.tolist()), vals):
        acc[c] = acc[c] + v if c in acc else v
    keys = sorted(k for k, v in acc.items() if not v.is_zero())
    out = np.empty(len(keys), dtype=object)
    out[:] = [acc[k] for k in keys]
    return np.array(keys, dtype=np.int64).reshape(-1, coords.shape[1]), out


def apply(op: OpExpr, vec: FiniteVector, deform: Deformation | None = None) -> FiniteVector:
    """Apply ``op`` to ``vec``.

    Exact vectors stay exact and need exact coefficients; float vectors
    need the numeric ``deform``.
    """
    op = as_expr(op)
    if op.dim != vec.dim:
        raise StructuralError(f"operator dimension {op.dim} vs vector dimension {vec.dim}")
    if len(vec) == 0:
        return FiniteVector.zero(vec.dim, vec.exact).with_error(vec.error)
    if vec.exact:
        if not op.is_exact():
            raise TypeError("exact application needs exact coefficients")
        acc: dict = {}
        for m in op.monomials:
            Y = m.target(vec.coords)
            for x, y, v in zip(vec.coords.tolist(), Y.tolist(), vec.values):
                c = m.coefficient_exact(x) * v
                y = tuple(y)
                acc[y] = acc[y] + c if y in acc else c
        return FiniteVector.from_dict(vec.dim, acc, exact=True).with_error(vec.error)
    if deform is None:
        raise TypeError("float application needs a Deformation")
    Ys, Vs = [], []
    for m in op.monomials:
        Ys.append(m.target(vec.coords))
        Vs.append(vec.values * m.coefficient_array(vec.coords, deform))
    return FiniteVector(vec.dim, np.concatenate(Ys), np.concatenate(Vs), vec.error)


# -- exact decision procedure ----------------------------------------------
MAX_WINDOW_POINTS = 4_000_000


def default_window(*ops: OpExpr) -> int:
    """Per-coordinate half-width exceeding every coefficient degree."""
    return max(as_expr(o).degree() for o in ops) + 2


def window_points(dim: int, window: int) -> np.ndarray:
    side = 2 * window + 1
    if side**dim > MAX_WINDOW_POINTS:
        raise ValueError(f"window {window} in dimension {dim} has {side**dim} points")
    grid = np.indices((side,) * dim).reshape(dim, -1).T
    return (grid - window).astype(np.int64)


def _exact_rows(op: OpExpr, X: np.ndarray, den: int, sign: int):
    rows, vals = [], []
    src = np.arange(len(X), dtype=np.int64)[:, None]
    for m in op.monomials:
        Y = m.target(X)
        a = m.qform.eval_int(X)[:, None]
        b = m.qbarform.eval_int(X)[:, None]
        rows.append(np.hstack([src, Y, a, b]))
        vals.append(sign * m.poly.eval_int(X, den))
    return rows, vals


def exact_counterexample(a: OpExpr, b: OpExpr, window: int | None = None):
    """First basis index in the window where ``a`` and ``b`` differ, else ``None``."""
    a, b = as_expr(a), as_expr(b)
    _check_dims(a, b)
    if not (a.is_exact() and b.is_exact()):
        raise TypeError("equal_exact needs exact coefficients")
    if window is None:
        window = default_window(a, b)
    X = window_points(a.dim, window)
    den = common_denominator(m.poly for m in a.monomials + b.monomials)
    ra, va = _exact_rows(a, X, den, 1)
    rb, vb = _exact_rows(b, X, den, -1)
    if not ra + rb:
        return None
    R, V = _kernels.coalesce(np.concatenate(ra + rb), np.concatenate(va + vb), 0)
    if len(V) == 0:
        return None
    return tuple(int(v) for v in X[int(R[:, 0].min())])


def _float_window_gap(a: OpExpr, b: OpExpr, X: np.ndarray, deform: Deformation) -> float:
    src = np.arange(len(X), dtype=np.int64)[:, None]
    rows, vals, scale = [], [], 1.0
    for op, sign in ((a, 1.0), (b, -1.0)):
        for m in op.monomials:
            c = m.coefficient_array(X, deform)
            scale = max(scale, float(np.max(np.abs(c), initial=0.0)))
            rows.append(np.hstack([src, m.target(X)]))
            vals.append(sign * c)
    if not rows:
        return 0.0
    _, V = _kernels.coalesce(np.concatenate(rows), np.concatenate(vals), 0.0)
    return float(np.max(np.abs(V), initial=0.0)) / scale


def equal_exact(a: OpExpr, b: OpExpr, window: int | None = None,
                deform: Deformation | None = None, rtol: float = 1e-12) -> bool:
    """Decide ``a == b`` by exact comparison on ``[-window, window]^dim``.

    Coefficients are compared as formal sums of ``s^a sbar^b`` terms, which
    is sound for generic ``q``.  When ``deform`` is given the two sides are
    also evaluated numerically at that ``q`` (relative tolerance ``rtol``),
    which guards against accidental identities at special ``q``.
    """
    if exact_counterexample(a, b, window) is not None:
        return False
    if deform is not None:
        w = default_window(a, b) if window is None else window
        return _float_window_gap(as_expr(a), as_expr(b), window_points(a.dim, w), deform) <= rtol
    return True


def inner(x: FiniteVector, y: FiniteVector) -> complex:
    """``<x, y>``, conjugate-linear in ``x`` (float mode)."""
    _check_dims(x, y)
    X = np.concatenate([x.coords, y.coords])
    V = np.concatenate([np.conj(x.values), y.values])
    tag = np.concatenate([np.zeros(len(x)), np.ones(len(y))])
    order = np.lexsort(X.T[::-1])
    Xs, Vs, Ts = X[order], V[order], tag[order]
    same = np.all(Xs[1:] == Xs[:-1], axis=1) & (Ts[1:] != Ts[:-1])
    return complex(np.sum(Vs[1:][same] * Vs[:-1][same]))


def residual(x: FiniteVector, y: FiniteVector) -> float:
    """l2 norm of ``x - y`` (float mode)."""
    return (x - y).norm()
