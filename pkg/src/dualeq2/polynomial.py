"""Sparse multivariate polynomials over the integer lattice.

Coefficients are ``int``/``Fraction`` (exact mode) or ``complex`` (float
mode).  The class is immutable and hashable so it can key canonical forms.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Number
from typing import Iterable, Mapping, Sequence

import numpy as np

Monomial = tuple[int, ...]


def _clean(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    if isinstance(c, float):
        return complex(c)
    return c


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


class Poly:
    """Polynomial in ``nvars`` integer coordinates.

    Parameters
    ----------
    nvars : int
        Number of variables (the lattice dimension).
    terms : mapping
        ``{exponent tuple: coefficient}``; zero coefficients are dropped.
    """

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Number] | None = None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            c = _clean(c)
            if c != 0:
                clean[tuple(int(e) for e in mono)] = c
        self.terms = clean
        self._key = None

    # -- constructors --------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c=1) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[int], const=0) -> "Poly":
        """``sum(coeffs[i] * x_i) + const``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, a in enumerate(coeffs):
            if a:
                mono = [0] * n
                mono[i] = 1
                terms[tuple(mono)] = a
        return cls(n, terms)

    # -- basic protocol ------------------------------------------------
    @property
    def key(self):
        if self._key is None:
            self._key = (self.nvars, tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))
        return self._key

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        if isinstance(other, Number):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.key == other.key

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items(), reverse=True):
            vs = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(mono) if e
            )
            parts.append(f"{c}" if not vs else (vs if c == 1 else f"{c}*{vs}"))
        return " + ".join(parts)

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def max_var_degree(self) -> int:
        """Largest exponent of any single variable."""
        return max((max(m) for m in self.terms if m), default=0)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different dimensions")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.nvars, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        terms: dict[Monomial, Number] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "Poly":
        return Poly(
            self.nvars,
            {m: (c.conjugate() if isinstance(c, complex) else c) for m, c in self.terms.items()},
        )

    # -- substitution --------------------------------------------------
    def substitute(self, matrix: Sequence[Sequence[int]] | None, shift: Sequence[int]) -> "Poly":
        """Return ``x -> p(A x + shift)``."""
        n = self.nvars
        images = []
        for i in range(n):
            row = matrix[i] if matrix is not None else [int(i == j) for j in range(n)]
            images.append(Poly.linear(row, shift[i]))
        out = Poly(n)
        for mono, c in self.terms.items():
            t = Poly.const(n, c)
            for i, e in enumerate(mono):
                if e:
                    t = t * images[i] ** e
            out = out + t
        return out

    def embed(self, var_map: Sequence[int], nvars: int) -> "Poly":
        """Relabel variable ``i`` as variable ``var_map[i]`` of an ``nvars`` space."""
        terms = {}
        for mono, c in self.terms.items():
            new = [0] * nvars
            for i, e in enumerate(mono):
                new[var_map[i]] += e
            terms[tuple(new)] = c
        return Poly(nvars, terms)

    # -- evaluation ----------------------------------------------------
    def __call__(self, x: Sequence[int]):
        total = 0
        for mono, c in self.terms.items():
            v = c
            for xi, e in zip(x, mono):
                if e:
                    v = v * xi**e
            total += v
        return _clean(total) if not isinstance(total, complex) else total

    def integer_form(self) -> tuple[dict[Monomial, int], int]:
        """``(terms, den)`` with integer terms such that ``p = terms / den``."""
        if not self.is_exact():
            raise TypeError("integer_form needs exact coefficients")
        den = 1
        for c in self.terms.values():
            den = lcm(den, Fraction(c).denominator)
        return {m: int(Fraction(c) * den) for m, c in self.terms.items()}, den

    def eval_int(self, X: np.ndarray, scale: int = 1) -> np.ndarray:
        """Exact vectorised value of ``scale * p`` on integer rows ``X``.

        ``scale`` must clear every denominator.
        """
        out = np.zeros(len(X), dtype=np.int64)
        for mono, c in self.terms.items():
            cc = Fraction(c) * scale
            if cc.denominator != 1:
                raise ValueError("scale does not clear the denominators")
            t = np.full(len(X), int(cc), dtype=np.int64)
            for i, e in enumerate(mono):
                if e:
                    t = t * X[:, i] ** e
            out += t
        return out

    def eval_array(self, X: np.ndarray) -> np.ndarray:
        """Floating-point value on integer rows ``X``."""
        exact = self.is_exact()
        out = np.zeros(len(X), dtype=np.float64 if exact else np.complex128)
        Xf = X.astype(np.float64)
        for mono, c in self.terms.items():
            t = np.full(len(X), float(c) if exact else complex(c), dtype=out.dtype)
            for i, e in enumerate(mono):
                if e:
                    t = t * Xf[:, i] ** e
            out += t
        return out


def common_denominator(polys: Iterable[Poly]) -> int:
    den = 1
    for p in polys:
        den = lcm(den, p.integer_form()[1])
    return den
