"""Exact coefficient ring and the numeric deformation parameter.

An :class:`ExactScalar` is a finite sum ``sum r * s**a * sbar**b`` where
``s`` is the fixed principal square root of ``q`` and ``sbar`` its complex
conjugate, so ``q**(a/2) * conj(q)**(b/2)`` is the term ``(a, b)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number, Rational
from typing import Mapping

import numpy as np


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


@dataclass(frozen=True)
class Deformation:
    """Numeric deformation parameter ``q`` with ``0 < |q| < 1``.

    Attributes
    ----------
    q : complex
    s : complex
        Principal square root of ``q``; every half-integer power
        ``q**(m/2)`` is evaluated as ``s**m``.
    """

    q: complex
    s: complex = field(init=False)

    def __post_init__(self):
        q = complex(self.q)
        if not 0.0 < abs(q) < 1.0:
            raise DomainError(f"need 0 < |q| < 1, got |q| = {abs(q):.6g}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "s", cmath.sqrt(q))

    @property
    def absq(self) -> float:
        return abs(self.q)

    @property
    def abs_s(self) -> float:
        return abs(self.s)

    @property
    def theta_s(self) -> float:
        """Argument of ``s``."""
        return cmath.phase(self.s)

    @property
    def zeta(self) -> complex:
        return self.q / self.q.conjugate()

    def power(self, a, b) -> np.ndarray | complex:
        """``s**a * conj(s)**b`` for integer (arrays) ``a`` and ``b``.

        Modulus and phase are formed separately, which keeps the relative
        error at roughly ``|a| + |b|`` ulps.
        """
        a = np.asarray(a)
        b = np.asarray(b)
        mod = self.abs_s ** (a + b).astype(np.float64)
        out = mod * np.exp(1j * self.theta_s * (a - b).astype(np.float64))
        return out if out.ndim else complex(out)


def _frac(r) -> Fraction:
    if isinstance(r, Fraction):
        return r
    if isinstance(r, Rational):
        return Fraction(int(r.numerator), int(r.denominator))
    raise TypeError(f"exact scalars need rational coefficients, got {type(r).__name__}")


class ExactScalar:
    """Finite sum of ``r * s**a * sbar**b`` with rational ``r``.

    Parameters
    ----------
    terms : mapping
        ``{(a, b): r}``.  Zero coefficients are dropped so equality is
        plain comparison of the canonical dictionaries.

    Examples
    --------
    >>> z = ExactScalar.zeta(1)
    >>> (z * z.conj()) == ExactScalar.one()
    True
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Number] | None = None):
        clean = {}
        for (a, b), r in (terms or {}).items():
            r = _frac(r)
            if r:
                key = (int(a), int(b))
                clean[key] = clean.get(key, 0) + r
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def one(cls) -> "ExactScalar":
        return cls({(0, 0): 1})

    @classmethod
    def zero(cls) -> "ExactScalar":
        return cls()

    @classmethod
    def rational(cls, r) -> "ExactScalar":
        return cls({(0, 0): r})

    @classmethod
    def q_power(cls, half_exp: int, bar_half_exp: int = 0, r=1) -> "ExactScalar":
        """``r * q**(half_exp/2) * conj(q)**(bar_half_exp/2)``."""
        return cls({(half_exp, bar_half_exp): r})

    @classmethod
    def zeta(cls, m: int) -> "ExactScalar":
        """``zeta**m`` with ``zeta = q / conj(q)``, i.e. the term ``(2m, -2m)``."""
        return cls({(2 * m, -2 * m): 1})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), r in sorted(self.terms.items()):
            parts.append(f"{r}*s^{a}*sbar^{b}")
        return " + ".join(parts)

    def __eq__(self, other):
        if isinstance(other, Rational):
            other = ExactScalar.rational(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, Rational):
            other = ExactScalar.rational(other)
        out = dict(self.terms)
        for k, r in other.terms.items():
            out[k] = out.get(k, 0) + r
        return ExactScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar({k: -r for k, r in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Rational):
            return ExactScalar({k: r * _frac(other) for k, r in self.terms.items()})
        if not isinstance(other, ExactScalar):
            return NotImplemented
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), r1 in self.terms.items():
            for (a2, b2), r2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + r1 * r2
        return ExactScalar(out)

    __rmul__ = __mul__

    def conj(self) -> "ExactScalar":
        return ExactScalar({(b, a): r for (a, b), r in self.terms.items()})

    def evaluate(self, deform: Deformation) -> complex:
        total = 0j
        for (a, b), r in self.terms.items():
            total += float(r) * deform.power(a, b)
        return complex(total)
