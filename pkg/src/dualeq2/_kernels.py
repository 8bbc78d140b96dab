"""Hot loops with a numba backend and a pure-numpy fallback.

The backend is picked at import time.  Set ``DUALEQ2_NUMBA=0`` to force the
numpy path (numba is also skipped when it is not importable).
"""
from __future__ import annotations

import os

import numpy as np

_WANT_NUMBA = os.environ.get("DUALEQ2_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError("disabled by DUALEQ2_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised with the env flag
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

UNIT_TOL = 1e-9


# -- quantum exponential product -------------------------------------------
def _fq_product_np(lam, absq, K):
    lam = np.asarray(lam, dtype=np.complex128)
    out = np.ones_like(lam)
    scale = 1.0
    for _ in range(K + 1):
        w = scale * lam
        aw = np.abs(w)
        on = np.abs(aw - 1.0) < UNIT_TOL
        num = np.where(on, np.conj(w), 1.0 + np.conj(w))
        den = np.where(on, np.where(aw > 0, aw, 1.0), 1.0 + w)
        out *= num / den
        scale *= absq * absq
    return out


# -- orbit expansion -------------------------------------------------------
def _expand_counts(grp, ptr):
    return ptr[grp + 1] - ptr[grp]


def _orbit_expand_np(X, V, grp, ptr, m_flat, c_flat, delta, dlin, dconst, ddelta,
                     theta_s, arg_lam):
    n = X.shape[0]
    counts = _expand_counts(grp, ptr)
    total = int(counts.sum())
    if total == 0:
        return np.zeros((0, X.shape[1]), np.int64), np.zeros(0, np.complex128)
    rep = np.repeat(np.arange(n), counts)
    starts = np.cumsum(counts) - counts
    j = ptr[grp[rep]] + (np.arange(total) - starts[rep])
    m = m_flat[j]
    D = X @ dlin + dconst
    nphase = m * D[rep] + ddelta * (m * (m - 1) // 2)
    ph = np.exp(1j * (theta_s * nphase.astype(np.float64) + arg_lam * m))
    Xo = X[rep] + m[:, None] * delta[None, :]
    Vo = V[rep] * c_flat[j] * ph
    return Xo, Vo


# -- coalescing ------------------------------------------------------------
def _segment_sum_np(Xs, Vs):
    if len(Xs) == 0:
        return Xs, Vs
    change = np.empty(len(Xs), dtype=bool)
    change[0] = True
    change[1:] = np.any(Xs[1:] != Xs[:-1], axis=1)
    idx = np.flatnonzero(change)
    return Xs[idx], np.add.reduceat(Vs, idx)


if HAVE_NUMBA:

    @njit(cache=True)
    def _fq_product_nb(lam, absq, K):
        out = np.empty(lam.shape[0], dtype=np.complex128)
        a2 = absq * absq
        for t in range(lam.shape[0]):
            acc = 1.0 + 0.0j
            scale = 1.0
            for _ in range(K + 1):
                w = scale * lam[t]
                aw = abs(w)
                if abs(aw - 1.0) < UNIT_TOL:
                    acc *= w.conjugate() / aw
                else:
                    acc *= (1.0 + w.conjugate()) / (1.0 + w)
                scale *= a2
            out[t] = acc
        return out

    @njit(cache=True)
    def _orbit_expand_nb(X, V, grp, ptr, m_flat, c_flat, delta, dlin, dconst, ddelta,
                         theta_s, arg_lam):
        n, d = X.shape
        total = 0
        for t in range(n):
            total += ptr[grp[t] + 1] - ptr[grp[t]]
        Xo = np.empty((total, d), dtype=np.int64)
        Vo = np.empty(total, dtype=np.complex128)
        pos = 0
        for t in range(n):
            D = dconst
            for c in range(d):
                D += dlin[c] * X[t, c]
            g = grp[t]
            for jj in range(ptr[g], ptr[g + 1]):
                m = m_flat[jj]
                nph = m * D + ddelta * ((m * (m - 1)) // 2)
                ang = theta_s * nph + arg_lam * m
                for c in range(d):
                    Xo[pos, c] = X[t, c] + m * delta[c]
                Vo[pos] = V[t] * c_flat[jj] * complex(np.cos(ang), np.sin(ang))
                pos += 1
        return Xo, Vo

    @njit(cache=True)
    def _segment_sum_nb(Xs, Vs):
        n, d = Xs.shape
        keep = np.empty(n, dtype=np.int64)
        out_v = np.empty(n, dtype=np.complex128)
        k = -1
        for t in range(n):
            new = t == 0
            if not new:
                for c in range(d):
                    if Xs[t, c] != Xs[t - 1, c]:
                        new = True
                        break
            if new:
                k += 1
                keep[k] = t
                out_v[k] = Vs[t]
            else:
                out_v[k] += Vs[t]
        Xo = np.empty((k + 1, d), dtype=np.int64)
        for r in range(k + 1):
            for c in range(d):
                Xo[r, c] = Xs[keep[r], c]
        return Xo, out_v[: k + 1].copy()


def fq_product(lam, absq: float, K: int, backend: str | None = None) -> np.ndarray:
    """Truncated product ``prod_{k<=K} (1+|q|^{2k} conj(lam)) / (1+|q|^{2k} lam)``.

    Factors on the unit circle use their continuous limit ``conj(w)/|w|``.
    """
    lam = np.ascontiguousarray(np.atleast_1d(lam), dtype=np.complex128)
    if _use_numba(backend):
        return _fq_product_nb(lam, float(absq), int(K))
    return _fq_product_np(lam, float(absq), int(K))


def orbit_expand(X, V, grp, ptr, m_flat, c_flat, delta, dlin, dconst, ddelta,
                 theta_s, arg_lam, backend: str | None = None):
    """Expand every point along its orbit with per-group Fourier weights.

    Point ``x`` in group ``g`` contributes, for each stored index ``m``,
    ``V * c * exp(i*(arg_lam*m + theta_s*(m*D(x) + ddelta*m*(m-1)/2)))``
    at ``x + m*delta`` with ``D(x) = dlin.x + dconst``.
    """
    args = (
        np.ascontiguousarray(X, dtype=np.int64),
        np.ascontiguousarray(V, dtype=np.complex128),
        np.ascontiguousarray(grp, dtype=np.int64),
        np.ascontiguousarray(ptr, dtype=np.int64),
        np.ascontiguousarray(m_flat, dtype=np.int64),
        np.ascontiguousarray(c_flat, dtype=np.complex128),
        np.ascontiguousarray(delta, dtype=np.int64),
        np.ascontiguousarray(dlin, dtype=np.int64),
        int(dconst),
        int(ddelta),
        float(theta_s),
        float(arg_lam),
    )
    if _use_numba(backend):
        return _orbit_expand_nb(*args)
    return _orbit_expand_np(*args)


def coalesce(X, V, drop: float = 0.0, backend: str | None = None):
    """Merge duplicate rows of ``X`` by summing ``V``; drop ``|v| <= drop``.

    Output rows are sorted lexicographically (first column most significant).
    """
    X = np.ascontiguousarray(X, dtype=np.int64)
    V = np.ascontiguousarray(V)
    if len(X) == 0:
        return X.reshape(0, X.shape[1] if X.ndim == 2 else 0), V
    if X.shape[1] == 0:
        Xs, Vs = X[:1], np.array([V.sum()], dtype=V.dtype)
    else:
        order = np.lexsort(X.T[::-1])
        Xs, Vs = X[order], V[order]
        if _use_numba(backend) and Vs.dtype == np.complex128:
            Xs, Vs = _segment_sum_nb(Xs, Vs)
        else:
            Xs, Vs = _segment_sum_np(Xs, Vs)
    keep = np.abs(Vs) > drop
    return Xs[keep], Vs[keep]


def _use_numba(backend: str | None) -> bool:
    if backend is None:
        return HAVE_NUMBA
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown backend {backend!r}")
