"""Numeric inner loops of the operator lab.

Each kernel exists twice: a numba ``@njit`` loop and a vectorized numpy
version.  The numba path is used when numba imports and the environment
variable ``FRACINDEX_DISABLE_NUMBA`` is unset (or ``0``).  Both paths take
and return plain numpy arrays, so callers never see which one ran.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("FRACINDEX_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by FRACINDEX_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# -- pure numpy --------------------------------------------------------------

def eval_symbol_np(freqs, coeffs, thetas):
    phases = np.exp(1j * np.outer(thetas, freqs))  # (m, n)
    return np.einsum("mn,nij->mij", phases, coeffs)


def det_batch_np(values):
    return np.linalg.det(values)


def inv_batch_np(values):
    return np.linalg.inv(values)


def phase_increments_np(dets):
    ratios = np.roll(dets, -1) / dets
    steps = np.angle(ratios)
    return steps.sum(), np.abs(steps).max()


def toeplitz_dense_np(freqs, coeffs, K):
    s = coeffs.shape[1]
    n = s * (K + 1)
    out = np.zeros((n, n), dtype=np.complex128)
    for f, block in zip(freqs, coeffs):
        for m in range(max(0, f), min(K, K + f) + 1):
            j = m - f
            out[m * s:(m + 1) * s, j * s:(j + 1) * s] = block
    return out


def windowed_commutator_trace_np(A, B, s, W, K, band):
    """Tr(AB - BA) over block rows 0..W, plus the sum of |terms| for a roundoff bound."""
    w = s * (W + 1)
    hi = min(K, W + band) + 1
    cols = s * hi
    left = A[:w, :cols] * B[:cols, :w].T
    right = B[:w, :cols] * A[:cols, :w].T
    value = left.sum() - right.sum()
    return value, np.abs(left).sum() + np.abs(right).sum()


# -- numba -------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def eval_symbol_nb(freqs, coeffs, thetas):
        m = thetas.shape[0]
        n, s, _ = coeffs.shape
        out = np.zeros((m, s, s), dtype=np.complex128)
        for a in range(m):
            for k in range(n):
                ph = np.exp(1j * thetas[a] * freqs[k])
                for i in range(s):
                    for j in range(s):
                        out[a, i, j] += ph * coeffs[k, i, j]
        return out

    @njit(cache=True)
    def _lu_det(mat):
        s = mat.shape[0]
        a = mat.copy()
        det = 1.0 + 0.0j
        for c in range(s):
            p = c
            best = abs(a[c, c])
            for r in range(c + 1, s):
                if abs(a[r, c]) > best:
                    best = abs(a[r, c])
                    p = r
            if best == 0.0:
                return 0.0j
            if p != c:
                for k in range(s):
                    tmp = a[c, k]
                    a[c, k] = a[p, k]
                    a[p, k] = tmp
                det = -det
            det *= a[c, c]
            for r in range(c + 1, s):
                f = a[r, c] / a[c, c]
                for k in range(c, s):
                    a[r, k] -= f * a[c, k]
        return det

    @njit(cache=True)
    def det_batch_nb(values):
        m = values.shape[0]
        out = np.empty(m, dtype=np.complex128)
        for a in range(m):
            out[a] = _lu_det(values[a])
        return out

    @njit(cache=True)
    def _gauss_jordan(mat):
        s = mat.shape[0]
        a = mat.copy()
        inv = np.eye(s).astype(np.complex128)
        for c in range(s):
            p = c
            best = abs(a[c, c])
            for r in range(c + 1, s):
                if abs(a[r, c]) > best:
                    best = abs(a[r, c])
                    p = r
            if p != c:
                for k in range(s):
                    tmp = a[c, k]
                    a[c, k] = a[p, k]
                    a[p, k] = tmp
                    tmp = inv[c, k]
                    inv[c, k] = inv[p, k]
                    inv[p, k] = tmp
            piv = a[c, c]
            for k in range(s):
                a[c, k] /= piv
                inv[c, k] /= piv
            for r in range(s):
                if r != c:
                    f = a[r, c]
                    for k in range(s):
                        a[r, k] -= f * a[c, k]
                        inv[r, k] -= f * inv[c, k]
        return inv

    @njit(cache=True)
    def inv_batch_nb(values):
        out = np.empty_like(values)
        for a in range(values.shape[0]):
            out[a] = _gauss_jordan(values[a])
        return out

    @njit(cache=True)
    def phase_increments_nb(dets):
        n = dets.shape[0]
        total = 0.0
        worst = 0.0
        for a in range(n):
            b = a + 1 if a + 1 < n else 0
            r = dets[b] / dets[a]
            step = np.arctan2(r.imag, r.real)
            total += step
            if abs(step) > worst:
                worst = abs(step)
        return total, worst

    @njit(cache=True)
    def toeplitz_dense_nb(freqs, coeffs, K):
        s = coeffs.shape[1]
        n = s * (K + 1)
        out = np.zeros((n, n), dtype=np.complex128)
        for k in range(freqs.shape[0]):
            f = freqs[k]
            for m in range(max(0, f), min(K, K + f) + 1):
                j = m - f
                for i in range(s):
                    for l in range(s):
                        out[m * s + i, j * s + l] = coeffs[k, i, l]
        return out

    @njit(cache=True)
    def windowed_commutator_trace_nb(A, B, s, W, K, band):
        value = 0.0j
        mag = 0.0
        for m in range(W + 1):
            lo = max(0, m - band)
            hi = min(K, m + band)
            for i in range(s):
                r = m * s + i
                for c in range(lo * s, (hi + 1) * s):
                    t1 = A[r, c] * B[c, r]
                    t2 = B[r, c] * A[c, r]
                    value += t1 - t2
                    mag += abs(t1) + abs(t2)
        return value, mag

    eval_symbol = eval_symbol_nb
    det_batch = det_batch_nb
    inv_batch = inv_batch_nb
    phase_increments = phase_increments_nb
    toeplitz_dense = toeplitz_dense_nb
    windowed_commutator_trace = windowed_commutator_trace_nb
else:
    eval_symbol = eval_symbol_np
    det_batch = det_batch_np
    inv_batch = inv_batch_np
    phase_increments = phase_increments_np
    toeplitz_dense = toeplitz_dense_np
    windowed_commutator_trace = windowed_commutator_trace_np
