"""Low-level numeric kernels shared by the operator and curvature modules.

The pointwise operators reduce to weighted sums over adjacency rows of a
CSR-style layout (indptr/indices/weights), and the curvature oracle runs a
projected-gradient loop over many starts at once.  Both are the hot inner
loops of the verification sweeps, so they are compiled with numba when it
is available.  Set GRAPHCD_NUMBA=0 to force the pure-numpy fallback; set
GRAPHCD_NUMBA=1 to fail loudly if numba cannot be imported.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("GRAPHCD_NUMBA", "auto").strip().lower()

if _FLAG in ("0", "false", "off", "no"):
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:
        if _FLAG in ("1", "true", "on", "yes"):
            raise ImportError("GRAPHCD_NUMBA=1 but numba is not importable")
        NUMBA_ENABLED = False


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _segment_sum(rows, contrib, nv):
    # one bincount over a flattened (entry, column) index grid; handles
    # empty rows and empty edge sets, unlike add.reduceat
    nc = contrib.shape[1]
    if contrib.shape[0] == 0:
        return np.zeros((nv, nc))
    flat = rows[:, None] * nc + np.arange(nc)[None, :]
    out = np.bincount(flat.ravel(), weights=contrib.ravel(), minlength=nv * nc)
    return out.reshape(nv, nc)


def laplacian_rows_numpy(indptr, indices, weights, inv_m, F):
    nv = indptr.shape[0] - 1
    rows = np.repeat(np.arange(nv), np.diff(indptr))
    contrib = weights[:, None] * (F[indices] - F[rows])
    return _segment_sum(rows, contrib, nv) * inv_m[:, None]


def gamma_rows_numpy(indptr, indices, weights, inv_m, F, H):
    nv = indptr.shape[0] - 1
    rows = np.repeat(np.arange(nv), np.diff(indptr))
    contrib = weights[:, None] * (F[indices] - F[rows]) * (H[indices] - H[rows])
    return _segment_sum(rows, contrib, nv) * (0.5 * inv_m)[:, None]


def pgd_min_quotient_numpy(A, B, W, iters, gtol, anorm, bnorm):
    """Projected-gradient minimum of (w'Aw)/(w'Bw) over the columns of W.

    Columns of W must start with w'Bw = 1; they stay on that set.  Returns
    the best Rayleigh value seen across all columns and iterations.
    """
    BW = B @ W
    best = np.inf
    check = 32
    for it in range(iters):
        AW = A @ W
        R = np.einsum("ij,ij->j", W, AW)
        rmin = R.min()
        if rmin < best:
            best = rmin
        G = AW - BW * R[None, :]
        if it % check == 0 and np.abs(G).max() < gtol:
            break
        step = 1.0 / (2.0 * (anorm + np.abs(R) * bnorm) + 1e-30)
        W = W - G * step[None, :]
        BW = B @ W
        q = np.einsum("ij,ij->j", W, BW)
        q = np.maximum(q, 1e-30)
        s = 1.0 / np.sqrt(q)
        W *= s[None, :]
        BW *= s[None, :]
    return best


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:

    @njit(cache=True)
    def _laplacian_rows_jit(indptr, indices, weights, inv_m, F, out):
        nv, nc = F.shape
        for x in range(nv):
            for c in range(nc):
                out[x, c] = 0.0
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                w = weights[k]
                for c in range(nc):
                    out[x, c] += w * (F[y, c] - F[x, c])
            for c in range(nc):
                out[x, c] *= inv_m[x]

    @njit(cache=True)
    def _gamma_rows_jit(indptr, indices, weights, inv_m, F, H, out):
        nv, nc = F.shape
        for x in range(nv):
            for c in range(nc):
                out[x, c] = 0.0
            for k in range(indptr[x], indptr[x + 1]):
                y = indices[k]
                w = weights[k]
                for c in range(nc):
                    out[x, c] += w * (F[y, c] - F[x, c]) * (H[y, c] - H[x, c])
            for c in range(nc):
                out[x, c] *= 0.5 * inv_m[x]

    @njit(cache=True)
    def _pgd_min_quotient_jit(A, B, W, iters, gtol, anorm, bnorm):
        k, ns = W.shape
        BW = B @ W
        best = np.inf
        for it in range(iters):
            AW = A @ W
            gmax = 0.0
            for j in range(ns):
                r = 0.0
                for i in range(k):
                    r += W[i, j] * AW[i, j]
                if r < best:
                    best = r
                step = 1.0 / (2.0 * (anorm + abs(r) * bnorm) + 1e-30)
                for i in range(k):
                    g = AW[i, j] - BW[i, j] * r
                    ag = abs(g)
                    if ag > gmax:
                        gmax = ag
                    W[i, j] -= g * step
            if it % 32 == 0 and gmax < gtol:
                break
            BW = B @ W
            for j in range(ns):
                q = 0.0
                for i in range(k):
                    q += W[i, j] * BW[i, j]
                if q < 1e-30:
                    q = 1e-30
                s = 1.0 / np.sqrt(q)
                for i in range(k):
                    W[i, j] *= s
                    BW[i, j] *= s
        return best


# ---------------------------------------------------------------------------
# dispatch wrappers
# ---------------------------------------------------------------------------

def laplacian_rows(indptr, indices, weights, inv_m, F):
    F = np.ascontiguousarray(F, dtype=np.float64)
    if NUMBA_ENABLED:
        out = np.empty_like(F)
        _laplacian_rows_jit(indptr, indices, weights, inv_m, F, out)
        return out
    return laplacian_rows_numpy(indptr, indices, weights, inv_m, F)


def gamma_rows(indptr, indices, weights, inv_m, F, H):
    F = np.ascontiguousarray(F, dtype=np.float64)
    H = np.ascontiguousarray(H, dtype=np.float64)
    if NUMBA_ENABLED:
        out = np.empty_like(F)
        _gamma_rows_jit(indptr, indices, weights, inv_m, F, H, out)
        return out
    return gamma_rows_numpy(indptr, indices, weights, inv_m, F, H)


def pgd_min_quotient(A, B, W0, iters, gtol):
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    W = np.ascontiguousarray(W0, dtype=np.float64).copy()
    anorm = float(np.linalg.norm(A, 2))
    bnorm = float(np.linalg.norm(B, 2))
    if NUMBA_ENABLED:
        return float(_pgd_min_quotient_jit(A, B, W, iters, gtol, anorm, bnorm))
    return float(pgd_min_quotient_numpy(A, B, W, iters, gtol, anorm, bnorm))


def warmup():
    """Trigger JIT compilation on tiny inputs so first real calls are fast."""
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int64)
    w = np.ones(2)
    inv_m = np.ones(2)
    f = np.array([[1.0], [0.0]])
    laplacian_rows(indptr, indices, w, inv_m, f)
    gamma_rows(indptr, indices, w, inv_m, f, f)
    pgd_min_quotient(np.eye(2), np.eye(2), np.eye(2), 8, 0.0)
