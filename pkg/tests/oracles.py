"""Independent reference implementations used as test oracles.

Deliberately written along different routes than the library: cofactor
expansion instead of LU determinants, classic Gram-Schmidt instead of the
stabilized pass, an explicit pair-loop transform instead of the vectorized
one, and SVD (numpy.linalg.pinv) against the normal-equations inverse.
"""
import math

import numpy as np


def det_cofactor(matrix) -> float:
    """Determinant by direct cofactor expansion along the first row."""
    m = [list(map(float, row)) for row in matrix]
    k = len(m)
    if k == 1:
        return m[0][0]
    total = 0.0
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += ((-1.0) ** j) * m[0][j] * det_cofactor(minor)
    return total


def gs_projection(columns, x) -> np.ndarray:
    """Orthogonal projection of x onto span(columns), classic Gram-Schmidt."""
    cols = np.asarray(columns, dtype=float)
    basis = []
    for j in range(cols.shape[1]):
        v = cols[:, j].copy()
        for u in basis:
            v -= np.dot(u, v) * u
        v /= np.linalg.norm(v)
        basis.append(v)
    x = np.asarray(x, dtype=float)
    proj = np.zeros_like(x)
    for u in basis:
        proj += np.dot(u, x) * u
    return proj


def lstsq_coefficients(columns, x) -> np.ndarray:
    """Least-squares coefficients of x against the given columns (SVD route)."""
    return np.linalg.lstsq(np.asarray(columns, dtype=float), np.asarray(x, dtype=float), rcond=None)[0]


def haar2_reference(plane) -> dict:
    """One-level orthonormal 2-D Haar by explicit pair loops."""
    a = np.asarray(plane, dtype=float)
    h, w = a.shape
    assert h % 2 == 0 and w % 2 == 0
    s = math.sqrt(2.0)
    row_lo = np.empty((h, w // 2))
    row_hi = np.empty((h, w // 2))
    for r in range(h):
        for c in range(0, w, 2):
            row_lo[r, c // 2] = (a[r, c] + a[r, c + 1]) / s
            row_hi[r, c // 2] = (a[r, c] - a[r, c + 1]) / s
    out = {
        "ll": np.empty((h // 2, w // 2)),
        "lh": np.empty((h // 2, w // 2)),
        "hl": np.empty((h // 2, w // 2)),
        "hh": np.empty((h // 2, w // 2)),
    }
    for c in range(w // 2):
        for r in range(0, h, 2):
            out["ll"][r // 2, c] = (row_lo[r, c] + row_lo[r + 1, c]) / s
            out["hl"][r // 2, c] = (row_lo[r, c] - row_lo[r + 1, c]) / s
            out["lh"][r // 2, c] = (row_hi[r, c] + row_hi[r + 1, c]) / s
            out["hh"][r // 2, c] = (row_hi[r, c] - row_hi[r + 1, c]) / s
    return out


def psnr_reference(a, b) -> float:
    """PSNR straight from its definition on clamped-rounded 8-bit planes."""
    qa = np.floor(np.clip(np.asarray(a, dtype=float), 0, 255) + 0.5)
    qb = np.floor(np.clip(np.asarray(b, dtype=float), 0, 255) + 0.5)
    mse = float(np.mean((qa - qb) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 * 255.0 / mse)


def sparse_source(seed, n=4, t=10000, max_active=2, amplitude=100.0) -> np.ndarray:
    """Ground-truth sparse matrix: <= max_active nonzeros per column.

    The construction itself is the oracle for recovery tests: whatever
    comes back must equal this matrix.
    """
    rng = np.random.default_rng(seed)
    s = np.zeros((n, t))
    count = rng.integers(0, max_active + 1, size=t)
    first = rng.integers(0, n, size=t)
    second = (first + rng.integers(1, n, size=t)) % n
    cols = np.arange(t)
    vals1 = rng.uniform(-amplitude, amplitude, size=t)
    vals2 = rng.uniform(-amplitude, amplitude, size=t)
    s[first[count >= 1], cols[count >= 1]] = vals1[count >= 1]
    s[second[count >= 2], cols[count >= 2]] = vals2[count >= 2]
    return s
