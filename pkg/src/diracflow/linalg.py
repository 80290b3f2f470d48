"""Fixed-size matrix kernel: 2x2 complex exponentials, real linear solves, rank.

Everything here is sized for the 6-dimensional constraint matrices of the
bracket engine; no attempt is made at general dense linear algebra.
"""

from __future__ import annotations

import cmath

import numpy as np

__all__ = [
    "SingularMatrix",
    "inv2",
    "mat_exp",
    "mat_inf_norm",
    "nullspace",
    "numerical_rank",
    "solve_linear",
]


class SingularMatrix(Exception):
    """A pivot fell below the relative elimination threshold."""


# Relative pivot threshold; a failure here signals a degenerate constraint point.
PIVOT_RTOL = 1e-12

_SERIES_CUTOFF = 1e-6
_TRACELESS_RTOL = 1e-12

# (6,6) Pade coefficients of the exponential.
_PADE6 = (1.0, 1.0 / 2, 5.0 / 44, 1.0 / 66, 1.0 / 792, 1.0 / 15840, 1.0 / 665280)


def mat_inf_norm(m: np.ndarray) -> float:
    """Max absolute entry; the norm every relative tolerance refers to."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def inv2(m: np.ndarray) -> np.ndarray:
    """Inverse of a 2x2 complex matrix via the adjugate."""
    m = np.asarray(m, dtype=complex)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-300:
        raise SingularMatrix("2x2 matrix is singular")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex) / det


def _sinhc(mu: complex) -> complex:
    # sinh(mu)/mu; the removable singularity is filled with the series.
    if abs(mu) < _SERIES_CUTOFF:
        mu2 = mu * mu
        return 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0
    return cmath.sinh(mu) / mu


def mat_exp(m: np.ndarray) -> np.ndarray:
    """Exponential of a 2x2 complex matrix.

    Traceless input (the dominant case: Lie algebra elements) uses the
    Cayley-Hamilton closed form exp(m) = cosh(mu) I + sinhc(mu) m with
    mu^2 = -det(m); the branch of the square root is irrelevant because
    cosh and sinhc are even.  Anything else falls back to (6,6) Pade with
    scaling and squaring.
    """
    m = np.asarray(m, dtype=complex)
    a, b = complex(m[0, 0]), complex(m[0, 1])
    c, d = complex(m[1, 0]), complex(m[1, 1])
    if abs(a + d) <= _TRACELESS_RTOL * max(
        1.0, abs(a), abs(b), abs(c), abs(d)
    ):
        mu = cmath.sqrt(-(a * d - b * c))
        ch = cmath.cosh(mu)
        sc = _sinhc(mu)
        return np.array(
            [[ch + sc * a, sc * b], [sc * c, ch + sc * d]], dtype=complex
        )
    return _pade_exp(m)


def _pade_exp(m: np.ndarray) -> np.ndarray:
    norm = mat_inf_norm(m)
    squarings = int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0
    a = m / (2.0**squarings)
    eye = np.eye(2, dtype=complex)
    powers = [eye]
    for _ in range(6):
        powers.append(powers[-1] @ a)
    p = sum(c * pw for c, pw in zip(_PADE6, powers))
    q = sum(c * pw * (-1.0) ** k for k, (c, pw) in enumerate(zip(_PADE6, powers)))
    out = inv2(q) @ p
    for _ in range(squarings):
        out = out @ out
    return out


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b by Gaussian elimination with partial pivoting.

    Raises SingularMatrix when a pivot drops below PIVOT_RTOL times the
    max-norm of the input matrix.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = mat_inf_norm(a)
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    threshold = PIVOT_RTOL * scale
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot_row, col]) < threshold:
            raise SingularMatrix(f"pivot {a[pivot_row, col]:.3e} below threshold")
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            b[[col, pivot_row]] = b[[pivot_row, col]]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
        b[col + 1 :] -= factors * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def inverse(a: np.ndarray) -> np.ndarray:
    """Dense inverse, column by column through solve_linear."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    return np.column_stack([solve_linear(a, e) for e in np.eye(n)])


def _full_pivot_reduce(a: np.ndarray):
    """Full-pivot elimination; returns (reduced matrix, column order, pivot magnitudes)."""
    a = np.array(a, dtype=float)
    rows, cols = a.shape
    col_order = list(range(cols))
    pivots = []
    r = 0
    for _ in range(min(rows, cols)):
        sub = np.abs(a[r:, r:])
        if sub.size == 0:
            break
        i, j = divmod(int(np.argmax(sub)), cols - r)
        pivot = sub[i, j]
        pivots.append(pivot)
        i += r
        j += r
        if i != r:
            a[[r, i]] = a[[i, r]]
        if j != r:
            a[:, [r, j]] = a[:, [j, r]]
            col_order[r], col_order[j] = col_order[j], col_order[r]
        if pivot == 0.0:
            break
        factors = a[r + 1 :, r] / a[r, r]
        a[r + 1 :, r:] -= np.outer(factors, a[r, r:])
        r += 1
    return a, col_order, pivots


def numerical_rank(a: np.ndarray, tol: float) -> int:
    """Count of full-pivot elimination pivots above tol times the max-norm."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=float)
    scale = mat_inf_norm(a)
    if scale == 0.0:
        return 0
    _, _, pivots = _full_pivot_reduce(a)
    return int(sum(1 for p in pivots if p > tol * scale))


def nullspace(a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Basis of the kernel of a, one row per basis vector.

    Built from the same full-pivot reduction as numerical_rank, so the two
    agree on what counts as a zero pivot.
    """
    a = np.asarray(a, dtype=float)
    rows, cols = a.shape
    scale = mat_inf_norm(a)
    if scale == 0.0:
        return np.eye(cols)
    reduced, col_order, pivots = _full_pivot_reduce(a)
    rank = sum(1 for p in pivots if p > tol * scale)
    basis = []
    for free in range(rank, cols):
        x = np.zeros(cols)
        x[free] = 1.0
        for row in range(rank - 1, -1, -1):
            x[row] = -(reduced[row, row + 1 :] @ x[row + 1 :]) / reduced[row, row]
        vec = np.zeros(cols)
        for pos, orig in enumerate(col_order):
            vec[orig] = x[pos]
        basis.append(vec / np.linalg.norm(vec))
    return np.array(basis) if basis else np.zeros((0, cols))
