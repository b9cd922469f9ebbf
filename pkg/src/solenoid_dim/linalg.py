"""Small dense-matrix utilities built around the smallest singular value.

For a wide linear map A: R^m -> R^n (m >= n) the quantity of interest is

    m(A) = sup over n-dim subspaces W of  inf over unit v in W of |A v|,

the n-th largest singular value, i.e. sqrt of the smallest eigenvalue of
A A^T.  It is positive exactly when A is surjective and measures how
transversal two graphs with difference A are.

Everything here targets tiny matrices (a handful of rows/columns), so the
eigen-solve is a cyclic Jacobi iteration on the Gram matrix: slow in theory,
simple and robust in practice.
"""

import numpy as np

from .errors import InvalidInputError, ShapeError

JACOBI_TOL = 1e-13
_MAX_SWEEPS = 60


def as_matrix(a):
    """Coerce to a finite 2-d float array; reject anything else."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise InvalidInputError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix has non-finite entries")
    return m


def jacobi_eigenvalues(sym, tol=JACOBI_TOL):
    """Eigenvalues of a small symmetric matrix, descending, by cyclic Jacobi.

    Sweeps rotate every off-diagonal pair until the off-diagonal Frobenius
    norm falls below ``tol`` times the matrix scale.
    """
    a = np.array(sym, dtype=float, copy=True)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0]])
    scale = np.sqrt(np.sum(a * a))
    if scale == 0.0:
        return np.zeros(n)
    threshold = tol * scale
    for _ in range(_MAX_SWEEPS):
        off = a - np.diag(np.diag(a))
        off_sq = np.sum(off * off)
        if off_sq <= threshold * threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold / (n * n):
                    continue
                # rotation R = [[c, s], [-s, c]] annihilates a_pq when
                # t = s/c is the small root of t^2 - 2*tau*t - 1 = 0
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = -np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, q]
                a[idx, :] = rot @ a[idx, :]
                a[:, idx] = a[:, idx] @ rot.T
                a[p, q] = a[q, p] = 0.0
    else:
        raise InvalidInputError("jacobi iteration failed to converge")
    return np.sort(np.diag(a))[::-1]


def singular_values(a):
    """Singular values of ``a``, non-increasing, via the smaller Gram matrix.

    Negative Gram eigenvalues produced by round-off are clamped to zero
    before the square root.
    """
    m = as_matrix(a)
    gram = m @ m.T if m.shape[0] <= m.shape[1] else m.T @ m
    eig = jacobi_eigenvalues(gram)
    return np.sqrt(np.clip(eig, 0.0, None))


def operator_norm(a):
    """Largest singular value."""
    return float(singular_values(a)[0])


def smallest_singular_value(a):
    """m(A) for a wide map: sqrt(lambda_min(A A^T)); zero iff not surjective.

    Requires at least as many columns as rows, since a map into a strictly
    bigger space is never surjective and the max-min characterization refers
    to subspaces of the source.
    """
    m = as_matrix(a)
    rows, cols = m.shape
    if rows > cols:
        raise ShapeError(f"need cols >= rows for a wide map, got {rows}x{cols}")
    eig = jacobi_eigenvalues(m @ m.T)
    return float(np.sqrt(max(eig[-1], 0.0)))
