"""Brute-force max-min estimator for the smallest singular value (test oracle).

Evaluates sup over n-dim subspaces W of inf over unit v in W of |A v|
directly from the definition: random orthonormal frames sampled by
Gram-Schmidt on Gaussian draws, plus the frame obtained by pushing the best
sample once through the Gram operator A^T A.  That operator has rank n, so a
single push lands inside the row space, which is the maximizing subspace;
the estimate therefore reaches the true max-min instead of stalling at
sampling resolution.

The inner minimum over a frame Q is the smallest eigenvalue of Q^T A^T A Q,
computed by bisection on the count of negative LDL pivots (Sylvester
inertia) — no eigen-solver shared with the library code under test.
"""

import numpy as np


def gram_schmidt(columns):
    """Orthonormalize the trailing axis pair of (..., m, n), twice for stability."""
    q = np.array(columns, dtype=float, copy=True)
    n = q.shape[-1]
    for _ in range(2):
        for j in range(n):
            col = q[..., :, j]
            for i in range(j):
                prev = q[..., :, i]
                col = col - np.sum(col * prev, axis=-1, keepdims=True) * prev
            norm = np.linalg.norm(col, axis=-1, keepdims=True)
            q[..., :, j] = col / np.where(norm > 0, norm, 1.0)
    return q


def _negative_pivots(mat, shift):
    """Number of negative pivots of (mat - shift I); None on a zero pivot."""
    c = mat - shift * np.eye(mat.shape[0])
    count = 0
    for k in range(c.shape[0]):
        pivot = c[k, k]
        if pivot == 0.0:
            return None
        if pivot < 0.0:
            count += 1
        rest = c[k + 1 :, k]
        if rest.size:
            c[k + 1 :, k + 1 :] -= np.outer(rest, rest) / pivot
    return count


def eig_min_sym(mat, rel_tol=1e-15):
    """Smallest eigenvalue of a small symmetric matrix by inertia bisection."""
    mat = np.asarray(mat, dtype=float)
    scale = max(1.0, float(np.abs(mat).sum()))
    lo = -scale
    hi = float(np.min(np.diag(mat))) + rel_tol * scale
    tol = rel_tol * scale
    while hi - lo > tol:
        probe = 0.5 * (lo + hi)
        count = _negative_pivots(mat, probe)
        bumps = 0
        while count is None and bumps < 8:
            # singular elimination at this exact shift; nudge by one ulp
            probe = np.nextafter(probe, hi)
            count = _negative_pivots(mat, probe)
            bumps += 1
        if count is None or count >= 1:
            # zero pivot at step k means the k-th leading minor has eigenvalue
            # probe, and interlacing puts the smallest eigenvalue at or below it
            hi = probe
        else:
            lo = probe
    return 0.5 * (lo + hi)


def _frame_value(a, q):
    """Exact inf over unit v in span(Q) of |A v|."""
    b = a @ q
    return float(np.sqrt(max(eig_min_sym(b.T @ b), 0.0)))


def maxmin_estimate(a, frames=10000, rng=None, exact_top=4):
    """Max-min estimate of the smallest nontrivial singular value of a wide map."""
    a = np.asarray(a, dtype=float)
    n, m = a.shape
    rng = rng or np.random.default_rng(0)
    q = gram_schmidt(rng.standard_normal((frames, m, n)))
    # coarse ranking of sampled frames: shifted power iteration on Q^T H Q
    b = np.einsum("ij,kjl->kil", a, q)
    gram = np.einsum("kij,kil->kjl", b, b)
    shift = np.trace(gram, axis1=1, axis2=2)
    mats = shift[:, None, None] * np.eye(n) - gram
    v = np.full((frames, n), 1.0 / np.sqrt(n))
    for _ in range(50):
        v = np.einsum("kij,kj->ki", mats, v)
        v /= np.maximum(np.linalg.norm(v, axis=1, keepdims=True), 1e-300)
    rayleigh = np.einsum("ki,kij,kj->k", v, mats, v)
    coarse = shift - rayleigh
    order = np.argsort(coarse)[:exact_top]
    best = -np.inf
    h = a.T @ a
    for idx in order:
        best = max(best, _frame_value(a, q[idx]))
        pushed = h @ q[idx]
        if np.linalg.norm(pushed) > 1e-12:
            best = max(best, _frame_value(a, gram_schmidt(pushed)))
    return max(best, 0.0)
