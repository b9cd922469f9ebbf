"""Unstable graphs over the base and the point clouds they sweep out.

A depth-n word describes one component of the n-th image of the solid
torus; over a base point x that component passes through (x, S(x, word))
where S is the backward fiber composition started at the origin.  Writing
c(x) for the scalar contraction multiplier and F(x) for the middle
translation, the value over x is the prefix-weighted sum

    y = sum_i  c(x_1) ... c(x_{i-1}) F(x_i),

with x_1, x_2, ... the successive preimages of x along the word.  The base
derivative of the y-part obeys the backward recursion

    DG_k = (D_x nu(x_k, y_{k+1}) + c(x_k) DG_{k+1}) M^{-1},   DG_{n+1} = 0,

whose top level is the derivative the transversality scan consumes; the
recursion reproduces the term-by-term series exactly and is numerically
steadier than summing it.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .model import (
    fiber_to_vector,
    inner_translation,
    multiplier,
    multiplier_gradient,
    translation,
    translation_gradient,
)
from .parallel import chunked_map
from .specfile import spec_hash
from .symbolic import WORD_BUDGET, branch_orbit, cell_table, check_budget, word_count

DEDUP_SPACING = 1e-12
GRID_CHUNK = 128


@dataclass(frozen=True)
class GraphPatch:
    """Value and base-derivative data of one unstable graph at one base point."""

    x: tuple
    word: tuple
    y: np.ndarray
    z: np.ndarray
    rho_derivative: np.ndarray
    resolution: float


@dataclass(frozen=True)
class PointCloud:
    """Deterministically generated sample of a slice or of the attractor."""

    points: np.ndarray
    base_arity: int
    ambient_arity: int
    resolution: float
    provenance: dict
    word_index: np.ndarray
    grid_index: np.ndarray

    def __len__(self):
        return self.points.shape[0]


def _fiber_dtype(spec):
    return np.complex128 if spec.p == 2 else np.float64


def graph_value(spec, x, word):
    """Fiber coordinates (y, z) of the graph of ``word`` over x."""
    orbit = branch_orbit(spec, word, x)
    w = _fiber_dtype(spec)(0.0)
    z = np.zeros(spec.d)
    for k in range(len(word) - 1, -1, -1):
        xk = orbit[k]
        w = multiplier(spec, xk) * w + translation(spec, xk)
        z = spec.lambda_tilde * z + inner_translation(spec, xk)
    return fiber_to_vector(spec, w), z


def graph_rho_derivative(spec, x, word):
    """Base derivative of the middle-fiber part, as a real (p, l) matrix."""
    orbit = branch_orbit(spec, word, x)
    minv = 1.0 / np.asarray(spec.M, dtype=float)
    w = _fiber_dtype(spec)(0.0)
    dg = np.zeros(spec.l, dtype=_fiber_dtype(spec))
    for k in range(len(word) - 1, -1, -1):
        xk = orbit[k]
        dx_nu = multiplier_gradient(spec, xk) * w + translation_gradient(spec, xk)
        dg = (dx_nu + multiplier(spec, xk) * dg) * minv
        w = multiplier(spec, xk) * w + translation(spec, xk)
    if spec.p == 1:
        return dg[None, :].astype(float)
    return np.stack([dg.real, dg.imag], axis=0)


def truncation_resolution(spec, depth):
    """Distance from a depth-``depth`` sample to the true attractor point."""
    lo, hi = spec.lambda_field.range_bound()
    return hi**depth * spec.E_radius + spec.lambda_tilde**depth * spec.F_radius


def graph_patch(spec, x, word):
    y, z = graph_value(spec, x, word)
    return GraphPatch(
        x=tuple(np.atleast_1d(np.asarray(x, dtype=float))),
        word=tuple(int(s) for s in word),
        y=y,
        z=z,
        rho_derivative=graph_rho_derivative(spec, x, word),
        resolution=truncation_resolution(spec, len(word)),
    )


# -- batched evaluation over every word of a given depth ---------------------


def fiber_values_batch(spec, anchors, depth, budget=WORD_BUDGET):
    """(Y, Z) over all words: shapes (G, N^depth, p) and (G, N^depth, d).

    Word axis is in lexicographic order; anchors has shape (G, l).
    """
    anchors = np.asarray(anchors, dtype=float).reshape(-1, spec.l)
    n_words = word_count(spec, depth)
    check_budget(anchors.shape[0] * n_words, budget, "batched graph evaluation")
    cells = cell_table(spec)
    m = np.asarray(spec.M, dtype=float)
    dtype = _fiber_dtype(spec)
    g = anchors.shape[0]
    pts = anchors[:, None, :]
    pref = np.ones((g, 1), dtype=dtype)
    pref_z = np.ones((g, 1))
    acc = np.zeros((g, 1), dtype=dtype)
    acc_z = np.zeros((g, 1, spec.d))
    for _ in range(depth):
        k = pts.shape[1]
        pts = (np.repeat(pts, spec.degree, axis=1) + np.tile(cells, (k, 1))[None, :, :]) / m
        acc = np.repeat(acc, spec.degree, axis=1) + np.repeat(pref, spec.degree, axis=1) * translation(spec, pts)
        acc_z = (
            np.repeat(acc_z, spec.degree, axis=1)
            + np.repeat(pref_z, spec.degree, axis=1)[..., None] * inner_translation(spec, pts)
        )
        pref = np.repeat(pref, spec.degree, axis=1) * multiplier(spec, pts)
        pref_z = np.repeat(pref_z, spec.degree, axis=1) * spec.lambda_tilde
    return fiber_to_vector(spec, acc), acc_z


def rho_derivatives_batch(spec, anchors, depth, budget=WORD_BUDGET):
    """Values and base derivatives over all words, for the overlap scan.

    Returns (values, derivatives) with shapes (G, N^depth) scalar/complex and
    (G, N^depth, l) of the same scalar kind.
    """
    anchors = np.asarray(anchors, dtype=float).reshape(-1, spec.l)
    n_words = word_count(spec, depth)
    check_budget(anchors.shape[0] * n_words, budget, "batched derivative evaluation")
    cells = cell_table(spec)
    m = np.asarray(spec.M, dtype=float)
    minv = 1.0 / m
    levels = []
    pts = anchors[:, None, :]
    for _ in range(depth):
        k = pts.shape[1]
        pts = (np.repeat(pts, spec.degree, axis=1) + np.tile(cells, (k, 1))[None, :, :]) / m
        levels.append(pts)
    dtype = _fiber_dtype(spec)
    g = anchors.shape[0]
    w = np.zeros((g, n_words), dtype=dtype)
    dg = np.zeros((g, n_words, spec.l), dtype=dtype)
    for k in range(depth - 1, -1, -1):
        xk = np.repeat(levels[k], spec.degree ** (depth - 1 - k), axis=1)
        mult = multiplier(spec, xk)
        dx_nu = multiplier_gradient(spec, xk) * w[..., None] + translation_gradient(spec, xk)
        dg = (dx_nu + mult[..., None] * dg) * minv
        w = mult * w + translation(spec, xk)
    return w, dg


def rho_matrix(spec, row):
    """Scalar/complex derivative row (l,) -> real (p, l) matrix."""
    row = np.asarray(row)
    if spec.p == 1:
        return np.real(row)[None, :].astype(float)
    return np.stack([row.real, row.imag], axis=0)


# -- point clouds ------------------------------------------------------------


def _dedup(points, word_index, grid_index, spacing=DEDUP_SPACING):
    keys = np.round(points / spacing).astype(np.int64)
    view = np.ascontiguousarray(keys).view([("", keys.dtype)] * keys.shape[1])
    _, first = np.unique(view.ravel(), return_index=True)
    keep = np.sort(first)
    return points[keep], word_index[keep], grid_index[keep]


def _assemble(spec, base_rows, y, z):
    return np.hstack([base_rows, y, z])


def slice_cloud(spec, x, depth, budget=WORD_BUDGET):
    """One sample point per depth-``depth`` word of the stable slice over x.

    The cloud is dense in the slice at the truncation resolution and
    coincident samples (degenerate maps) are merged at 1e-12.
    """
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (spec.l,):
        raise InvalidInputError(f"base point must have shape ({spec.l},)")
    y, z = fiber_values_batch(spec, x[None, :], depth, budget)
    n_words = y.shape[1]
    points = _assemble(spec, np.tile(np.mod(x, 1.0), (n_words, 1)), y[0], z[0])
    word_index = np.arange(n_words, dtype=np.int64)
    grid_index = np.zeros(n_words, dtype=np.int64)
    points, word_index, grid_index = _dedup(points, word_index, grid_index)
    return PointCloud(
        points=points,
        base_arity=spec.l,
        ambient_arity=spec.l + spec.p + spec.d,
        resolution=truncation_resolution(spec, depth),
        provenance={
            "spec_hash": spec_hash(spec),
            "kind": "slice",
            "depth": depth,
            "base_point": ",".join(repr(float(c)) for c in x),
        },
        word_index=word_index,
        grid_index=grid_index,
    )


def base_grid(spec, spacing):
    """Uniform lattice on the torus with the given spacing (1/spacing integer-ish)."""
    if spacing <= 0 or spacing > 1:
        raise InvalidInputError("grid spacing must lie in (0, 1]")
    per_axis = max(1, int(round(1.0 / spacing)))
    axes = [np.arange(per_axis) / per_axis] * spec.l
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, spec.l)
    return grid


def attractor_cloud(spec, depth, grid_spacing, budget=WORD_BUDGET, threads=1):
    """Union of slice clouds over a uniform base grid; canonical point order."""
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    grid = base_grid(spec, grid_spacing)
    n_words = word_count(spec, depth)
    check_budget(grid.shape[0] * n_words, budget, "attractor cloud")

    def one_chunk(lo, hi):
        anchors = grid[lo:hi]
        y, z = fiber_values_batch(spec, anchors, depth, budget)
        rows = []
        for i in range(anchors.shape[0]):
            base_rows = np.tile(anchors[i], (n_words, 1))
            rows.append(_assemble(spec, base_rows, y[i], z[i]))
        return np.vstack(rows)

    blocks = chunked_map(one_chunk, grid.shape[0], threads=threads, chunk=GRID_CHUNK)
    points = np.vstack(blocks)
    grid_index = np.repeat(np.arange(grid.shape[0], dtype=np.int64), n_words)
    word_index = np.tile(np.arange(n_words, dtype=np.int64), grid.shape[0])
    points, word_index, grid_index = _dedup(points, word_index, grid_index)
    return PointCloud(
        points=points,
        base_arity=spec.l,
        ambient_arity=spec.l + spec.p + spec.d,
        resolution=max(grid_spacing, truncation_resolution(spec, depth)),
        provenance={
            "spec_hash": spec_hash(spec),
            "kind": "attractor",
            "depth": depth,
            "grid_spacing": repr(float(grid_spacing)),
        },
        word_index=word_index,
        grid_index=grid_index,
    )


def cloud_column_names(spec):
    names = [f"x{i + 1}" for i in range(spec.l)]
    names += [f"y{i + 1}" for i in range(spec.p)]
    names += [f"z{i + 1}" for i in range(spec.d)]
    return names


def write_cloud_csv(cloud, path, column_names=None):
    """Cloud CSV plus a ``<path>.meta`` sidecar with provenance."""
    dim = cloud.points.shape[1]
    names = column_names or [f"c{i}" for i in range(dim)]
    lines = [",".join(names + ["word_index", "grid_index"])]
    for row, wi, gi in zip(cloud.points, cloud.word_index, cloud.grid_index):
        lines.append(",".join([repr(float(v)) for v in row] + [str(int(wi)), str(int(gi))]))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
    meta = dict(cloud.provenance)
    meta["resolution"] = repr(float(cloud.resolution))
    meta["points"] = str(len(cloud))
    with open(str(path) + ".meta", "w", encoding="utf-8") as handle:
        for key in sorted(meta):
            handle.write(f"{key}: {meta[key]}\n")
