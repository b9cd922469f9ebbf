"""Box-counting dimension estimation for point clouds.

Counts use half-open axis-aligned boxes of side eps anchored at the origin
(same dimension as ball covers, one hash per point); base-torus coordinates
are reduced mod 1 before hashing.  A scale ladder should nest (integer
refinement ratios, e.g. the default base-2 ladder) so occupied-box counts
are monotone; the estimate is the least-squares slope of log count against
log(1/eps) over a window that excludes saturated scales at both ends.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidWindowError
from .graphs import attractor_cloud, slice_cloud
from .parallel import chunked_map
from .symbolic import WORD_BUDGET

DEFAULT_EPS0 = 0.125
DEFAULT_RUNGS = 8
POINT_CHUNK = 1 << 18


@dataclass(frozen=True)
class ScaleSeries:
    """Occupied-box counts over a decreasing scale ladder."""

    scales: tuple
    counts: tuple
    resolution: float
    extent: float
    provenance: dict


@dataclass(frozen=True)
class DimFit:
    """Least-squares slope of the log-log counting curve over a window."""

    slope: float
    stderr: float
    window: tuple
    scales: tuple
    residuals: tuple


def default_scales(eps0=DEFAULT_EPS0, rungs=DEFAULT_RUNGS):
    """Geometric ladder eps0, eps0/2, ..., nested by construction."""
    if eps0 <= 0 or rungs < 1:
        raise InvalidInputError("need eps0 > 0 and at least one rung")
    return tuple(eps0 * 2.0 ** (-k) for k in range(rungs))


def _cell_indices(points, base_arity, eps):
    idx = np.empty(points.shape, dtype=np.int64)
    if base_arity:
        idx[:, :base_arity] = np.floor(np.mod(points[:, :base_arity], 1.0) / eps)
    idx[:, base_arity:] = np.floor(points[:, base_arity:] / eps)
    return idx


def _occupied_keys(points, base_arity, eps):
    idx = _cell_indices(points, base_arity, eps)
    lows = idx.min(axis=0)
    ranges = (idx.max(axis=0) - lows + 1).astype(np.int64)
    if np.prod(ranges, dtype=np.float64) < 2.0**62:
        key = np.zeros(idx.shape[0], dtype=np.int64)
        for d in range(idx.shape[1]):
            key = key * ranges[d] + (idx[:, d] - lows[d])
        return np.unique(key), tuple(lows), tuple(ranges)
    view = np.ascontiguousarray(idx).view([("", idx.dtype)] * idx.shape[1])
    return np.unique(view.ravel()), tuple(lows), tuple(ranges)


def box_count(cloud, eps, threads=1):
    """Number of occupied eps-cells, torus-aware in the base coordinates."""
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    points = cloud.points
    if points.shape[0] == 0:
        return 0
    if threads is None or threads <= 1 or points.shape[0] <= POINT_CHUNK:
        return int(_occupied_keys(points, cloud.base_arity, eps)[0].size)
    # global index offsets must be shared, so normalize once up front
    idx = _cell_indices(points, cloud.base_arity, eps)
    lows = idx.min(axis=0)
    ranges = (idx.max(axis=0) - lows + 1).astype(np.int64)
    if np.prod(ranges, dtype=np.float64) >= 2.0**62:
        view = np.ascontiguousarray(idx).view([("", idx.dtype)] * idx.shape[1])
        return int(np.unique(view.ravel()).size)
    key = np.zeros(idx.shape[0], dtype=np.int64)
    for d in range(idx.shape[1]):
        key = key * ranges[d] + (idx[:, d] - lows[d])
    partials = chunked_map(lambda lo, hi: np.unique(key[lo:hi]), key.size, threads, POINT_CHUNK)
    return int(np.unique(np.concatenate(partials)).size)


def cloud_extent(cloud):
    """Largest coordinate range; torus directions count as the full circle."""
    spans = cloud.points.max(axis=0) - cloud.points.min(axis=0)
    spans = np.asarray(spans, dtype=float)
    spans[: cloud.base_arity] = 1.0
    return float(spans.max())


def scale_series(cloud, scales, threads=1):
    """Counts across a decreasing ladder; rejects non-monotone ladders."""
    scales = tuple(float(e) for e in scales)
    if len(scales) == 0 or any(e <= 0 for e in scales):
        raise InvalidInputError("scales must be positive")
    if any(a <= b for a, b in zip(scales, scales[1:])):
        raise InvalidInputError("scales must be strictly decreasing")
    counts = tuple(box_count(cloud, eps, threads) for eps in scales)
    if any(a > b for a, b in zip(counts, counts[1:])):
        raise InvalidInputError("occupied-box counts decreased at a finer scale; ladder does not nest")
    return ScaleSeries(
        scales=scales,
        counts=counts,
        resolution=cloud.resolution,
        extent=cloud_extent(cloud),
        provenance=dict(cloud.provenance),
    )


def _auto_window(series):
    keep = [
        i
        for i, eps in enumerate(series.scales)
        if eps >= 2.0 * series.resolution and eps <= series.extent / 2.0
    ]
    if not keep:
        raise InvalidWindowError("no scale survives the saturation trim")
    return keep[0], keep[-1] + 1


def dim_fit(series, window=None):
    """OLS slope of log count vs log(1/eps); refuses saturated windows.

    ``window`` is a half-open index range into the ladder; by default scales
    below twice the cloud resolution or above half the cloud extent are
    trimmed away.
    """
    if window is None:
        lo, hi = _auto_window(series)
    else:
        lo, hi = int(window[0]), int(window[1])
        if not (0 <= lo < hi <= len(series.scales)):
            raise InvalidWindowError(f"window {window} outside the ladder")
        if any(eps < 2.0 * series.resolution for eps in series.scales[lo:hi]):
            raise InvalidWindowError("window includes scales finer than twice the cloud resolution")
    scales = series.scales[lo:hi]
    counts = series.counts[lo:hi]
    if len(scales) < 3:
        raise InvalidWindowError(f"need at least 3 scales in the window, have {len(scales)}")
    if any(c <= 0 for c in counts):
        raise InvalidWindowError("empty counts in the window")
    x = np.log(1.0 / np.asarray(scales))
    y = np.log(np.asarray(counts, dtype=float))
    xc = x - x.mean()
    slope = float(np.dot(xc, y) / np.dot(xc, xc))
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (intercept + slope * x)
    dof = len(scales) - 2
    stderr = float(np.sqrt(np.dot(residuals, residuals) / dof / np.dot(xc, xc)))
    return DimFit(
        slope=slope,
        stderr=stderr,
        window=(lo, hi),
        scales=scales,
        residuals=tuple(float(r) for r in residuals),
    )


def slice_dimension(spec, x, depth, scales=None, budget=WORD_BUDGET, threads=1, window=None):
    """Generate a slice cloud, count it across the ladder, fit the slope."""
    cloud = slice_cloud(spec, x, depth, budget)
    series = scale_series(cloud, scales or default_scales(), threads)
    return dim_fit(series, window)


def attractor_dimension(spec, depth, grid_spacing, scales=None, budget=WORD_BUDGET, threads=1, window=None):
    """Same pipeline over the full attractor cloud on a uniform base grid."""
    cloud = attractor_cloud(spec, depth, grid_spacing, budget, threads)
    series = scale_series(cloud, scales or default_scales(), threads)
    return dim_fit(series, window)
