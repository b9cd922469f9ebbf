"""Fiber-contraction thermodynamics: pressure approximants and their root.

The depth-n pressure approximant is

    P_n(s) = (1/n) log sum over depth-n words of exp(s * B_n(word)),

where B_n is the sum of log lam along the word's preimage orbit of a fixed
anchor.  P_n(0) = log N exactly, P_n is strictly decreasing in s, and its
unique positive zero is the dimension prediction for every stable slice.
Anchor sensitivity at finite depth is quantified by re-evaluating the sums
at the 2^l corner anchors of the unit cell, which sweep the corners of every
cylinder; the anchored value always sits inside that bracket.

All cylinder sums run through a fixed-tree log-sum-exp, so deep sweeps
neither underflow nor depend on work partitioning.
"""

import math
from dataclasses import dataclass
from itertools import product as _iter_product

import numpy as np

from .errors import InvalidInputError, InvalidSpecError
from .model import contraction
from .parallel import logsumexp
from .symbolic import WORD_BUDGET, branch_orbit, level_points

DEFAULT_TOL = 1e-10
DEFAULT_DEPTH = 14
_MAX_EXPANSIONS = 64


@dataclass(frozen=True)
class PressureCurve:
    """One pressure sample: anchored value and its corner-anchor bracket."""

    s: float
    depth: int
    value: float
    lower: float
    upper: float


@dataclass(frozen=True)
class BowenResult:
    """Root of the depth-n pressure approximant with its final bracket."""

    d0: float
    bracket_width: float
    depth: int
    iterations: int


def birkhoff_sum(spec, word, x):
    """Sum of log lam over the preimage orbit of x along ``word``."""
    orbit = branch_orbit(spec, word, x)
    return float(np.sum(np.log(contraction(spec, orbit))))


def log_contraction_sums(spec, depth, anchor=None, budget=WORD_BUDGET):
    """Birkhoff sums for every depth-``depth`` word, in lexicographic order."""
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    if anchor is None:
        anchor = np.zeros(spec.l)
    sums = np.zeros(1)
    for pts in level_points(spec, depth, anchor, budget):
        sums = np.repeat(sums, spec.degree) + np.log(contraction(spec, pts))
    return sums


def _corner_anchors(l):
    return [np.asarray(corner, dtype=float) for corner in _iter_product((0.0, 1.0), repeat=l)]


def _bracketed_sums(spec, depth, budget):
    """(anchored sums, per-word min over corners, per-word max over corners)."""
    value_sums = None
    low = high = None
    for corner in _corner_anchors(spec.l):
        sums = log_contraction_sums(spec, depth, corner, budget)
        if not corner.any():
            value_sums = sums
        low = sums if low is None else np.minimum(low, sums)
        high = sums if high is None else np.maximum(high, sums)
    return value_sums, low, high


def pressure_approx(spec, s, depth, budget=WORD_BUDGET):
    """Depth-``depth`` pressure approximant at parameter s, with bracket."""
    value_sums, low, high = _bracketed_sums(spec, depth, budget)
    s = float(s)
    value = logsumexp(s * value_sums) / depth
    ends = (logsumexp(np.minimum(s * low, s * high)) / depth, logsumexp(np.maximum(s * low, s * high)) / depth)
    return PressureCurve(s=s, depth=depth, value=value, lower=min(ends), upper=max(ends))


def pressure_table(spec, s_values, depth, budget=WORD_BUDGET):
    """Pressure sweep reusing one set of cylinder sums for every s."""
    value_sums, low, high = _bracketed_sums(spec, depth, budget)
    table = []
    for s in s_values:
        s = float(s)
        value = logsumexp(s * value_sums) / depth
        lo = logsumexp(np.minimum(s * low, s * high)) / depth
        hi = logsumexp(np.maximum(s * low, s * high)) / depth
        table.append(PressureCurve(s=s, depth=depth, value=value, lower=min(lo, hi), upper=max(lo, hi)))
    return table


def _descending_root(objective, tol, what):
    """Bisection zero of a strictly decreasing function with f(0) > 0."""
    f_lo = objective(0.0)
    if f_lo <= 0.0:
        raise InvalidSpecError(f"{what} is not positive at s = 0; nothing to bracket")
    lo, hi = 0.0, 1.0
    f_hi = objective(hi)
    expansions = 0
    while f_hi >= 0.0:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = objective(hi)
        expansions += 1
        if expansions > _MAX_EXPANSIONS:
            raise InvalidSpecError(f"{what} never becomes negative; contraction rates look wrong")
    iterations = expansions
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = objective(mid)
        if not (f_lo > f_mid > f_hi):
            raise InvalidSpecError(f"{what} is not strictly decreasing near s = {mid:.6g}")
        if f_mid > 0.0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        iterations += 1
    return 0.5 * (lo + hi), 0.5 * (hi - lo), iterations


def bowen_root(spec, tol=DEFAULT_TOL, depth=DEFAULT_DEPTH, budget=WORD_BUDGET):
    """Root of the depth-n pressure approximant, bracketed to ``tol``."""
    if tol <= 0:
        raise InvalidInputError("tolerance must be positive")
    sums = log_contraction_sums(spec, depth, None, budget)

    def pressure(s):
        return logsumexp(s * sums) / depth

    root, width, iterations = _descending_root(pressure, tol, "pressure")
    return BowenResult(d0=root, bracket_width=width, depth=depth, iterations=iterations)


def diam_proxy(spec, x, word):
    """Birkhoff-product stand-in for the diameter of the word's image cylinder.

    Exact for constant contraction; otherwise correct up to the uniform
    distortion constant, so tests compare proxies, never absolute diameters.
    """
    return math.exp(birkhoff_sum(spec, word, x)) * spec.diam_E


def finite_m_exponent(spec, x, m, tol=DEFAULT_TOL, budget=WORD_BUDGET):
    """The t solving sum over depth-m words of proxy^t = 1, by bisection.

    Every proxy must be below one (contraction), which makes the left side
    strictly decreasing in t.
    """
    if tol <= 0:
        raise InvalidInputError("tolerance must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    sums = log_contraction_sums(spec, m, x, budget)
    log_proxies = sums + math.log(spec.diam_E)
    if float(np.max(log_proxies)) >= 0.0:
        raise InvalidSpecError("some cylinder proxy is >= 1; contraction or fiber diameter is off")

    def objective(t):
        return logsumexp(t * log_proxies)

    root, _, _ = _descending_root(objective, tol, "cylinder-sum exponent")
    return root
