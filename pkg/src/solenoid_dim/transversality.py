"""Numerical probe of intrinsic transversality.

Two depth-k components over the same base point with different first letters
either stay apart in the middle fiber or cross; where they come within the
gap threshold, the smallest singular value of the difference of their base
derivatives measures how transversally they cross.  A positive floor over a
finite grid and depth is evidence for intrinsic transversality, never a
proof: the definition quantifies over all components and all balls, the scan
samples finitely many.  The verdict vocabulary says exactly that.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ShapeError
from .graphs import base_grid, graph_rho_derivative, graph_value, rho_derivatives_batch
from .linalg import smallest_singular_value
from .parallel import chunked_map
from .symbolic import WORD_BUDGET, check_budget, word_count

MARGIN_FLOOR = 1e-9
MAX_RECORDS = 10000
VERDICT_NO_OVERLAPS = "no-overlaps-found"
VERDICT_POSITIVE = "transversal-margin-positive"
VERDICT_DEGENERATE = "degenerate-margin"
_PAIR_BLOCK_TARGET = 1 << 22


@dataclass(frozen=True)
class OverlapCandidate:
    """A near-overlap: base point, word pair, fiber gap, derivative margin."""

    x: tuple
    word_a: tuple
    word_b: tuple
    gap: float
    margin: float


@dataclass(frozen=True)
class TransversalityReport:
    """Scan outcome over one grid and depth.

    ``candidates`` keeps at most ``max_records`` near-overlaps, worst margin
    first; the minimum/aggregate figures always cover every candidate found.
    ``c1_estimate`` is half the worst margin (None when nothing came close).
    """

    depth: int
    gap_threshold: float
    grid_spacing: float
    margin_floor: float
    candidates: tuple
    candidate_count: int
    pair_count: int
    min_margin: float
    c1_estimate: float
    verdict: str


def default_gap_threshold(spec, depth):
    """Twice the two-component tube width at the given depth."""
    _, hi = spec.lambda_field.range_bound()
    return 4.0 * hi**depth * spec.diam_E


def _require_wide(spec):
    if spec.p > spec.l:
        raise ShapeError(
            f"middle-fiber dimension {spec.p} exceeds base dimension {spec.l}: "
            "derivative differences cannot be surjective, margins are undefined"
        )


def margin_at(spec, x, word_a, word_b):
    """(gap, margin) for one word pair over one base point."""
    word_a = tuple(int(s) for s in word_a)
    word_b = tuple(int(s) for s in word_b)
    if len(word_a) != len(word_b) or len(word_a) == 0:
        raise InvalidInputError("words must be nonempty and of equal length")
    if word_a[0] == word_b[0]:
        raise InvalidInputError("words must start with distinct letters to describe distinct components")
    _require_wide(spec)
    ya, _ = graph_value(spec, x, word_a)
    yb, _ = graph_value(spec, x, word_b)
    gap = float(np.linalg.norm(ya - yb))
    diff = graph_rho_derivative(spec, x, word_a) - graph_rho_derivative(spec, x, word_b)
    return gap, smallest_singular_value(diff)


def _batched_margins(spec, rows):
    """Smallest singular value of each (p, l) difference, rows scalar/complex (K, l)."""
    if spec.p == 1:
        return np.sqrt(np.sum(np.real(rows) ** 2, axis=1))
    g11 = np.sum(rows.real**2, axis=1)
    g22 = np.sum(rows.imag**2, axis=1)
    g12 = np.sum(rows.real * rows.imag, axis=1)
    disc = np.sqrt((g11 - g22) ** 2 + 4.0 * g12**2)
    return np.sqrt(np.clip(0.5 * (g11 + g22 - disc), 0.0, None))


def _distinct_first_pairs(n_letters, block):
    total_words = n_letters * block
    return total_words * (total_words - 1) // 2 - n_letters * (block * (block - 1) // 2)


def overlap_scan(
    spec,
    depth,
    grid_spacing,
    gap_threshold=None,
    budget=WORD_BUDGET,
    threads=1,
    margin_floor=MARGIN_FLOOR,
    max_records=MAX_RECORDS,
):
    """Scan every distinct-first-letter word pair over a uniform base grid.

    Pairs whose middle-fiber gap is at most the threshold are recorded with
    their margins; everything else only enters the aggregate pair count.
    """
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    _require_wide(spec)
    if gap_threshold is None:
        gap_threshold = default_gap_threshold(spec, depth)
    grid = base_grid(spec, grid_spacing)
    n_words = word_count(spec, depth)
    check_budget(grid.shape[0] * n_words * (n_words - 1) // 2, budget, "overlap scan pair enumeration")

    n_letters = spec.degree
    block = n_words // n_letters
    grid_chunk = max(1, _PAIR_BLOCK_TARGET // max(1, block * block))

    def scan_chunk(lo, hi):
        anchors = grid[lo:hi]
        values, derivs = rho_derivatives_batch(spec, anchors, depth, budget)
        found = []
        for sa in range(n_letters):
            va = values[:, sa * block : (sa + 1) * block]
            da = derivs[:, sa * block : (sa + 1) * block]
            for sb in range(sa + 1, n_letters):
                vb = values[:, sb * block : (sb + 1) * block]
                db = derivs[:, sb * block : (sb + 1) * block]
                gaps = np.abs(va[:, :, None] - vb[:, None, :])
                gi, ia, ib = np.nonzero(gaps <= gap_threshold)
                if gi.size == 0:
                    continue
                margins = _batched_margins(spec, da[gi, ia] - db[gi, ib])
                found.append(
                    (
                        lo + gi,
                        sa * block + ia.astype(np.int64),
                        sb * block + ib.astype(np.int64),
                        gaps[gi, ia, ib],
                        margins,
                    )
                )
        return found

    chunks = chunked_map(scan_chunk, grid.shape[0], threads=threads, chunk=grid_chunk)
    hits = [block_hits for chunk in chunks for block_hits in chunk]
    if hits:
        grid_idx = np.concatenate([h[0] for h in hits])
        idx_a = np.concatenate([h[1] for h in hits])
        idx_b = np.concatenate([h[2] for h in hits])
        gaps = np.concatenate([h[3] for h in hits])
        margins = np.concatenate([h[4] for h in hits])
    else:
        grid_idx = idx_a = idx_b = np.zeros(0, dtype=np.int64)
        gaps = margins = np.zeros(0)

    candidate_count = int(margins.size)
    pair_count = grid.shape[0] * _distinct_first_pairs(n_letters, block)
    if candidate_count == 0:
        verdict = VERDICT_NO_OVERLAPS
        min_margin = float("nan")
        c1 = None
        kept = ()
    else:
        min_margin = float(np.min(margins))
        c1 = 0.5 * min_margin
        verdict = VERDICT_DEGENERATE if min_margin < margin_floor else VERDICT_POSITIVE
        order = np.lexsort((idx_b, idx_a, grid_idx, margins))[: int(max_records)]
        from .symbolic import index_word

        kept = tuple(
            OverlapCandidate(
                x=tuple(float(c) for c in grid[grid_idx[i]]),
                word_a=index_word(spec, depth, idx_a[i]),
                word_b=index_word(spec, depth, idx_b[i]),
                gap=float(gaps[i]),
                margin=float(margins[i]),
            )
            for i in order
        )
    return TransversalityReport(
        depth=depth,
        gap_threshold=float(gap_threshold),
        grid_spacing=float(grid_spacing),
        margin_floor=float(margin_floor),
        candidates=kept,
        candidate_count=candidate_count,
        pair_count=pair_count,
        min_margin=min_margin,
        c1_estimate=c1,
        verdict=verdict,
    )
