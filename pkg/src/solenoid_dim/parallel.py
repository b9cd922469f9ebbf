"""Deterministic work splitting and reductions.

Chunk boundaries depend only on the input size, never on the worker count,
so serial and threaded runs reduce the same partial results in the same
order and produce bit-identical output.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

DEFAULT_CHUNK = 1 << 16


def chunk_ranges(n_items, chunk=DEFAULT_CHUNK):
    """Half-open index ranges covering range(n_items) in fixed-size chunks."""
    if n_items <= 0:
        return []
    chunk = max(1, int(chunk))
    return [(lo, min(lo + chunk, n_items)) for lo in range(0, n_items, chunk)]


def chunked_map(fn, n_items, threads=1, chunk=DEFAULT_CHUNK):
    """Apply ``fn(lo, hi)`` to every chunk range; results in chunk order."""
    ranges = chunk_ranges(n_items, chunk)
    if threads is None or threads <= 1 or len(ranges) <= 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=int(threads)) as pool:
        return list(pool.map(lambda r: fn(*r), ranges))


def _lse_block(values):
    m = float(np.max(values))
    if not np.isfinite(m):
        return m
    return m + float(np.log(np.sum(np.exp(values - m))))


def logsumexp(values, chunk=4096):
    """log(sum(exp(values))) with a fixed pairwise reduction tree.

    Blocks of ``chunk`` values are reduced with the usual max-shift trick and
    the block results are combined pairwise, so the result does not depend on
    how the work was partitioned across threads.
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return float("-inf")
    parts = [_lse_block(values[lo:hi]) for lo, hi in chunk_ranges(values.size, chunk)]
    while len(parts) > 1:
        merged = [np.logaddexp(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return float(parts[0])
