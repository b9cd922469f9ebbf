"""Symbolic coding of the base dynamics.

The diagonal base map has the product grid as a Markov partition, so the
coding is a full shift on N = prod(M) letters: letter s names the grid cell
with multi-index s written in mixed radix (M_1, ..., M_l), most significant
digit first.

Branch order convention: ``cylinder_point(word, x)`` applies the branch of
the FIRST letter to x first, then the second letter, and so on; the returned
point x0 satisfies phi^n(x0) = x.  Worked example for M = (2), x = 0,
word = (1, 0): branch 1 sends 0 to 0.5, branch 0 sends 0.5 to 0.25, and
indeed phi^2(0.25) = 0.  Under this convention the points of
``branch_orbit`` form a genuine backward orbit (phi maps each one to its
predecessor), which is what the fiber compositions downstream rely on.
"""

from dataclasses import dataclass
from itertools import product as _iter_product

import math

import numpy as np

from .errors import BudgetError, InvalidInputError

WORD_BUDGET = 2**24


@dataclass(frozen=True)
class CylinderSet:
    """A depth-n cylinder: its word, anchor preimage, and exact cell diameter."""

    word: tuple
    anchor: tuple
    diameter: float


def check_budget(count, budget, what):
    if count > budget:
        raise BudgetError(f"{what} needs {count} items, over the budget of {int(budget)}")


def decode_symbol(spec, symbol):
    """Letter -> grid multi-index, mixed radix with the last coordinate fastest."""
    s = int(symbol)
    if not 0 <= s < spec.degree:
        raise InvalidInputError(f"symbol {symbol} outside alphabet of size {spec.degree}")
    cell = [0] * spec.l
    for i in range(spec.l - 1, -1, -1):
        s, cell[i] = divmod(s, spec.M[i])
    return tuple(cell)


def encode_symbol(spec, cell):
    """Grid multi-index -> letter; inverse of :func:`decode_symbol`."""
    if len(cell) != spec.l:
        raise InvalidInputError("cell index has wrong length")
    s = 0
    for i in range(spec.l):
        if not 0 <= cell[i] < spec.M[i]:
            raise InvalidInputError(f"cell index {cell} outside the grid")
        s = s * spec.M[i] + int(cell[i])
    return s


def cell_table(spec):
    """(N, l) float array of all grid multi-indices in letter order."""
    return np.asarray([decode_symbol(spec, s) for s in range(spec.degree)], dtype=float)


def inverse_branch(spec, symbol, x):
    """The preimage of x under the base map inside the cell of ``symbol``."""
    cell = np.asarray(decode_symbol(spec, symbol), dtype=float)
    x = np.asarray(x, dtype=float)
    return (x + cell) / np.asarray(spec.M, dtype=float)


def branch_orbit(spec, word, x):
    """(n, l) array of successive preimages of x along ``word``.

    Row k-1 is the depth-k point; the base map sends each row to the one
    before it (and the first row to x).
    """
    if len(word) == 0:
        raise InvalidInputError("word must be nonempty")
    x = np.asarray(x, dtype=float)
    out = np.empty((len(word), spec.l))
    current = x
    for k, symbol in enumerate(word):
        current = inverse_branch(spec, symbol, current)
        out[k] = current
    return out


def cylinder_point(spec, word, x):
    """The unique n-step preimage of x with itinerary ``word``."""
    return branch_orbit(spec, word, x)[-1]


def cylinder_set(spec, word, x_ref):
    """Cylinder record for ``word`` anchored at x_ref, with exact diameter."""
    anchor = cylinder_point(spec, word, x_ref)
    n = len(word)
    widths = [float(m) ** (-n) for m in spec.M]
    return CylinderSet(word=tuple(int(s) for s in word), anchor=tuple(anchor), diameter=float(np.linalg.norm(widths)))


def word_count(spec, n):
    return spec.degree**n


def enumerate_words(spec, n, budget=WORD_BUDGET):
    """All words of length n in lexicographic order, streamed."""
    if n < 0:
        raise InvalidInputError("word length must be >= 0")
    check_budget(word_count(spec, n), budget, f"enumerating depth-{n} words")
    return _iter_product(range(spec.degree), repeat=n)


def word_index(spec, word):
    """Lexicographic rank of a word among equal-length words."""
    idx = 0
    for s in word:
        idx = idx * spec.degree + int(s)
    return idx


def index_word(spec, n, idx):
    """Inverse of :func:`word_index` for words of length n."""
    symbols = [0] * n
    for k in range(n - 1, -1, -1):
        idx, symbols[k] = divmod(int(idx), spec.degree)
    return tuple(symbols)


def level_points(spec, n, anchor, budget=WORD_BUDGET):
    """Preimage tree of ``anchor``: level j holds the depth-j points.

    Returns arrays P_1, ..., P_n where P_j has shape (N^j, l) and row
    ``word_index(prefix)`` is the depth-j preimage along that prefix.  The
    anchor is NOT reduced mod 1, so corner anchors like x = 1 stay at the
    closed upper cell faces.
    """
    check_budget(word_count(spec, n), budget, f"depth-{n} preimage tree")
    cells = cell_table(spec)
    m = np.asarray(spec.M, dtype=float)
    levels = []
    current = np.asarray(anchor, dtype=float).reshape(1, spec.l)
    for _ in range(n):
        expanded = np.repeat(current, spec.degree, axis=0)
        tiled = np.tile(cells, (current.shape[0], 1))
        current = (expanded + tiled) / m
        levels.append(current)
    return levels


def reachable_cells(spec, n):
    """Number of depth-n cylinders (full shift: N^n); transfer-matrix path.

    The admissibility matrix of the grid partition is all-ones, but the
    power-of-the-matrix count is kept as the extension point for genuinely
    Markov (non-full-shift) bases.
    """
    adjacency = np.ones((spec.degree, spec.degree), dtype=object)
    if n <= 0:
        return 1
    total = np.linalg.matrix_power(adjacency, n - 1).sum() if n > 1 else spec.degree
    return int(total)


def base_orbit_matches(spec, word, x, point, tol=1e-12):
    """Check phi^n(point) == x, the defining identity of cylinder points."""
    from .model import base_map

    current = np.asarray(point, dtype=float)
    for _ in range(len(word)):
        current = base_map(spec, current)
    delta = np.abs(current - np.mod(np.asarray(x, dtype=float), 1.0))
    delta = np.minimum(delta, 1.0 - delta)
    return bool(np.all(delta <= tol)), current


def max_depth_within(spec, budget=WORD_BUDGET):
    """Largest n with N^n within budget."""
    return int(math.floor(math.log(budget) / math.log(spec.degree)))
