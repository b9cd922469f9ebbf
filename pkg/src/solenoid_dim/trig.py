"""Trigonometric polynomials on the l-torus.

A field is a finite sum  c * cos(2 pi k.x) + s * sin(2 pi k.x)  over integer
frequency vectors k, so evaluation is 1-periodic in every coordinate and
rigorous range bounds come from summing term amplitudes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TrigPolynomial:
    """Scalar trig polynomial; ``terms`` holds (frequency, cos_coeff, sin_coeff)."""

    dimension: int
    terms: tuple

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidInputError("dimension must be >= 1")
        seen = set()
        for freq, c, s in self.terms:
            if len(freq) != self.dimension or not all(isinstance(k, int) for k in freq):
                raise InvalidInputError(f"frequency {freq!r} is not an integer {self.dimension}-vector")
            if freq in seen:
                raise InvalidInputError(f"duplicate frequency {freq!r}")
            seen.add(freq)
            if not (np.isfinite(c) and np.isfinite(s)):
                raise InvalidInputError("non-finite coefficient")
            if all(k == 0 for k in freq) and s != 0.0:
                raise InvalidInputError("sine coefficient of the zero frequency has no effect")

    def value(self, x):
        """Evaluate at x of shape (..., dimension); returns shape (...)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1])
        for freq, c, s in self.terms:
            if all(k == 0 for k in freq):
                out = out + c
                continue
            phase = TWO_PI * (x @ np.asarray(freq, dtype=float))
            out = out + c * np.cos(phase) + s * np.sin(phase)
        return out

    def gradient(self, x):
        """Jacobian row at x: shape (..., dimension)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (self.dimension,))
        for freq, c, s in self.terms:
            k = np.asarray(freq, dtype=float)
            if not k.any():
                continue
            phase = TWO_PI * (x @ k)
            radial = -c * np.sin(phase) + s * np.cos(phase)
            out = out + radial[..., None] * (TWO_PI * k)
        return out

    def range_bound(self):
        """Rigorous (lo, hi) enclosure: constant term +/- sum of amplitudes."""
        const = 0.0
        spread = 0.0
        for freq, c, s in self.terms:
            if all(k == 0 for k in freq):
                const += c
            else:
                spread += float(np.hypot(c, s))
        return const - spread, const + spread

    def scan_range(self, samples=4096):
        """(min, max) over a uniform grid; diagnostic, not rigorous."""
        per_axis = max(2, int(round(samples ** (1.0 / self.dimension))))
        axes = [np.arange(per_axis) / per_axis] * self.dimension
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dimension)
        vals = self.value(grid)
        return float(np.min(vals)), float(np.max(vals))

    def is_zero(self):
        return all(c == 0.0 and s == 0.0 for _, c, s in self.terms)


def trig_poly(dimension, terms=()):
    """Build a TrigPolynomial with canonically sorted, coerced terms."""
    cleaned = []
    for freq, c, s in terms:
        freq = tuple(int(k) for k in freq)
        cleaned.append((freq, float(c), float(s)))
    cleaned.sort(key=lambda t: t[0])
    return TrigPolynomial(dimension, tuple(cleaned))


def constant(dimension, value):
    """The constant field x -> value."""
    if value == 0.0:
        return trig_poly(dimension, ())
    return trig_poly(dimension, [((0,) * dimension, value, 0.0)])


def zero(dimension):
    return trig_poly(dimension, ())
