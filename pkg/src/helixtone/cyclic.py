"""Cyclic (phase) quantities and period rounding."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Phase:
    """A point of R/Z, stored by its representative in [0, 1)."""

    rep: float

    def __post_init__(self):
        if not 0.0 <= self.rep < 1.0:
            raise ValueError(f"phase representative {self.rep!r} not in [0, 1)")

    def __add__(self, other):
        if isinstance(other, Phase):
            other = other.rep
        return periodise(self.rep + other)

    def __sub__(self, other):
        if isinstance(other, Phase):
            other = other.rep
        return periodise(self.rep - other)

    def __float__(self):
        return self.rep


def frac(x):
    """Fractional part ``x - floor(x)`` forced into [0, 1); works on scalars and arrays."""
    if np.ndim(x) == 0:
        f = float(x) - math.floor(x)
        return 0.0 if f >= 1.0 else f
    x = np.asarray(x, dtype=float)
    f = x - np.floor(x)
    # x slightly below an integer can round to exactly 1.0
    f[f >= 1.0] = 0.0
    return f


def periodise(t):
    """Map a real number to the cyclic quantity it belongs to."""
    if isinstance(t, Phase):
        return t
    if not math.isfinite(t):
        raise ValueError(f"cannot periodise non-finite value {t!r}")
    return Phase(frac(t))


def representative(phi):
    """The representative of ``phi`` in [0, 1)."""
    return phi.rep


def round_period(period):
    """Round a wave period to the integer leap length of the skew grid.

    Nearest integer, ties away from zero. Periods below two samples are rejected
    since a wave needs at least two samples for step interpolation.
    """
    if not math.isfinite(period) or period < 2:
        raise ConfigError(f"wave period must be at least 2 samples, got {period!r}")
    return int(math.floor(period + 0.5))
