"""Classic wavetable oscillator on the orthogonal (time, phase) grid.

The input is chopped into consecutive slices of ``T`` samples, ``T`` being
an integer.  A query ``(t, phi)`` interpolates linearly within slice
``floor(t)`` and the next one at position ``s = T*rep(phi)``, then linearly
between the two slices.  There is no wrap-around inside a slice, which is
why the usable span is one wave shorter than the signal.
"""

import math

import numpy as np

from .cyclic import periodise
from .errors import BoundaryError, ConfigError
from .oscillator import as_curve, _resolve_count


class WavetableTone:
    """Samples chopped into wavetables of integral length ``period``."""

    def __init__(self, samples, period):
        if int(period) != period or period < 2:
            raise ConfigError(f"wavetable period must be an integer of at least 2, got {period!r}")
        u = np.array(samples, dtype=float).ravel()
        if len(u) < 2 * int(period):
            raise ConfigError(f"wavetable tone needs at least {2 * int(period)} samples, got {len(u)}")
        u.setflags(write=False)
        self.samples = u
        self.period = int(period)

    def __len__(self):
        return len(self.samples)

    @property
    def last_slice(self):
        """Largest ``floor(t)`` whose slice and successor are complete."""
        return (len(self.samples) - 1 - 2 * self.period) // self.period


def time_range(wt):
    """Interpolable shape times ``[0, last_slice + 1]``."""
    k = wt.last_slice
    if k < 0:
        raise ConfigError("wavetable tone is too short for linear interpolation")
    return 0.0, float(k + 1)


def _split(x, top):
    i = np.minimum(np.floor(x), top)
    return i.astype(np.int64), x - i


def eval_wavetable(wt, t, phi):
    """Bilinear value at shape time ``t`` and phase ``phi``."""
    u, T = wt.samples, wt.period
    s = T * periodise(phi).rep
    j = min(math.floor(s), T - 1)
    fs = s - j
    i = math.floor(t)
    if t == wt.last_slice + 1:
        i -= 1
    ft = t - i
    n = T * i + j
    for idx in (n, n + T + 1):
        if not 0 <= idx < len(u):
            raise BoundaryError(idx, len(u))
    a = u[n] + fs * (u[n + 1] - u[n])
    b = u[n + T] + fs * (u[n + T + 1] - u[n + T])
    return float(a + ft * (b - a))


def render(wt, h, g, count=None):
    """Render along control curves, clamping shape time to the usable span."""
    h, g = as_curve(h), as_curve(g)
    count = _resolve_count(h, g, count)
    u, T = wt.samples, wt.period
    t_lo, t_hi = time_range(wt)
    t = np.clip(h.values(count), t_lo, t_hi)
    phase = g.values(count)
    s = T * (phase - np.floor(phase))
    j, fs = _split(s, T - 1)
    i, ft = _split(t, wt.last_slice)
    n = T * i + j
    a = u[n] + fs * (u[n + 1] - u[n])
    b = u[n + T] + fs * (u[n + T + 1] - u[n + T])
    return a + ft * (b - a)
