"""Discrete evaluation of the cylinder on the skew (step, leap) grid.

Samples ``u(n)`` sit on the unit helix at time ``n/T``.  The step direction
walks from one sample to the next, the leap direction jumps ``round(T)``
samples to (nearly) the same phase one wave later.  Locating the cell of a
query ``(t, phi)`` costs a fixed handful of operations:

    l = t - rep(phi)
    r = t*T - frac(l)*round(T)

after which the value is a separable interpolation of the samples
``u(floor(r) + j + k*round(T))`` with step weights from ``frac(r)`` and leap
weights from ``frac(l)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cyclic import frac, periodise, round_period
from .errors import BoundaryError, ConfigError
from .kernels import HAT

# Positions closer than this to a node count as exact node hits.  This keeps
# identity-like renders bit-exact and stops round-off from touching samples
# one past an interval end.
SNAP = 1e-9

_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class SampledTone:
    """Discrete samples ``u`` holding a tone with (possibly fractional) period ``T``."""

    samples: np.ndarray
    period: float

    def __post_init__(self):
        leap = round_period(self.period)
        u = np.array(self.samples, dtype=float).ravel()
        if not np.all(np.isfinite(u)):
            raise ConfigError("tone contains non-finite samples")
        if len(u) < 2 * leap + 1:
            raise ConfigError(
                f"tone of {len(u)} samples is shorter than two waves of {leap} samples plus one")
        u.setflags(write=False)
        object.__setattr__(self, "samples", u)
        object.__setattr__(self, "period", float(self.period))

    @property
    def leap(self):
        """The leap length ``round(T)`` in samples."""
        return round_period(self.period)

    def __len__(self):
        return len(self.samples)

    @property
    def waves(self):
        """Length of the interpolable domain ``[0, (N-1)/T]`` in waves."""
        return (len(self.samples) - 1) / self.period


@dataclass(frozen=True)
class CellAddress:
    """Skew-grid cell of a query: real grid position ``r`` and leap fraction."""

    r: float
    frac_l: float

    @property
    def n(self):
        return math.floor(self.r)

    @property
    def frac_r(self):
        return frac(self.r)


def cell_locate(t, phi, period):
    """Cell coordinates of ``(t, phi)``; independent of the representative of ``phi``."""
    leap = round_period(period)
    lam = frac(t - periodise(phi).rep)
    return CellAddress(t * period - lam * leap, lam)


def lerp(a, b, lam):
    return a + lam * (b - a)


def eval_bilinear(tone, t, phi):
    """Linear interpolation in both step and leap direction (the textbook cell)."""
    u = tone.samples
    R = tone.leap
    cell = cell_locate(t, phi, tone.period)
    n = cell.n
    for idx in (n, n + R + 1):
        if not 0 <= idx < len(u):
            raise BoundaryError(idx, len(u))
    fr = cell.frac_r
    a = lerp(u[n], u[n + 1], fr)
    b = lerp(u[n + R], u[n + R + 1], fr)
    return float(lerp(a, b, cell.frac_l))


def time_range(length, period, step=HAT, leap=HAT):
    """Shape times ``[t_min, t_max]`` at which every phase can be interpolated.

    For linear interpolation in both directions on an integral period this is
    ``[1, W-1]`` for a ``W``-wave signal: two waves are lost.  A leap kernel
    with ``k`` nodes loses ``k`` waves.
    """
    R = round_period(period)
    p_lo, p_hi = step.position_range(length - 1)
    inf, sup = leap.node_span()
    t_min = (p_lo - inf * R) / period
    t_max = (p_hi - sup * R) / period
    if t_min > t_max:
        raise ConfigError(
            f"tone of {length} samples (period {period:g}) is too short for "
            f"{step.name} step and {leap.name} leap interpolation")
    return t_min, t_max


def clamp_time(t, tone, leap_kernel=HAT, step_kernel=HAT):
    """Clamp shape time into the range where no extrapolation is needed."""
    t_min, t_max = time_range(len(tone), tone.period, step_kernel, leap_kernel)
    return np.clip(t, t_min, t_max) if np.ndim(t) else min(max(t, t_min), t_max)


def _snap(f, n=None):
    """Snap fractions within SNAP of 0 or 1 onto the node; returns (f, n)."""
    up = f > 1.0 - SNAP
    if n is not None:
        n = np.where(up, n + 1.0, n)
    f = np.where(up | (f < SNAP), 0.0, f)
    return f, n


def _gather(u, start, idx, last, strict):
    if strict:
        bad = (idx < 0) | (idx > last)
        if bad.any():
            raise BoundaryError(idx[bad][0], last + 1)
    # after time clamping only round-off can leave the valid range; ``u`` ends
    # at ``last`` so clipping to the buffer clips to the signal
    return np.take(u, idx - start, mode="clip")


def _step_interp(u, start, p, step, last, strict):
    n = np.floor(p)
    f, n = _snap(p - n, n)
    shift, w = step.weights(f)
    base = n.astype(np.int64) + shift
    hit = f == 0.0
    acc = np.zeros(p.shape)
    for j, off in enumerate(step.offsets):
        idx = base if off == 0 else np.where(hit, base, base + off)
        acc += w[..., j] * _gather(u, start, idx, last, strict)
    return acc


def evaluate_block(u, t, phase, period, step, leap, *, start=0, last=None, strict=False):
    """Vectorised skew-grid evaluation.

    ``u`` holds samples ``start .. start+len(u)-1`` of the tone, ``phase`` are
    phase representatives (or any real numbers, only their fractional part
    matters).  ``last`` is the index of the final sample of the whole tone
    when known.  With ``strict`` an out-of-range sample raises
    :class:`BoundaryError`; otherwise indices are clipped, which only matters
    for round-off at the edges of a clamped time range.
    """
    t = np.asarray(t, dtype=float)
    phase = np.asarray(phase, dtype=float)
    if last is None:
        last = start + len(u) - 1
    R = round_period(period)
    lam, _ = _snap(frac(t - phase))
    r = t * period - lam * R
    kshift, kw = leap.weights(lam)
    hit = lam == 0.0
    out = np.zeros(t.shape)
    for i, k in enumerate(leap.offsets):
        p = np.where(hit, r, r + (kshift + k) * float(R))
        out += kw[..., i] * _step_interp(u, start, p, step, last, strict)
    return out


def eval_general(tone, t, phi, step_kernel=HAT, leap_kernel=HAT):
    """Separable step/leap interpolation at one point; raises on missing samples."""
    rep = periodise(phi).rep
    val = evaluate_block(tone.samples, np.array([t]), np.array([rep]), tone.period,
                         step_kernel, leap_kernel, strict=True)
    return float(val[0])


def evaluate_many(tone, t, phase, step=HAT, leap=HAT, strict=False):
    """Evaluate many queries over a whole tone in bounded-size chunks."""
    t = np.asarray(t, dtype=float)
    phase = np.asarray(phase, dtype=float)
    out = np.empty(t.shape)
    for lo in range(0, len(t), _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        out[sl] = evaluate_block(tone.samples, t[sl], phase[sl], tone.period, step, leap,
                                 strict=strict)
    return out


def index_window(t, period, step, leap):
    """Conservative bounds ``(lo, hi)`` of the sample indices read at shape time ``t``."""
    R = round_period(period)
    a_l, b_l = leap.reach()
    a_s, b_s = step.reach()
    tT = np.asarray(t, dtype=float) * period
    lo = np.floor(tT + (a_l - 1) * R) + a_s - 1
    hi = np.floor(tT + b_l * R) + b_s + 1
    return lo.astype(np.int64), hi.astype(np.int64)
