"""Batch and streaming renderers driven by per-output-sample control curves.

An output sample ``k`` is the cylinder value at shape time ``h(k)`` (waves)
and phase ``g(k)`` (cycles).  Shape time is clamped into the range where the
grid needs no extrapolation.

The streaming renderer pulls input samples from an iterator and keeps only
a sliding window of them; its output is bit-identical to :func:`render_batch`
because both call the same vectorised kernel on the same values.
"""

import math
from dataclasses import dataclass
from itertools import islice
from numbers import Real

import numpy as np

from .errors import ConfigError, ControlError
from .grid import evaluate_block, index_window, time_range
from .cyclic import round_period
from .kernels import HAT, Kernel
from .oracle import CylinderFn

_CHUNK = 1 << 16


class ControlCurve:
    """A sequence of per-output-sample values, possibly unbounded.

    Subclasses implement ``_segment(k0, k1)``.  ``length`` is ``None`` for
    curves that never end.
    """

    length = None

    def segment(self, k0, k1):
        if k0 < 0 or k1 < k0:
            raise ControlError(f"bad curve segment [{k0}, {k1})")
        if self.length is not None and k1 > self.length:
            raise ControlError(
                f"control curve has {self.length} values, {k1} requested")
        return np.asarray(self._segment(k0, k1), dtype=float)

    def values(self, count):
        return self.segment(0, count)

    def __add__(self, other):
        return SumCurve(self, as_curve(other))

    __radd__ = __add__

    def __mul__(self, factor):
        return ScaledCurve(self, float(factor))

    __rmul__ = __mul__

    def _segment(self, k0, k1):
        raise NotImplementedError


class ConstantCurve(ControlCurve):
    def __init__(self, value, length=None):
        self.value = float(value)
        self.length = length

    def _segment(self, k0, k1):
        return np.full(k1 - k0, self.value)


class RampCurve(ControlCurve):
    """``start + rate*k``; multiplication per index, so no drift accumulates."""

    def __init__(self, start, rate, length=None):
        self.start = float(start)
        self.rate = float(rate)
        self.length = length

    def _segment(self, k0, k1):
        return self.start + self.rate * np.arange(k0, k1, dtype=float)


class ExplicitCurve(ControlCurve):
    def __init__(self, values):
        v = np.array(values, dtype=float).ravel()
        if not np.all(np.isfinite(v)):
            raise ControlError("control curve contains non-finite values")
        v.setflags(write=False)
        self._v = v
        self.length = len(v)

    def _segment(self, k0, k1):
        return self._v[k0:k1]


class FunctionCurve(ControlCurve):
    """Values ``func(k)`` for integer index arrays ``k``."""

    def __init__(self, func, length=None):
        self.func = func
        self.length = length

    def _segment(self, k0, k1):
        return self.func(np.arange(k0, k1))


class AccumulatedCurve(ControlCurve):
    """Running sum: ``value[0] = start``, ``value[k] = start + inc[0] + ... + inc[k-1]``.

    The sum is carried sequentially across segments, so consecutive segments
    reproduce a single long evaluation bit for bit.
    """

    def __init__(self, increments, start=0.0):
        self.increments = as_curve(increments)
        self.start = float(start)
        inc_len = self.increments.length
        self.length = None if inc_len is None else inc_len + 1
        self._pos = 0
        self._carry = self.start

    def _segment(self, k0, k1):
        if k0 < self._pos:
            self._pos, self._carry = 0, self.start
        out = np.empty(k1 - k0)
        if k1 == k0:
            return out
        if self._pos < k0:
            self._advance(k0)
        # out[0] is the running value at k0, later ones add increments k0..k1-2
        inc = self.increments.segment(k0, k1 - 1)
        out[0] = self._carry
        if len(inc):
            buf = inc.copy()
            buf[0] += self._carry
            out[1:] = np.cumsum(buf)
        self._pos, self._carry = k1 - 1, out[-1]
        return out

    def _advance(self, k):
        while self._pos < k:
            step = min(k - self._pos, _CHUNK)
            inc = self.increments.segment(self._pos, self._pos + step).copy()
            inc[0] += self._carry
            self._carry = float(np.cumsum(inc)[-1])
            self._pos += step


class SumCurve(ControlCurve):
    def __init__(self, a, b):
        self.a, self.b = a, b
        lens = [c.length for c in (a, b) if c.length is not None]
        self.length = min(lens) if lens else None

    def _segment(self, k0, k1):
        return self.a.segment(k0, k1) + self.b.segment(k0, k1)


class ScaledCurve(ControlCurve):
    def __init__(self, curve, factor):
        self.curve, self.factor = curve, factor
        self.length = curve.length

    def _segment(self, k0, k1):
        return self.curve.segment(k0, k1) * self.factor


def as_curve(x):
    """Coerce a number, sequence or curve to a :class:`ControlCurve`."""
    if isinstance(x, ControlCurve):
        return x
    if isinstance(x, Real):
        return ConstantCurve(x)
    return ExplicitCurve(x)


def constant(value, length=None):
    return ConstantCurve(value, length)


def ramp(start, rate, length=None):
    return RampCurve(start, rate, length)


def explicit(values):
    return ExplicitCurve(values)


def accumulate(increments, start=0.0):
    return AccumulatedCurve(increments, start)


def phase_modulated(rate, modulator, start=0.0):
    """Phase ramp ``start + rate*k`` plus an additive modulator curve (cycles)."""
    return RampCurve(start, rate) + as_curve(modulator)


@dataclass(frozen=True)
class RenderConfig:
    """How to evaluate: kernels, batch or streaming, boundary policy, engine.

    ``boundary="clamp"`` pulls shape time into the interpolable range;
    ``"error"`` raises :class:`~helixtone.errors.BoundaryError` instead.
    ``engine="oracle"`` routes every sample through the continuous reference.
    """

    step_kernel: Kernel = HAT
    leap_kernel: Kernel = HAT
    mode: str = "batch"
    boundary: str = "clamp"
    engine: str = "grid"

    def __post_init__(self):
        if self.mode not in ("batch", "streaming"):
            raise ConfigError(f"unknown render mode {self.mode!r}")
        if self.boundary not in ("clamp", "error"):
            raise ConfigError(f"unknown boundary policy {self.boundary!r}")
        if self.engine not in ("grid", "oracle"):
            raise ConfigError(f"unknown engine {self.engine!r}")
        for k in (self.step_kernel, self.leap_kernel):
            if not k.interpolating:
                raise ConfigError(f"kernel {k.name} is not interpolating")


def _resolve_count(h, g, count):
    lens = [c.length for c in (h, g) if c.length is not None]
    if count is None:
        if not lens:
            raise ControlError("both control curves are unbounded; give an output count")
        return min(lens)
    if count < 0:
        raise ControlError("output count must be non-negative")
    if lens and min(lens) < count:
        raise ControlError(f"control curve has {min(lens)} values, {count} requested")
    return int(count)


def _oracle_block(tone, t, phase, cfg):
    y = CylinderFn.for_grid(tone, cfg.step_kernel, cfg.leap_kernel)
    return np.array([y(float(a), float(b)) for a, b in zip(t, phase)])


def render_batch(tone, h, g, count=None, cfg=None):
    """Render ``count`` output samples: ``eval(tone, clamp(h[k]), g[k])``."""
    cfg = cfg or RenderConfig()
    h, g = as_curve(h), as_curve(g)
    count = _resolve_count(h, g, count)
    t_min, t_max = time_range(len(tone), tone.period, cfg.step_kernel, cfg.leap_kernel)
    strict = cfg.boundary == "error"
    out = np.empty(count)
    for k0 in range(0, count, _CHUNK):
        k1 = min(count, k0 + _CHUNK)
        t = h.segment(k0, k1)
        if not strict:
            t = np.clip(t, t_min, t_max)
        phase = g.segment(k0, k1)
        if cfg.engine == "oracle":
            out[k0:k1] = _oracle_block(tone, t, phase, cfg)
        else:
            out[k0:k1] = evaluate_block(tone.samples, t, phase, tone.period,
                                        cfg.step_kernel, cfg.leap_kernel, strict=strict)
    return out


def streaming_bound(period, step=HAT, leap=HAT):
    """Maximum number of input samples a :class:`StreamingRenderer` holds.

    One window of interpolation support around the current shape time
    (``(b_l - a_l + 1)`` leaps plus the step extent plus rounding slack)
    and up to one leap of samples read ahead before trimming.  For linear
    kernels this is ``3*round(T) + 5``.
    """
    R = round_period(period)
    a_l, b_l = leap.reach()
    a_s, b_s = step.reach()
    return (b_l - a_l + 1) * R + (b_s - a_s) + 4 + R


class StreamingRenderer:
    """Incremental renderer reading the input tone from an iterator.

    Iterating yields blocks of output samples.  ``high_water`` records the
    largest number of input samples held at any time.

    With ``end="clamp"`` (default when the output count is known) shape
    times beyond the end of the input are clamped, exactly as in batch
    rendering.  With ``end="truncate"`` (default for unbounded curves) the
    output stops at the last shape time that can be fully interpolated.
    """

    def __init__(self, source, period, h, g, cfg=None, count=None, end=None):
        self.cfg = cfg or RenderConfig(mode="streaming")
        if self.cfg.engine != "grid":
            raise ConfigError("streaming rendering uses the grid engine only")
        if self.cfg.boundary != "clamp":
            raise ConfigError("streaming rendering supports the clamp boundary policy only")
        self.period = float(period)
        self.R = round_period(period)
        self.h, self.g = as_curve(h), as_curve(g)
        lens = [c.length for c in (self.h, self.g) if c.length is not None]
        if count is not None:
            self.count = _resolve_count(self.h, self.g, count)
        else:
            self.count = min(lens) if lens else None
        if end is None:
            end = "truncate" if self.count is None else "clamp"
        if end not in ("clamp", "truncate"):
            raise ConfigError(f"unknown end policy {end!r}")
        self.end = end
        self._src = iter(source)
        self._buf = np.empty(0)
        self._start = 0
        self._exhausted = False
        self.high_water = 0
        self.bound = streaming_bound(period, self.cfg.step_kernel, self.cfg.leap_kernel)
        self.emitted = 0
        self._last_h = -math.inf
        self._done = False
        step, leap = self.cfg.step_kernel, self.cfg.leap_kernel
        self._step, self._leap = step, leap
        # t_min depends only on kernels and period; take it from a one-wave-long tone
        self.t_min = time_range(10 ** 9, period, step, leap)[0]
        self._pend_h = np.empty(0)
        self._pend_g = np.empty(0)
        self._end_t_max = None

    @property
    def buffer_end(self):
        return self._start + len(self._buf) - 1

    def _t_max(self, n):
        p_hi = self._step.position_range(n - 1)[1]
        return (p_hi - self._leap.node_span()[1] * self.R) / self.period

    def _lo(self, t):
        return int(index_window(t, self.period, self._step, self._leap)[0])

    def _hi(self, t):
        return int(index_window(t, self.period, self._step, self._leap)[1])

    def _read(self, n):
        chunk = np.fromiter(islice(self._src, n), dtype=float)
        if len(chunk) < n:
            self._exhausted = True
        if len(chunk):
            if not np.all(np.isfinite(chunk)):
                raise ConfigError("input stream contains non-finite samples")
            self._buf = np.concatenate([self._buf, chunk])
            self.high_water = max(self.high_water, len(self._buf))

    def _trim(self, t):
        cut = min(self._lo(t) - self._start, len(self._buf))
        if cut > 0:
            self._buf = self._buf[cut:]
            self._start += cut

    def _final_t_max(self):
        if self._end_t_max is None:
            n = self.buffer_end + 1
            if n < 2 * self.R + 1:
                raise ConfigError(
                    f"input stream ended after {n} samples, shorter than two waves plus one")
            self._end_t_max = time_range(n, self.period, self._step, self._leap)[1]
        return self._end_t_max

    def _fill_pending(self):
        if len(self._pend_h):
            return
        k0 = self.emitted
        k1 = k0 + 4096
        if self.count is not None:
            k1 = min(k1, self.count)
        if k1 <= k0:
            return
        self._pend_h = self.h.segment(k0, k1)
        self._pend_g = self.g.segment(k0, k1)
        prev = np.concatenate([[self._last_h], self._pend_h[:-1]])
        if np.any(self._pend_h < prev):
            bad = k0 + int(np.argmax(self._pend_h < prev))
            raise ControlError(
                f"shape-time curve decreases at output sample {bad}; streaming needs it nondecreasing")
        self._last_h = self._pend_h[-1]

    def _next_block(self):
        self._fill_pending()
        if not len(self._pend_h):
            return None
        t = np.maximum(self._pend_h, self.t_min)
        t0 = float(t[0])
        need = self._hi(t0)
        # read until t0 is covered, then keep filling up to the bound so that
        # blocks span more than one output sample
        if not self._exhausted:
            self._trim(min(t0, self._t_max(self.buffer_end + 1)))
        while not self._exhausted:
            if self.buffer_end < need:
                step = min(self.R, need - self.buffer_end)
            else:
                step = min(self.R, self.bound - len(self._buf))
                if step <= 0:
                    break
            self._read(step)
            # samples needed after a clamp at the (still unknown) end lie above
            # the window of the smallest possible t_max
            self._trim(min(t0, self._t_max(self.buffer_end + 1)))
        if self._exhausted:
            t_max = self._final_t_max()
            if self.end == "clamp":
                t = np.minimum(t, t_max)
                take = len(t)
            else:
                take = int(np.searchsorted(t, t_max, side="right"))
                if take == 0:
                    self._done = True
                    return None
            last = self.buffer_end
        else:
            his = index_window(t, self.period, self._step, self._leap)[1]
            take = int(np.searchsorted(his, self.buffer_end, side="right"))
            last = self.buffer_end
        tb, gb = t[:take], self._pend_g[:take]
        out = evaluate_block(self._buf, tb, gb, self.period, self._step, self._leap,
                             start=self._start, last=last)
        self._pend_h = self._pend_h[take:]
        self._pend_g = self._pend_g[take:]
        self.emitted += take
        return out

    def __iter__(self):
        return self

    def __next__(self):
        if self._done:
            raise StopIteration
        block = self._next_block()
        if block is None:
            self._done = True
            raise StopIteration
        return block


def render_streaming(source, period, h, g, cfg=None, count=None, end=None):
    """Collect the output of a :class:`StreamingRenderer` into one array."""
    r = StreamingRenderer(source, period, h, g, cfg, count, end)
    blocks = list(r)
    return (np.concatenate(blocks) if blocks else np.empty(0)), r


def render(tone, h, g, count=None, cfg=None):
    """Render in the mode selected by ``cfg``."""
    cfg = cfg or RenderConfig()
    if cfg.mode == "streaming":
        out, _ = render_streaming(iter(tone.samples.tolist()), tone.period, h, g, cfg, count)
        return out
    return render_batch(tone, h, g, count, cfg)


def cursor(t, period, step=HAT, leap=HAT):
    """Index of the last input sample required to evaluate at shape time ``t``."""
    return index_window(t, period, step, leap)[1]
