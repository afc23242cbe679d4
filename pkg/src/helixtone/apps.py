"""Applications built on the oscillator.

* combined pitch shifting and time scaling
* a time-axis compression codec
* loop generation
* FM synthesis
* turning noise into a tone
"""

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FormatError
from .grid import SampledTone, time_range
from .kernels import CUBIC
from .oscillator import (AccumulatedCurve, ConstantCurve, FunctionCurve, RampCurve,
                         RenderConfig, as_curve, render)


def _count_for_rate(tone, rate):
    return int(math.floor((len(tone) - 1) / rate + 1e-9)) + 1


def _finite_lengths(*curves):
    return [c.length for c in curves if c.length is not None]


def factor_path(factor, period):
    """Running sum of per-sample factors over ``T``: a position in waves/cycles.

    Constant factors become an exact ramp ``factor*k/T``.
    """
    c = as_curve(factor)
    if isinstance(c, ConstantCurve):
        return RampCurve(0.0, c.value / period, c.length)
    return AccumulatedCurve(c * (1.0 / period))


def shift_and_scale(tone, freq_factor=1.0, time_factor=1.0, count=None, cfg=None):
    """Pitch shift by ``freq_factor`` while moving through the shape at ``time_factor``.

    Both factors may be numbers or per-output-sample curves.  The phase
    advances ``freq_factor/T`` cycles per output sample and the shape time
    ``time_factor/T`` waves.  Equal factors give plain resampling; a time
    factor of 1 keeps the duration.  Without ``count`` a constant time factor
    renders the whole tone: ``floor((N-1)/time_factor) + 1`` samples.
    """
    f, r = as_curve(freq_factor), as_curve(time_factor)
    g = factor_path(f, tone.period)
    h = factor_path(r, tone.period)
    if count is None:
        lens = _finite_lengths(f, r)
        if lens:
            count = min(lens)
        elif r.value <= 0:
            raise ConfigError("time factor must be positive")
        else:
            count = _count_for_rate(tone, r.value)
    return render(tone, h, g, count, cfg)


# ---------------------------------------------------------------- compression

_MAGIC = b"HTC1"
_HEADER = struct.Struct("<4sdddII")


@dataclass(frozen=True, eq=False)
class CompressedTone:
    """A tone shrunk along the shape-time axis, plus a verbatim head."""

    period: float
    factor: float
    max_deviation: float
    head: np.ndarray
    payload: np.ndarray

    def __post_init__(self):
        check_compression(self.factor, self.max_deviation)

    def to_bytes(self):
        head = np.asarray(self.head, dtype="<f4")
        payload = np.asarray(self.payload, dtype="<f4")
        return (_HEADER.pack(_MAGIC, self.period, self.factor, self.max_deviation,
                             len(head), len(payload))
                + head.tobytes() + payload.tobytes())

    @classmethod
    def from_bytes(cls, data):
        if len(data) < _HEADER.size:
            raise FormatError("compressed tone is truncated (header incomplete)")
        magic, period, factor, dev, nh, npay = _HEADER.unpack_from(data)
        if magic != _MAGIC:
            raise FormatError(f"not a compressed tone (magic {magic!r})")
        want = _HEADER.size + 4 * (nh + npay)
        if len(data) != want:
            raise FormatError(f"compressed tone has {len(data)} bytes, header announces {want}")
        body = np.frombuffer(data, dtype="<f4", offset=_HEADER.size).astype(float)
        try:
            return cls(period, factor, dev, body[:nh], body[nh:])
        except ConfigError as exc:
            raise FormatError(f"invalid compressed tone: {exc}") from None

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def check_compression(v, b):
    """Reject factors that let spectral peaks of deviation ``b`` overlap."""
    if not v > 1:
        raise ConfigError(f"compression factor must exceed 1, got {v!r}")
    if b < 0:
        raise ConfigError(f"maximum deviation must be non-negative, got {b!r}")
    if b > 0 and v >= 1 / (2 * b):
        raise ConfigError(
            f"compression factor {v:g} too large for maximum deviation {b:g}: "
            f"need v < 1/(2b) = {1 / (2 * b):g}")


def _codec_cfg(cfg):
    return cfg or RenderConfig(CUBIC, CUBIC)


def head_length(tone, cfg=None):
    """Verbatim head: two waves, or more if the kernels need a longer run-in."""
    cfg = _codec_cfg(cfg)
    t_min, _ = time_range(len(tone), tone.period, cfg.step_kernel, cfg.leap_kernel)
    return max(math.ceil(2 * tone.period), math.ceil(t_min * tone.period - 1e-9))


def compress(tone, v, b=0.0, cfg=None, smooth=None):
    """Shrink the shape-time axis by ``v`` at unchanged pitch.

    Payload sample ``i`` is the cylinder value at shape time ``(H + i*v)/T``
    and phase ``(H + i)/T``, ``H`` being the length of the verbatim head.
    """
    check_compression(v, b)
    cfg = _codec_cfg(cfg)
    src = anti_alias(tone, smooth) if smooth is not None else tone
    H = head_length(tone, cfg)
    n = len(tone)
    if H >= n:
        raise ConfigError(f"tone of {n} samples is too short to compress")
    M = int(math.floor((n - 1 - H) / v + 1e-9)) + 1
    h = RampCurve(H / tone.period, v / tone.period)
    g = RampCurve(H / tone.period, 1.0 / tone.period)
    payload = render(src, h, g, M, cfg)
    return CompressedTone(tone.period, float(v), float(b), tone.samples[:H].copy(), payload)


def decompress(ct, cfg=None):
    """Stretch a compressed tone back by its factor."""
    cfg = _codec_cfg(cfg)
    T, v = ct.period, ct.factor
    head = np.asarray(ct.head, dtype=float)
    H, M = len(head), len(ct.payload)
    joined = SampledTone(np.concatenate([head, ct.payload]), T)
    n_out = H + int(math.floor((M - 1) * v + 1e-9)) + 1
    k = np.arange(H, n_out, dtype=float)
    h = (H + (k - H) / v) / T
    tail = render(joined, h, k / T, len(k), cfg)
    return SampledTone(np.concatenate([head, tail]), T)


def upsample(w, c):
    """Insert ``c - 1`` zeros between consecutive weights."""
    w = np.asarray(w, dtype=float)
    out = np.zeros((len(w) - 1) * c + 1)
    out[::c] = w
    return out


def anti_alias(tone, window):
    """Smooth across equal phases of neighbouring waves.

    Convolves the samples with ``window`` upsampled by the leap length,
    centred; near the ends the weights that fall inside the tone are
    renormalised.
    """
    w = np.asarray(window, dtype=float).ravel()
    if len(w) == 0 or abs(w.sum() - 1.0) > 1e-9:
        raise ConfigError("smoothing window weights must sum to 1")
    f = upsample(w, tone.leap)
    c = (len(f) - 1) // 2
    u = tone.samples
    num = np.convolve(u, f[::-1])[len(f) - 1 - c:len(f) - 1 - c + len(u)]
    den = np.convolve(np.ones(len(u)), f[::-1])[len(f) - 1 - c:len(f) - 1 - c + len(u)]
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(np.abs(den) > 1e-12, num / np.where(den == 0, 1, den), u)
    # interior weights sum to one exactly; avoid a pointless rounding there
    full = np.abs(den - 1.0) < 1e-12
    out[full] = num[full]
    return SampledTone(out, tone.period)


# ---------------------------------------------------------------- loops

@dataclass(frozen=True)
class LoopSpec:
    """Intro, cycle and depth are in waves; depth defaults to half the cycle."""

    intro: float
    cycle: float
    mode: str = "zigzag"
    depth: float = None

    def __post_init__(self):
        if self.mode not in ("sine", "zigzag"):
            raise ConfigError(f"unknown loop mode {self.mode!r}")
        if not self.cycle > 0 or abs(self.cycle - round(self.cycle)) > 1e-9:
            raise ConfigError(f"loop cycle must be a positive whole number of waves, got {self.cycle!r}")
        if self.intro < 0:
            raise ConfigError("loop intro must be non-negative")
        if self.depth is None:
            object.__setattr__(self, "depth", self.cycle / 2)
        if self.depth < 0:
            raise ConfigError("loop depth must be non-negative")

    def cycle_samples(self, period):
        n = self.cycle * period
        if abs(n - round(n)) > 1e-9:
            raise ConfigError(
                f"loop cycle of {self.cycle:g} waves is {n:g} samples at period {period:g}; "
                "it must be a whole number of samples")
        return int(round(n))


def loop_shape(spec, period, count):
    """Shape-time curve of a loop: verbatim intro, then the periodic control."""
    I = int(round(spec.intro * period))
    L = spec.cycle_samples(period)

    def h(k):
        k = np.asarray(k)
        j = np.mod(k - I, L) / L
        if spec.mode == "zigzag":
            wave = spec.depth * (1.0 - np.abs(1.0 - 2.0 * j))
        else:
            wave = spec.depth / np.pi * np.sin(2.0 * np.pi * j)
        return np.where(k < I, k / period, spec.intro + wave)

    return FunctionCurve(h, count)


def build_loop(tone, spec, cycles=2, cfg=None):
    """A sample that can be looped seamlessly after its intro.

    The returned array holds the intro followed by ``cycles`` repetitions
    of the loop cycle; any of the cycles can be repeated indefinitely.
    """
    if cycles < 1:
        raise ConfigError("need at least one loop cycle")
    T = tone.period
    I = int(round(spec.intro * T))
    L = spec.cycle_samples(T)
    count = I + cycles * L
    out = render(tone, loop_shape(spec, T, count), RampCurve(0.0, 1.0 / T, count), count, cfg)
    out[:I] = tone.samples[:I]
    return out


# ---------------------------------------------------------------- synthesis

def sine_modulator(depth, freq, period):
    """Phase offset ``depth*sin(2*pi*freq*k/T)`` in cycles; ``freq`` per wave."""
    return FunctionCurve(lambda k: depth * np.sin(2.0 * np.pi * freq * np.asarray(k) / period))


def fm_render(tone, alpha, modulator=0.0, v=1.0, count=None, cfg=None):
    """Shift by ``alpha``, scale by ``v`` and add ``modulator`` (cycles) to the phase."""
    mod = as_curve(modulator)
    if count is None:
        count = _count_for_rate(tone, v)
        if mod.length is not None:
            count = min(count, mod.length)
    g = RampCurve(0.0, alpha / tone.period) + mod
    h = RampCurve(0.0, v / tone.period)
    return render(tone, h, g, count, cfg)


def tone_from_noise(tone, n, count=None, cfg=None):
    """Stretch shape time by ``n`` at unchanged phase rate, narrowing spectral peaks."""
    if not n >= 1:
        raise ConfigError(f"stretch factor must be at least 1, got {n!r}")
    if count is None:
        count = int(math.floor((len(tone) - 1) * n + 1e-9)) + 1
    h = RampCurve(0.0, 1.0 / (n * tone.period))
    g = RampCurve(0.0, 1.0 / tone.period)
    return render(tone, h, g, count, cfg)


def bat_transpose(tone, factor=5, cfg=None):
    """Divide the pitch by ``factor`` at constant duration (ultrasound made audible)."""
    return shift_and_scale(tone, 1.0 / factor, 1.0, cfg=cfg)
