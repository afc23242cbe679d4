"""Direct, unoptimised realisation of the continuous cylinder construction.

Everything here evaluates one point at a time straight from the defining
sums.  It is slow on purpose and serves as the reference the skew grid and
the renderers are checked against.

The cylinder of a signal ``x`` is

    F x(t, phi) = sum over tau in phi of  x(tau) * kappa(t - tau)

with ``tau = rep(phi) + k``.  Writing ``l = t - rep(phi)`` this becomes
``sum_k x(t + (k - l)) * kappa(l - k)``.  :class:`CylinderFn` accepts a leap
length ``rho`` and evaluates ``sum_k x(t + (k - l)*rho) * kappa(l - k)``;
``rho = 1`` is the construction above, ``rho = round(T)/T`` is the exact
continuous counterpart of the discrete skew grid, whose leaps span
``round(T)`` samples rather than one wave.  Both agree when ``T`` is integral.
"""

import math

import numpy as np

from .cyclic import Phase, frac, periodise
from .errors import BoundaryError, ConfigError
from .kernels import HAT, windowed_sinc

SNAP = 1e-9
# weights this small at a missing node are round-off, not a real dependency
_NEGLIGIBLE = 1e-9


def _snap_position(p):
    q = round(p)
    return float(q) if abs(p - q) < SNAP else p


def _nodes(kernel, p):
    """Integers ``m`` with ``kernel(p - m)`` possibly nonzero."""
    base = math.floor(p)
    return range(base - kernel.support, base + kernel.support + 2)


class ContinuousSignal:
    """A function of real time ``x(t)``.

    Built either from a sampled tone (``x(n/T) = u(n)`` by kernel
    interpolation of the samples) or from any Python callable.
    """

    def __init__(self, func=None, *, tone=None, kernel=HAT, domain=None):
        if (func is None) == (tone is None):
            raise ConfigError("give exactly one of a function or a sampled tone")
        self.func = func
        self.tone = tone
        self.kernel = kernel
        self.domain = domain

    @classmethod
    def from_tone(cls, tone, kernel=HAT):
        return cls(tone=tone, kernel=kernel)

    @classmethod
    def from_function(cls, func, domain=None):
        return cls(func, domain=domain)

    @property
    def period(self):
        return self.tone.period if self.tone is not None else None

    def __call__(self, t):
        if self.func is not None:
            if self.domain is not None and not self.domain[0] <= t <= self.domain[1]:
                raise BoundaryError(math.floor(t), 0)
            return float(self.func(t))
        u = self.tone.samples
        p = _snap_position(t * self.tone.period)
        acc = 0.0
        for m in _nodes(self.kernel, p):
            w = float(self.kernel(p - m))
            if w == 0.0:
                continue
            if not 0 <= m < len(u):
                if abs(w) <= _NEGLIGIBLE:
                    continue
                raise BoundaryError(m, len(u))
            acc += w * u[m]
        return acc


class CylinderFn:
    """The cylinder ``F x`` of a continuous signal under a leap kernel."""

    def __init__(self, source, leap_kernel=HAT, leap=1.0):
        self.source = source
        self.leap_kernel = leap_kernel
        self.leap = float(leap)

    @classmethod
    def for_grid(cls, tone, step_kernel=HAT, leap_kernel=HAT):
        """Continuous counterpart of the skew grid on ``tone``."""
        src = ContinuousSignal.from_tone(tone, step_kernel)
        return cls(src, leap_kernel, tone.leap / tone.period)

    def __call__(self, t, phi):
        return evaluate_cylinder(self, t, phi)


def evaluate_cylinder(y, t, phi):
    """``sum_k x(t + (k - l)*rho) * kappa(l - k)`` over the kernel support."""
    rep = periodise(phi).rep
    lam = frac(t - rep)
    if lam < SNAP or lam > 1.0 - SNAP:
        # t lies on the ring through phi: the sum collapses to one node
        return y.source(t)
    l = math.floor(t - rep) + lam
    acc = 0.0
    for k in _nodes(y.leap_kernel, l):
        w = float(y.leap_kernel(l - k))
        if w != 0.0:
            acc += w * y.source(t + (k - l) * y.leap)
    return acc


def slice_at_zero(y, phi):
    return evaluate_cylinder(y, 0.0, phi)


def _value(curve, t):
    return curve(t) if callable(curve) else float(curve)


def sample_path(y, h, g, t):
    """Observe the cylinder along the path ``(h(t), g(t))``."""
    phase = _value(g, t)
    return evaluate_cylinder(y, _value(h, t), phase if isinstance(phase, Phase) else periodise(phase))


def transform(x, v, alpha, t, kernel=None):
    """Combined interpolation and observation ``sum_k x(alpha*t + k) * kappa((v - alpha)*t - k)``.

    Equals ``sample_path`` with ``h(t) = v*t`` and ``g(t) = alpha*t``.
    """
    if kernel is None:
        kernel = windowed_sinc(8)
    d = (v - alpha) * t
    acc = 0.0
    for k in _nodes(kernel, d):
        w = float(kernel(d - k))
        if w != 0.0:
            acc += w * x(alpha * t + k)
    return acc


def decompose_frequency(a):
    """Split ``a = n + b`` with ``n`` the nearest integer and ``|b| < 1/2``."""
    n = math.floor(a + 0.5)
    b = a - n
    if abs(b) >= 0.5:
        raise ConfigError(
            f"frequency {a!r} lies halfway between harmonics; the mapping is undefined there")
    return n, b


def map_frequency(a, v, alpha):
    """Output frequency ``b*v + n*alpha`` of an input sine with frequency ``a`` (per wave)."""
    n, b = decompose_frequency(a)
    return b * v + n * alpha


def sample_transform(x, v, alpha, times, kernel=None):
    """``transform`` over an array of times."""
    return np.array([transform(x, v, alpha, float(t), kernel) for t in times])
