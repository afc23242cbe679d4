"""Interpolation kernels.

Every kernel here is interpolating: it is 1 at 0 and vanishes at all other
integers.  The same kernel object serves the continuous construction (as a
function of real time) and the discrete skew grid (as a weight vector over a
fixed set of node offsets).
"""

import math
from dataclasses import dataclass, field

import numpy as np

_KINDS = ("constant", "hat", "cubic", "windowed_sinc")


def eval_constant(t):
    """Indicator of the interval (-1, 0]."""
    t = np.asarray(t, dtype=float)
    return ((t > -1.0) & (t <= 0.0)).astype(float)


def eval_hat(t):
    t = np.asarray(t, dtype=float)
    return np.maximum(0.0, 1.0 - np.abs(t))


def _catmull_rom(t):
    a = np.abs(np.asarray(t, dtype=float))
    inner = (1.5 * a - 2.5) * a * a + 1.0
    outer = ((-0.5 * a + 2.5) * a - 4.0) * a + 2.0
    return np.where(a < 1.0, inner, np.where(a < 2.0, outer, 0.0))


def eval_cubic(lam):
    """Catmull-Rom weights for node offsets (-1, 0, 1, 2) at fraction ``lam``."""
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"cubic interpolation parameter {lam!r} not in [0, 1)")
    l2 = lam * lam
    l3 = l2 * lam
    return np.array([
        0.5 * (-l3 + 2.0 * l2 - lam),
        0.5 * (3.0 * l3 - 5.0 * l2 + 2.0),
        0.5 * (-3.0 * l3 + 4.0 * l2 + lam),
        0.5 * (l3 - l2),
    ])


def hann(x):
    """Hann window on [-1, 1], zero outside."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) < 1.0, np.cos(0.5 * np.pi * x) ** 2, 0.0)


def eval_windowed_sinc(t, radius):
    """Normalised sinc truncated to ``|t| < radius`` under a Hann window."""
    if radius < 1:
        raise ValueError("sinc radius must be a positive integer")
    t = np.asarray(t, dtype=float)
    node = t == np.rint(t)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.sin(np.pi * t) / (np.pi * t)
    s = s * hann(t / radius)
    # exact values at integers so the kernel interpolates bit-exactly
    return np.where(node, (t == 0.0).astype(float), s)


@dataclass(frozen=True)
class Kernel:
    """An interpolation kernel with finite node support.

    ``offsets`` are relative to ``floor(p)`` for a query position ``p``; the
    constant kernel is anchored at ``ceil(p)`` instead, which is where the
    indicator of (-1, 0] puts its single node.
    """

    kind: str
    radius: int = 0
    offsets: tuple = field(init=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "windowed_sinc":
            if int(self.radius) != self.radius or self.radius < 1:
                raise ValueError(f"sinc radius must be a positive integer, got {self.radius!r}")
            offs = tuple(range(-self.radius + 1, self.radius + 1))
        else:
            offs = {"constant": (0,), "hat": (0, 1), "cubic": (-1, 0, 1, 2)}[self.kind]
        object.__setattr__(self, "offsets", offs)

    @property
    def interpolating(self):
        return True

    @property
    def anchor(self):
        return "ceil" if self.kind == "constant" else "floor"

    @property
    def name(self):
        if self.kind == "windowed_sinc":
            return f"sinc:{self.radius}"
        return "linear" if self.kind == "hat" else self.kind

    @property
    def support(self):
        """Half-open bound on |t| outside of which the kernel is zero."""
        return {"constant": 1, "hat": 1, "cubic": 2}.get(self.kind, self.radius)

    def __call__(self, t):
        if self.kind == "constant":
            return eval_constant(t)
        if self.kind == "hat":
            return eval_hat(t)
        if self.kind == "cubic":
            return _catmull_rom(t)
        return eval_windowed_sinc(t, self.radius)

    def weights(self, f):
        """Weights over ``offsets`` for fractional positions ``f`` in [0, 1).

        Returns ``(shift, w)``: ``shift`` (0 or 1 per query) moves the anchor
        from floor to ceil, ``w`` has one column per offset.
        """
        f = np.asarray(f, dtype=float)
        if self.kind == "constant":
            return (f > 0.0).astype(np.int64), np.ones(f.shape + (1,))
        offs = np.asarray(self.offsets, dtype=float)
        w = self(f[..., None] - offs)
        return np.zeros(f.shape, dtype=np.int64), w

    def node_span(self):
        """Open bounds (inf, sup) of ``node - p`` over all nodes a query can touch.

        Exact node hits only touch the node itself (``node - p == 0``).
        """
        if self.kind == "constant":
            return 0.0, 1.0
        return float(self.offsets[0] - 1), float(self.offsets[-1])

    def position_range(self, last_index):
        """Closed range of positions ``p`` whose nodes all lie in ``0..last_index``."""
        if self.kind == "constant":
            return 0.0, float(last_index)
        a, b = self.offsets[0], self.offsets[-1]
        return float(-a), float(last_index - b + 1)

    def reach(self):
        """Node offsets relative to ``floor(p)``, covering both anchors."""
        if self.kind == "constant":
            return 0, 1
        return self.offsets[0], self.offsets[-1]


CONSTANT = Kernel("constant")
HAT = Kernel("hat")
CUBIC = Kernel("cubic")


def windowed_sinc(radius=8):
    return Kernel("windowed_sinc", radius)


def parse_kernel(text):
    """Parse a CLI kernel name: ``constant``, ``linear``, ``cubic`` or ``sinc:<radius>``."""
    text = text.strip().lower()
    if text in ("constant",):
        return CONSTANT
    if text in ("linear", "hat"):
        return HAT
    if text == "cubic":
        return CUBIC
    if text == "sinc" or text.startswith("sinc:"):
        _, _, rad = text.partition(":")
        try:
            radius = int(rad) if rad else 8
        except ValueError:
            raise ValueError(f"bad sinc radius in {text!r}") from None
        return windowed_sinc(radius)
    raise ValueError(f"unknown kernel {text!r}; expected constant, linear, cubic or sinc:<radius>")


def partition_sum(kernel, t):
    """Sum of kernel values at ``t - k`` over all integers ``k`` in its support."""
    ks = np.arange(math.floor(t) - kernel.support, math.floor(t) + kernel.support + 2)
    return float(np.sum(kernel(t - ks)))
