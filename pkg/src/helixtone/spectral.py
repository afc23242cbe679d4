"""Magnitude spectra and harmonic-distortion measurement."""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Magnitudes of the first ``size`` samples' DFT, bins ``0 .. size/2``."""

    size: int
    magnitude: np.ndarray
    period: float = None
    sample_rate: float = None

    @property
    def bins(self):
        return np.arange(len(self.magnitude))

    @property
    def freq_per_wave(self):
        """Bin frequencies in cycles per input wave (needs the period)."""
        if self.period is None:
            return np.full(len(self.magnitude), np.nan)
        return self.bins * self.period / self.size

    @property
    def hz(self):
        if self.sample_rate is None:
            return np.full(len(self.magnitude), np.nan)
        return self.bins * self.sample_rate / self.size

    def peak_bin(self, skip_dc=True):
        m = self.magnitude[1:] if skip_dc else self.magnitude
        return int(np.argmax(m)) + (1 if skip_dc else 0)

    def bin_of(self, freq_per_wave):
        """Fractional bin position of a frequency given in cycles per wave."""
        return freq_per_wave * self.size / self.period

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bin", "freq_per_wave", "magnitude"])
            for b, f, m in zip(self.bins, self.freq_per_wave, self.magnitude):
                w.writerow([int(b), repr(float(f)), repr(float(m))])


def _check_size(size, available):
    if size < 2 or size & (size - 1):
        raise ConfigError(f"spectrum size must be a power of two, got {size}")
    if size > available:
        raise ConfigError(f"spectrum size {size} exceeds the {available} available samples")


def spectrum(samples, size=4096, period=None, sample_rate=None, window=None):
    """Magnitude spectrum of the first ``size`` samples (rectangular window by default)."""
    x = np.asarray(samples, dtype=float)
    _check_size(size, len(x))
    x = x[:size]
    if window == "hann":
        x = x * np.hanning(size + 1)[:size]
    elif window is not None:
        raise ConfigError(f"unknown window {window!r}")
    return SpectrumReport(size, np.abs(np.fft.rfft(x)), period, sample_rate)


def thd(samples, size=4096, guard=3, start=0):
    """Total harmonic distortion: RMS of everything but the fundamental over the fundamental.

    Uses a periodic Hann window so a fundamental that does not fall on a bin
    stays confined to ``guard`` bins on either side of its peak.  The DC band
    ``0 .. guard`` is excluded as well.
    """
    x = np.asarray(samples, dtype=float)[start:]
    rep = spectrum(x, size, window="hann")
    p = rep.magnitude ** 2
    k = rep.peak_bin()
    lo, hi = max(0, k - guard), k + guard + 1
    fund = p[lo:hi].sum()
    other = p.sum() - fund - p[:guard + 1].sum() * (lo > guard)
    return float(np.sqrt(max(other, 0.0) / fund))
