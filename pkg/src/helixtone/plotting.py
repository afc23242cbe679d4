"""Figures written to image files (non-interactive backend)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_spectrum(report, path, max_freq=None, title=None):
    """Lower part of the magnitude spectrum in dB over cycles per wave (or bins)."""
    if report.period is not None:
        x, label = report.freq_per_wave, "frequency (cycles per wave)"
    else:
        x, label = report.bins, "bin"
    mag = report.magnitude
    db = 20 * np.log10(np.maximum(mag / max(mag.max(), 1e-300), 1e-12))
    keep = x <= max_freq if max_freq is not None else slice(None)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(x[keep], db[keep], lw=0.8)
    ax.set_xlabel(label)
    ax.set_ylabel("magnitude (dB rel. peak)")
    ax.set_ylim(-120, 5)
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_signals(signals, path, period=None, title=None):
    """Overlay several sample sequences; x axis in waves when ``period`` is given."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for name, y in signals.items():
        y = np.asarray(y)
        x = np.arange(len(y)) / period if period else np.arange(len(y))
        ax.plot(x, y, lw=0.7, label=name)
    ax.set_xlabel("time (waves)" if period else "sample")
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
