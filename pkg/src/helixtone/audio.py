"""Mono WAV files and control-curve text files."""

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from .errors import FormatError

_PCM_SCALE = 32767.0


@dataclass(eq=False)
class AudioFile:
    """Mono audio with its sample rate; samples are float64 in [-1, 1] nominally."""

    sample_rate: int
    samples: np.ndarray
    encoding: str = "float32"

    def __post_init__(self):
        if self.encoding not in ("pcm16", "float32"):
            raise FormatError(f"unsupported encoding {self.encoding!r}")
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1:
            raise FormatError(f"expected mono audio, got {s.shape[1] if s.ndim == 2 else s.ndim} channels")
        if len(s) == 0:
            raise FormatError("audio contains no samples")
        if int(self.sample_rate) <= 0:
            raise FormatError(f"bad sample rate {self.sample_rate!r}")
        self.samples = s
        self.sample_rate = int(self.sample_rate)

    @property
    def channels(self):
        return 1


def read_wav(path):
    """Read a mono PCM16 or IEEE float32 WAV file."""
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except (ValueError, EOFError, OSError, wavfile.WavFileWarning) as exc:
        raise FormatError(f"cannot read WAV file {path}: {exc}") from None
    if data.ndim == 2:
        raise FormatError(f"{path}: expected a mono file, found {data.shape[1]} channels")
    if data.dtype == np.int16:
        samples, enc = data.astype(float) / _PCM_SCALE, "pcm16"
    elif data.dtype == np.float32:
        samples, enc = data.astype(float), "float32"
    else:
        raise FormatError(f"{path}: unsupported sample format {data.dtype}; use PCM16 or float32")
    if len(samples) == 0:
        raise FormatError(f"{path}: file contains no samples")
    return AudioFile(rate, samples, enc)


def encode(samples, encoding):
    s = np.asarray(samples, dtype=float)
    if encoding == "pcm16":
        return np.round(np.clip(s, -1.0, 1.0) * _PCM_SCALE).astype(np.int16)
    return s.astype(np.float32)


def write_wav(path, audio):
    wavfile.write(path, audio.sample_rate, encode(audio.samples, audio.encoding))


def read_curve(path):
    """One real number per line; blank lines and ``#`` comments are skipped."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip().rstrip(",")
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a number: {text!r}") from None
    if not values:
        raise FormatError(f"{path}: no values")
    arr = np.array(values)
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{path}: non-finite value")
    return arr


def write_curve(path, values):
    with open(path, "w") as fh:
        for v in np.asarray(values, dtype=float):
            fh.write(f"{float(v)!r}\n")
