"""Exception hierarchy shared by the library and the command line."""


class HelixError(Exception):
    """Base class for all errors raised by helixtone."""


class ConfigError(HelixError, ValueError):
    """Invalid parameters, e.g. a period below two samples or a tone too short for its kernels."""


class BoundaryError(HelixError, IndexError):
    """An evaluation needed a sample outside the available signal."""

    def __init__(self, index, length):
        self.index = int(index)
        self.length = int(length)
        super().__init__(
            f"sample index {self.index} is outside the signal (valid range 0..{self.length - 1})")


class ControlError(HelixError, ValueError):
    """A control curve is unusable, e.g. too short or decreasing in streaming mode."""


class FormatError(HelixError, ValueError):
    """A file could not be decoded (unsupported WAV flavour, truncated container, ...)."""
