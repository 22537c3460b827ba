"""Exception types shared across the toolkit.

Domain errors (bad optical configurations, degenerate data) derive from
:class:`LfScopeError`; configuration-file problems derive from
:class:`ConfigError` so the CLI can map them to distinct exit codes.
"""


class LfScopeError(Exception):
    """Base class for domain errors raised by lfscope operations."""


class AfocalConfiguration(LfScopeError):
    """Object sits at the front focal plane; the image is at infinity."""


class ZeroMagnification(LfScopeError):
    """A magnification of zero has no finite lens placement."""


class NoImageFormed(LfScopeError):
    """The optical train has no conjugate at the requested plane."""


class DegenerateMla(LfScopeError):
    """Lenslet pitch is too small relative to the sensor pixels."""


class CalibrationFailed(LfScopeError):
    """Too few lenslet centers detected to fit a lattice."""


class OutOfDiscAngularIndex(LfScopeError):
    """Requested angular offset lies outside the lenslet disc."""


class TooFewViews(LfScopeError):
    """Not enough valid sub-aperture views for this operation."""


class InsufficientSamples(LfScopeError):
    """A fit region contains too few confident samples."""


class RankDeficient(LfScopeError):
    """Calibration regions do not span at least two distinct depths."""


class Unreachable(LfScopeError):
    """No mechanically valid lens placement reaches the target."""


class UnknownParameter(LfScopeError):
    """Sweep parameter is not a recognized configuration key."""


class ConfigError(Exception):
    """Malformed configuration file or experiment description."""
