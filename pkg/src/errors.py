"""
Exception hierarchy.

Everything subclasses ValueError so callers that only care about "bad input"
can keep catching ValueError, while the CLI can map the specific classes to
exit codes.
"""

from __future__ import annotations


class SpinStatsError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(SpinStatsError):
    """Invalid spin/component, non-unit axis, bad hint or exceeded spin cap."""


class DegenerateGeometryError(SpinStatsError):
    """Antiparallel vectors, or coincident vectors without an azimuth hint."""


class NotARayError(SpinStatsError):
    """Two vectors that were expected to differ by a phase do not."""


class PhaseConsistencyError(SpinStatsError):
    """Exchange phase disagrees with the product of single-particle phase factors."""


class QuantizationFrameError(SpinStatsError):
    """Particles do not share one spin quantization frame."""


class ConfigError(SpinStatsError):
    """Invalid config.json contents or run configuration."""
