"""Exception types shared across the package.

Poles and other analytic obstructions are signalled, not returned as NaN:
every exception carries enough structure (location, order, residue) for a
caller to act on the singularity instead of merely reporting it.
"""

from __future__ import annotations


class ZetafioError(Exception):
    """Base class for all package errors."""


class PoleError(ZetafioError):
    """A meromorphic quantity was requested at (or too near) a pole.

    Attributes
    ----------
    location : complex
        Where the pole sits in the relevant variable.
    order : int
        Pole order (1 for simple poles).
    residue : complex or None
        Residue when the pole is simple and the residue is known.
    """

    def __init__(self, message, location=0j, order=1, residue=None):
        super().__init__(message)
        self.location = complex(location)
        self.order = int(order)
        self.residue = residue


class NearPoleError(PoleError):
    """Evaluation point is within the configured guard of a pole."""


class CenterMismatchError(ZetafioError):
    """Arithmetic between Laurent series with different expansion centers."""


class ZeroSeriesError(ZetafioError):
    """A series is identically zero at its truncation order."""


class NonIntegrableError(ZetafioError):
    """A radial tail bound exceeded its budget: the remainder is not L1."""


class CriticalTermError(ZetafioError):
    """An operation that requires an empty critical index set met a
    critical-degree term."""


class StatPhaseRequiredError(ZetafioError):
    """An oscillatory term cannot be routed through plain quadrature and
    needs stationary-phase treatment."""


class MorseError(ZetafioError):
    """A stationary point failed the Morse nondegeneracy check, or Newton
    did not converge from any start."""

    def __init__(self, message, residual_norms=None):
        super().__init__(message)
        self.residual_norms = residual_norms


class ExtrapolationError(ZetafioError):
    """A Richardson table is non-monotone or oscillatory; no limit is
    reported."""


class SchemaError(ZetafioError):
    """A problem file failed validation."""
