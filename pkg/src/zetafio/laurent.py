"""Truncated Laurent series about a fixed center.

A series is stored as coefficients ``coeffs[k]`` multiplying
``(z - center)**(min_order + k)``; ``min_order`` may be negative but is
always finite (no essential singularities). Arithmetic never drops stored
coefficients silently; trimming a numerically-zero leading block is the
explicit :meth:`LaurentSeries.normalize` step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CenterMismatchError, ZeroSeriesError

#: Relative magnitude below which a coefficient counts as zero.
NORMALIZATION_EPS = 1e-12

#: Default number of powers represented above min_order.
DEFAULT_TRUNC_POWERS = 8


class LeadingData(NamedTuple):
    oilc: int
    ilc: complex
    residue: complex
    const_term: complex


@dataclass(frozen=True)
class LaurentSeries:
    """Finite-order Laurent expansion of a meromorphic function.

    ``trunc_order`` (the highest represented power) is derived:
    ``min_order + len(coeffs) - 1``.
    """

    center: complex
    min_order: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a LaurentSeries needs at least one coefficient")

    @property
    def trunc_order(self) -> int:
        return self.min_order + len(self.coeffs) - 1

    def coefficient(self, order: int) -> complex:
        """Coefficient of (z - center)**order; 0 outside the stored range."""
        k = order - self.min_order
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0.0 + 0.0j

    def normalize(self, eps: float = NORMALIZATION_EPS) -> "LaurentSeries":
        """Raise min_order past leading coefficients of relative magnitude
        below eps.  Keeps at least one coefficient."""
        scale = max(abs(c) for c in self.coeffs)
        if scale == 0.0:
            return LaurentSeries(self.center, self.trunc_order, (0.0 + 0.0j,))
        k = 0
        while k < len(self.coeffs) - 1 and abs(self.coeffs[k]) <= eps * scale:
            k += 1
        return LaurentSeries(self.center, self.min_order + k, self.coeffs[k:])

    def principal_part(self) -> tuple:
        """Coefficients of strictly negative orders, lowest first."""
        return tuple(self.coeffs[: max(0, -self.min_order)])

    def eval(self, z: complex) -> complex:
        """Evaluate the truncated series at z (z != center if poles stored)."""
        w = complex(z) - self.center
        total = 0.0 + 0.0j
        for k, c in enumerate(self.coeffs):
            total += c * w ** (self.min_order + k)
        return total

    def derivative_at_center(self, k: int) -> complex:
        """k-th derivative at the center; requires empty principal part."""
        from math import factorial

        if any(abs(c) > 0 for c in self.principal_part()):
            raise ZeroSeriesError("derivative at center undefined: principal part present")
        return self.coefficient(k) * factorial(k)

    def to_json_dict(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "min_order": self.min_order,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "LaurentSeries":
        return LaurentSeries(
            complex(d["center"][0], d["center"][1]),
            int(d["min_order"]),
            tuple(complex(re, im) for re, im in d["coeffs"]),
        )


def _check_centers(a: LaurentSeries, b: LaurentSeries):
    if a.center != b.center:
        raise CenterMismatchError(
            f"centers differ: {a.center} vs {b.center}"
        )


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Coefficientwise sum on the union order range, truncated to
    min(a.trunc_order, b.trunc_order)."""
    _check_centers(a, b)
    lo = min(a.min_order, b.min_order)
    hi = min(a.trunc_order, b.trunc_order)
    if hi < lo:
        hi = lo
    coeffs = tuple(a.coefficient(n) + b.coefficient(n) for n in range(lo, hi + 1))
    return LaurentSeries(a.center, lo, coeffs)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product, truncated to the orders that are complete given the
    truncation of both factors."""
    _check_centers(a, b)
    lo = a.min_order + b.min_order
    hi = min(a.trunc_order + b.min_order, b.trunc_order + a.min_order)
    coeffs = np.zeros(hi - lo + 1, dtype=complex)
    for i, ca in enumerate(a.coeffs):
        for j, cb in enumerate(b.coeffs):
            n = lo + i + j
            if n <= hi:
                coeffs[n - lo] += ca * cb
    return LaurentSeries(a.center, lo, tuple(coeffs))


def extract_leading(a: LaurentSeries, eps: float = NORMALIZATION_EPS) -> LeadingData:
    """Leading order/coefficient plus the residue and constant term.

    oilc is the smallest order whose coefficient exceeds eps relative to
    the largest stored coefficient.
    """
    scale = max(abs(c) for c in a.coeffs)
    if scale == 0.0:
        raise ZeroSeriesError("series identically zero at truncation order")
    oilc = None
    for k, c in enumerate(a.coeffs):
        if abs(c) > eps * scale:
            oilc = a.min_order + k
            break
    if oilc is None:
        raise ZeroSeriesError("series identically zero at truncation order")
    return LeadingData(
        oilc=oilc,
        ilc=a.coefficient(oilc),
        residue=a.coefficient(-1),
        const_term=a.coefficient(0),
    )


def monomial(order: int, coeff: complex = 1.0, center: complex = 0.0,
             trunc_order: int | None = None) -> LaurentSeries:
    """Convenience constructor: coeff * (z - center)**order."""
    hi = trunc_order if trunc_order is not None else order + DEFAULT_TRUNC_POWERS
    coeffs = [0.0 + 0.0j] * (hi - order + 1)
    coeffs[0] = complex(coeff)
    return LaurentSeries(center, order, tuple(coeffs))
