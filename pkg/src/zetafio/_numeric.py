"""Small numerical utilities used throughout the package.

Summation is pairwise everywhere so that results are reproducible
bit-for-bit for a fixed input ordering.
"""

from __future__ import annotations

import numpy as np
from scipy.special import roots_legendre


def pairwise_sum(values) -> complex:
    """Sum complex values by pairwise reduction in the given order."""
    vals = list(values)
    if not vals:
        return 0.0 + 0.0j
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return complex(vals[0])


def pairwise_dot(weights: np.ndarray, values: np.ndarray) -> complex:
    """Pairwise-summed weighted sum ``sum(w_i * v_i)``."""
    prod = np.asarray(weights) * np.asarray(values)
    return pairwise_sum(prod.tolist())


def gauss_legendre_panel(a: float, b: float, n: int):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = roots_legendre(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def composite_legendre(a: float, b: float, panels: int, n: int = 32):
    """Composite Gauss-Legendre rule: `panels` equal panels of n points."""
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre_panel(lo, hi, n)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def taylor_jet_contour(f, order: int, radius: float = 0.1, samples: int = 64):
    """Taylor coefficients at 0 of a function holomorphic on |z| <= radius.

    Cauchy integrals evaluated by the trapezoid rule on the circle
    |z| = radius; exponentially accurate for f analytic past the circle.
    Returns ``[f(0), f'(0)/1!, ..., f^(order)(0)/order!]``.
    """
    theta = 2.0 * np.pi * np.arange(samples) / samples
    zs = radius * np.exp(1j * theta)
    fv = np.array([complex(f(z)) for z in zs])
    jet = []
    for n in range(order + 1):
        cn = pairwise_dot(np.exp(-1j * n * theta) / samples, fv) / radius**n
        jet.append(cn)
    return jet


def central_derivative(f, k: int, step: float = 1e-3) -> complex:
    """k-th derivative at 0 by central differences (k <= 2)."""
    if k == 0:
        return complex(f(0.0))
    if k == 1:
        return (complex(f(step)) - complex(f(-step))) / (2.0 * step)
    if k == 2:
        return (complex(f(step)) - 2.0 * complex(f(0.0)) + complex(f(-step))) / step**2
    raise ValueError("central_derivative supports k <= 2")


def lattice_points(basis: np.ndarray, radius: float) -> np.ndarray:
    """All points of the lattice generated by the basis columns within the
    given Euclidean radius (integer-box scan of the basis pre-image)."""
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    N = B.shape[0]
    Binv = np.linalg.inv(B)
    bounds = [int(np.ceil(radius * np.linalg.norm(Binv[i, :]))) for i in range(N)]
    grids = np.meshgrid(*[np.arange(-b, b + 1) for b in bounds], indexing="ij")
    coeffs = np.stack([g.ravel() for g in grids], axis=1)
    pts = coeffs @ B.T
    keep = np.linalg.norm(pts, axis=1) <= radius + 1e-12
    return pts[keep]


def eval_on_points(f, pts: np.ndarray) -> np.ndarray:
    """Evaluate f on an (m, N) array of points, vectorized when possible."""
    try:
        out = np.asarray(f(pts), dtype=complex)
        if out.shape == (pts.shape[0],):
            return out
    except Exception:
        pass
    return np.array([complex(f(p)) for p in pts], dtype=complex)
