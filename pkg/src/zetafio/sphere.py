"""Quadrature on unit spheres S^(N-1) and the GL pullback identity.

N = 1 is the two-point measure on {-1, +1} and is exact; N = 2 is the
uniform trapezoid rule on the circle (spectrally accurate for smooth
integrands); N >= 3 is a product of a Gauss-Jacobi polar rule (weight
(1-u^2)^((N-3)/2)) with a lower-dimensional sphere rule, so polynomial
moments are integrated exactly up to a degree growing with the level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from ._numeric import eval_on_points, pairwise_dot


@dataclass(frozen=True)
class SphereRule:
    """Nodes/weights on S^(N-1) in ambient R^N coordinates."""

    dim_ambient: int
    nodes: np.ndarray   # (M, N)
    weights: np.ndarray  # (M,)
    level: int

    @property
    def dim_manifold(self) -> int:
        return self.dim_ambient - 1

    @property
    def volume(self) -> float:
        return float(np.sum(self.weights))


def sphere_volume(N: int) -> float:
    """vol(S^(N-1)) = 2 pi^(N/2) / Gamma(N/2); vol(S^0) = 2."""
    from math import gamma as _g, pi
    return 2.0 * pi ** (N / 2.0) / _g(N / 2.0)


def build_rule(N: int, level: int) -> SphereRule:
    """Product quadrature rule on S^(N-1) at the given resolution level."""
    if N < 1:
        raise ValueError("ambient dimension must be >= 1")
    if N == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
    elif N == 2:
        m = 8 * 2**level
        ang = 2.0 * np.pi * np.arange(m) / m
        nodes = np.column_stack([np.cos(ang), np.sin(ang)])
        weights = np.full(m, 2.0 * np.pi / m)
    else:
        sub = build_rule(N - 1, level)
        npolar = 4 * 2**level
        u, wu = roots_jacobi(npolar, (N - 3) / 2.0, (N - 3) / 2.0)
        s = np.sqrt(1.0 - u**2)
        # node = (sin(phi) * omega, cos(phi)) with u = cos(phi)
        nodes = np.concatenate(
            [s[:, None, None] * sub.nodes[None, :, :],
             np.broadcast_to(u[:, None, None], (npolar, sub.nodes.shape[0], 1))],
            axis=2,
        ).reshape(-1, N)
        weights = (wu[:, None] * sub.weights[None, :]).reshape(-1)
    return SphereRule(dim_ambient=N, nodes=nodes, weights=weights, level=level)


def sphere_integral(f, rule: SphereRule) -> complex:
    """Pairwise-summed quadrature of f over the sphere."""
    vals = eval_on_points(f, rule.nodes)
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise ValueError(f"non-finite integrand value at node {rule.nodes[bad]}")
    return pairwise_dot(rule.weights, vals)


def gl_pullback_check(a, T: np.ndarray, z: complex, k: int,
                      rule: SphereRule, degree: complex | None = None):
    """Both sides of the GL pullback identity for homogeneous integrands.

    lhs = int a(T xi) |T xi|^z ln^k |T xi| dvol(xi)
    rhs = (-1)^k / |det T| int a(xi) |T^-1 xi|^(-n-d-z) ln^k |T^-1 xi| dvol(xi)

    where d is the homogeneity degree of a (estimated from a scaling probe
    when not supplied).  The caller asserts closeness.
    """
    T = np.asarray(T, dtype=float)
    n = rule.dim_ambient
    det = np.linalg.det(T)
    if abs(det) < 1e-14:
        raise ValueError("T is singular")
    Tinv = np.linalg.inv(T)

    if degree is None:
        # homogeneity probe: a(2 xi) = 2^d a(xi)
        xi0 = rule.nodes[0]
        v1, v2 = complex(a(xi0)), complex(a(2.0 * xi0))
        if v1 == 0:
            raise ValueError("cannot probe homogeneity degree at a zero of a")
        degree = complex(np.log(v2 / v1) / np.log(2.0))
    d = complex(degree)

    def lhs_f(nodes):
        y = nodes @ T.T
        r = np.linalg.norm(y, axis=1)
        return eval_on_points(a, y) * r**complex(z) * np.log(r) ** k

    def rhs_f(nodes):
        y = nodes @ Tinv.T
        r = np.linalg.norm(y, axis=1)
        return eval_on_points(a, nodes) * r ** (-n - d - complex(z)) * np.log(r) ** k

    lhs = sphere_integral(lhs_f, rule)
    rhs = (-1.0) ** k / abs(det) * sphere_integral(rhs_f, rule)
    return lhs, rhs
