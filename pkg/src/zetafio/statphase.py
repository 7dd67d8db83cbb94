"""Stationary phase machinery on the sphere and flat-torus wave traces.

Sphere integrals I(x, y, r) = int_{S^(N-1)} e^(i r theta(x,y,eta))
a(x,y,eta) dvol(eta) are expanded over the stationary points of the
restricted phase.  The r-power bookkeeping follows the standard
normalization: the contribution of a nondegenerate stationary point at
leading order is

    (2 pi / r)^((N-1)/2) |det Theta|^(-1/2) e^(i pi sgn(Theta)/4)
        a(xi_hat) e^(i r theta_hat),

which is validated against closed-form Bessel/cotangent references
rather than against any particular symbol-calculus convention.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from ._numeric import eval_on_points, lattice_points, pairwise_sum
from .errors import MorseError, PoleError, ZetafioError
from .specfun import gamma
from .sphere import build_rule, sphere_integral, sphere_volume

_GRAD_TOL = 1e-10
_DEDUPE_TOL = 1e-6
_DET_FLOOR = 1e-8
_FD_STEP = 1e-5


@dataclass(frozen=True)
class Phase:
    """A phase function theta(x, y, xi), homogeneous of degree 1 in xi.

    ``gradient`` / ``hessian`` are optional analytic ambient derivatives
    in xi; geodesic finite differences are used when absent.
    """

    func: object
    gradient: object = None
    hessian: object = None

    def __call__(self, x, y, xi):
        return self.func(x, y, xi)


def as_phase(phase) -> Phase:
    return phase if isinstance(phase, Phase) else Phase(func=phase)


@dataclass(frozen=True)
class StationaryPointData:
    """One nondegenerate stationary point of the restricted phase."""

    point: np.ndarray           # xi_hat on S^(N-1)
    phase_value: float          # theta(x, y, xi_hat)
    hessian: np.ndarray         # spherical Hessian in the tangent frame
    det: float
    signature: int
    frame: np.ndarray           # (N, N-1) tangent frame at xi_hat


def tangent_frame(xi: np.ndarray) -> np.ndarray:
    """Orthonormal tangent frame at xi: Gram-Schmidt on the ambient basis
    with the largest-|component| axis dropped."""
    xi = np.asarray(xi, dtype=float)
    N = xi.shape[0]
    drop = int(np.argmax(np.abs(xi)))
    cols = []
    for k in range(N):
        if k == drop:
            continue
        v = np.zeros(N)
        v[k] = 1.0
        v = v - np.dot(v, xi) * xi
        for c in cols:
            v = v - np.dot(v, c) * c
        n = np.linalg.norm(v)
        if n < 1e-12:
            raise ZetafioError("degenerate tangent frame")
        cols.append(v / n)
    return np.column_stack(cols) if cols else np.zeros((N, 0))


def _geodesic(xi: np.ndarray, u: np.ndarray, t: float) -> np.ndarray:
    n = np.linalg.norm(u) * t
    if n == 0.0:
        return xi
    direction = u / np.linalg.norm(u)
    return math.cos(n) * xi + math.sin(n) * direction


def spherical_derivatives(phase: Phase, x, y, xi: np.ndarray,
                          frame: np.ndarray, step: float = _FD_STEP):
    """(gradient, Hessian) of theta restricted to the sphere, in the given
    tangent frame.  Analytic ambient derivatives are used when the phase
    carries them; otherwise geodesic central differences with the given
    step."""
    m = frame.shape[1]
    if phase.gradient is not None and phase.hessian is not None:
        g_amb = np.asarray(phase.gradient(x, y, xi), dtype=float)
        H_amb = np.asarray(phase.hessian(x, y, xi), dtype=float)
        g = frame.T @ g_amb
        radial = float(np.dot(g_amb, xi))
        H = frame.T @ H_amb @ frame - radial * np.eye(m)
        return g, H

    f0 = float(phase(x, y, xi))
    g = np.zeros(m)
    H = np.zeros((m, m))
    for p in range(m):
        fp = float(phase(x, y, _geodesic(xi, frame[:, p], step)))
        fmn = float(phase(x, y, _geodesic(xi, frame[:, p], -step)))
        g[p] = (fp - fmn) / (2.0 * step)
        H[p, p] = (fp - 2.0 * f0 + fmn) / step**2
    for p in range(m):
        for q in range(p + 1, m):
            u = (frame[:, p] + frame[:, q]) / math.sqrt(2.0)
            v = (frame[:, p] - frame[:, q]) / math.sqrt(2.0)
            dpq = (float(phase(x, y, _geodesic(xi, u, step)))
                   - 2.0 * f0
                   + float(phase(x, y, _geodesic(xi, u, -step)))) / step**2
            dmq = (float(phase(x, y, _geodesic(xi, v, step)))
                   - 2.0 * f0
                   + float(phase(x, y, _geodesic(xi, v, -step)))) / step**2
            H[p, q] = H[q, p] = 0.5 * (dpq - dmq)
    return g, H


def _make_point(phase: Phase, x, y, xi: np.ndarray, det_floor: float) -> StationaryPointData:
    frame = tangent_frame(xi)
    _, H = spherical_derivatives(phase, x, y, xi, frame)
    if H.shape[0] == 0:
        det, sig = 1.0, 0
    else:
        det = float(np.linalg.det(H))
        eig = np.linalg.eigvalsh(0.5 * (H + H.T))
        sig = int(np.sum(eig > 0) - np.sum(eig < 0))
        if abs(det) <= det_floor:
            raise MorseError(
                f"degenerate spherical Hessian (|det| = {abs(det):.2e}) at {xi}"
            )
    return StationaryPointData(
        point=xi, phase_value=float(phase(x, y, xi)), hessian=H,
        det=det, signature=sig, frame=frame,
    )


def find_stationary_points(phase, x, y, N: int, level: int = 3,
                           det_floor: float = _DET_FLOOR):
    """All zeros of the spherical gradient of theta(x, y, .) on S^(N-1).

    Multi-start projected Newton from a level-`level` sphere grid,
    deduplicated at distance 1e-6; every returned point is validated
    Morse-nondegenerate.  Results are sorted by first coordinate for
    deterministic ordering.
    """
    phase = as_phase(phase)
    if N == 1:
        return [
            _make_point(phase, x, y, np.array([1.0]), det_floor),
            _make_point(phase, x, y, np.array([-1.0]), det_floor),
        ]
    starts = build_rule(N, level).nodes
    found = []
    residuals = []
    for xi0 in starts:
        xi = np.array(xi0, dtype=float)
        ok = False
        for _ in range(60):
            frame = tangent_frame(xi)
            g, H = spherical_derivatives(phase, x, y, xi, frame)
            gn = float(np.linalg.norm(g))
            if gn < _GRAD_TOL:
                ok = True
                break
            try:
                delta = np.linalg.solve(H, -g)
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(delta) > 0.5:
                delta *= 0.5 / np.linalg.norm(delta)
            xi_new = xi + frame @ delta
            xi = xi_new / np.linalg.norm(xi_new)
        residuals.append(float(np.linalg.norm(g)))
        if not ok:
            continue
        if any(np.linalg.norm(xi - p) < _DEDUPE_TOL for p in found):
            continue
        found.append(xi)
    if not found:
        if min(residuals) < 1e-3:
            raise MorseError(
                "Newton did not converge from any start",
                residual_norms=sorted(residuals)[:8],
            )
        return []
    pts = [_make_point(phase, x, y, xi, det_floor) for xi in found]
    pts.sort(key=lambda p: tuple(np.round(p.point, 12)))
    return pts


# --------------------------------------------------------------------------
# stationary-phase coefficients
# --------------------------------------------------------------------------

def _sphere_amplitude_hessian(a, x, y, sp: StationaryPointData, step: float):
    """Hessian of the amplitude restricted to the sphere at xi_hat, in the
    tangent frame of sp (geodesic central differences)."""
    m = sp.frame.shape[1]
    xi = sp.point
    f0 = complex(a(x, y, xi))
    H = np.zeros((m, m), dtype=complex)
    for p in range(m):
        fp = complex(a(x, y, _geodesic(xi, sp.frame[:, p], step)))
        fmn = complex(a(x, y, _geodesic(xi, sp.frame[:, p], -step)))
        H[p, p] = (fp - 2.0 * f0 + fmn) / step**2
    for p in range(m):
        for q in range(p + 1, m):
            u = (sp.frame[:, p] + sp.frame[:, q]) / math.sqrt(2.0)
            v = (sp.frame[:, p] - sp.frame[:, q]) / math.sqrt(2.0)
            dpq = (complex(a(x, y, _geodesic(xi, u, step))) - 2.0 * f0
                   + complex(a(x, y, _geodesic(xi, u, -step)))) / step**2
            dmq = (complex(a(x, y, _geodesic(xi, v, step))) - 2.0 * f0
                   + complex(a(x, y, _geodesic(xi, v, -step)))) / step**2
            H[p, q] = H[q, p] = 0.5 * (dpq - dmq)
    return H


def _transport_laplacian(a, sp: StationaryPointData, x, y, step: float):
    """Delta_{dB,Theta} a = <Theta^-1 d_dB, d_dB> a as a function on the
    sphere near xi_hat (each evaluation differentiates a in the frame of
    the evaluation point)."""
    Hinv = np.linalg.inv(sp.hessian)

    def op(xx, yy, xi):
        frame = tangent_frame(np.asarray(xi, dtype=float))
        local = StationaryPointData(
            point=np.asarray(xi, dtype=float), phase_value=0.0,
            hessian=sp.hessian, det=sp.det, signature=sp.signature,
            frame=frame,
        )
        Ha = _sphere_amplitude_hessian(a, xx, yy, local, step)
        return complex(np.sum(Hinv * Ha))

    return op


def h_coefficient(j: int, sp: StationaryPointData, amplitude, x, y,
                  step: float = _FD_STEP) -> complex:
    """h_j at a stationary point:

        (2 pi)^((N-1)/2) |det Theta|^(-1/2) e^(i pi sgn Theta / 4)
            / (j! (2i)^j) * Delta_{dB,Theta}^j a (xi_hat).
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    m = sp.frame.shape[1]
    pref = ((2.0 * math.pi) ** (m / 2.0)
            * abs(sp.det) ** -0.5
            * cmath.exp(1j * math.pi * sp.signature / 4.0)
            / (math.factorial(j) * (2.0j) ** j))
    a_eff = amplitude
    for depth in range(j):
        a_eff = _transport_laplacian(a_eff, sp, x, y, step * 30.0**depth)
    return pref * complex(a_eff(x, y, sp.point))


def g_coefficient(j: int, d: complex, l: int, N: int, theta_hat: float,
                  c_ln: float = 0.0, eps: float = 1e-8) -> complex:
    """Radial frequency factor of the kernel expansion,

        d^l/dz^l [ Gamma(q+1+z) i^(q+1+z) (theta_hat + i0)^(-q-1-z) ](0),

    with q = d + (N+1)/2 - j.  For q a negative integer the one-dimensional
    logarithmic closed form is returned (N = 1, l = 0 only):

        (i theta_hat)^(-q-1) / (-q-1)! * (c_ln + ln(-i theta_hat + 0)).

    The +i0 prescription is realized at eps with one Richardson halving.
    """
    q = complex(d) + (N + 1) / 2.0 - j
    qi = round(q.real)
    is_int = abs(q.imag) < 1e-12 and abs(q.real - qi) < 1e-12
    # For N = 1 the radial power is q - 1, so the logarithmic case already
    # starts at q = 0; for N > 1 the regular formula is finite there.
    if is_int and ((N == 1 and qi <= 0) or qi <= -1):
        if N != 1:
            raise ZetafioError(
                "q in -N with N > 1: contour-integral branch not implemented"
            )
        if l != 0:
            raise ZetafioError("logarithmic branch implemented for l = 0 only")
        m = -qi
        # ln(-i theta + 0) = ln|theta| - i (pi/2) sgn(theta)
        logterm = math.log(abs(theta_hat)) - 1j * (math.pi / 2.0) * math.copysign(1.0, theta_hat)
        return (1j * theta_hat) ** m / math.factorial(m) * (c_ln + logterm)

    def value(z: complex) -> complex:
        def at(e: float) -> complex:
            base = theta_hat + 1j * e
            return (gamma(q + 1.0 + z)
                    * cmath.exp(1j * math.pi * (q + 1.0 + z) / 2.0)
                    * base ** (-q - 1.0 - z))
        return 2.0 * at(eps / 2.0) - at(eps)

    if l == 0:
        return value(0.0)
    # z-derivative of a holomorphic function by central differences
    h = 1e-3
    if l == 1:
        return (value(h) - value(-h)) / (2.0 * h)
    if l == 2:
        return (value(h) - 2.0 * value(0.0) + value(-h)) / h**2
    raise ZetafioError("g_coefficient supports log orders l <= 2")


# --------------------------------------------------------------------------
# sphere integrals
# --------------------------------------------------------------------------

def _brute_force_level(N: int, r: float, level: int | None) -> int:
    if level is not None:
        return level
    if N == 2:
        need = max(256, 10.0 * r)
        return max(6, math.ceil(math.log2(need / 8.0)))
    need = max(64, 3.0 * r)
    return max(4, math.ceil(math.log2(need / 4.0)))


def spherical_phase_integral(phase, amplitude, x, y, r: float, N: int,
                             J: int = 0, level: int | None = None):
    """Asymptotic and brute-force values of
    I(x,y,r) = int_{S^(N-1)} e^(i r theta(x,y,eta)) a(x,y,eta) dvol(eta).

    asymptotic = sum_s e^(i r theta_hat_s) sum_{j<=J} h_j^s r^(-(N-1)/2-j);
    brute_force is plain sphere quadrature at a resolution keyed to r.
    For N = 1 both are the exact two-point sum.  Returns
    (asymptotic, brute_force, points).
    """
    phase = as_phase(phase)
    if J > 3:
        raise ValueError("J <= 3 supported")
    if N == 1:
        val = (cmath.exp(1j * r * float(phase(x, y, np.array([1.0]))))
               * complex(amplitude(x, y, np.array([1.0])))
               + cmath.exp(1j * r * float(phase(x, y, np.array([-1.0]))))
               * complex(amplitude(x, y, np.array([-1.0]))))
        pts = find_stationary_points(phase, x, y, 1)
        return val, val, pts

    pts = find_stationary_points(phase, x, y, N)
    total = 0.0 + 0.0j
    for sp in pts:
        series = pairwise_sum([
            h_coefficient(jj, sp, amplitude, x, y) * r ** (-(N - 1) / 2.0 - jj)
            for jj in range(J + 1)
        ])
        total += cmath.exp(1j * r * sp.phase_value) * series

    rule = build_rule(N, _brute_force_level(N, r, level))

    def f(nodes):
        th = np.array([float(phase(x, y, nu)) for nu in nodes])
        av = eval_on_points(lambda nu: amplitude(x, y, nu), nodes)
        return np.exp(1j * r * th) * av

    brute = sphere_integral(f, rule)
    return total, brute, pts


# --------------------------------------------------------------------------
# Hilbert-Schmidt criterion
# --------------------------------------------------------------------------

def hilbert_schmidt_check(sym, base_grid, phase_floor: float = 1e-8):
    """min over grid points x and stationary points s of
    |theta(x, x, xi_hat^s)|; passes iff the minimum exceeds the floor.

    ``sym`` needs ``.phase`` and ``.freq_dim`` attributes (an FioSymbol
    works); an identically vanishing diagonal phase fails with minimum 0.
    """
    phase = as_phase(sym.phase)
    N = sym.freq_dim
    probe = build_rule(N, 2).nodes
    min_abs = math.inf
    for x in base_grid:
        vals = [abs(float(phase(x, x, nu))) for nu in probe]
        if max(vals) < 1e-12:
            return False, 0.0
        pts = find_stationary_points(phase, x, x, N)
        for sp in pts:
            min_abs = min(min_abs, abs(sp.phase_value))
    if not math.isfinite(min_abs):
        min_abs = 0.0
        return False, min_abs
    return (min_abs > phase_floor), min_abs


# --------------------------------------------------------------------------
# flat-torus wave trace
# --------------------------------------------------------------------------

def wave_trace_flat_torus(t: float, basis, N: int, r_lattice: float,
                          pole_guard: float = 1e-6) -> complex:
    """Closed-form zeta-regularized wave trace on the flat torus R^N/Gamma:

        (N-1)! vol_X / (-2 pi i)^N * ( vol(S^(N-1)) / t^N
          + sum_{gamma != 0} sum_{+-} (pi/2)^((N-1)/2) e^(-i pi (N-1)/4)
            |gamma|^(-(N-1)/2) / (t +- |gamma|)^N )

    as a truncated lattice sum.  For N = 1 the truncation is corrected by
    the exact digamma tail.  Poles sit exactly at geodesic lengths.
    """
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    vol_x = abs(np.linalg.det(basis))
    pts = lattice_points(basis, r_lattice)
    norms = np.linalg.norm(pts, axis=1)
    norms = norms[norms > 1e-12]
    close = norms[np.abs(norms - abs(t)) < pole_guard] if norms.size else np.array([])
    if abs(t) < pole_guard:
        raise PoleError("wave trace pole at t = 0", location=0.0, order=N)
    if close.size:
        L = float(close[0])
        count = int(np.sum(np.abs(norms - L) < pole_guard))
        res = None
        if N == 1:
            res = math.factorial(N - 1) * vol_x / (-2j * math.pi) ** N * count
        raise PoleError(
            f"wave trace pole: t at closed-geodesic length {L}",
            location=L, order=N, residue=res,
        )

    pref = math.factorial(N - 1) * vol_x / (-2j * math.pi) ** N
    angular = (math.pi / 2.0) ** ((N - 1) / 2.0) * cmath.exp(-1j * math.pi * (N - 1) / 4.0)
    pieces = [sphere_volume(N) / t**N]
    order = np.argsort(norms, kind="stable")
    for L in norms[order]:
        pieces.append(angular * L ** (-(N - 1) / 2.0)
                      * ((t + L) ** -N + (t - L) ** -N))
    total = pairwise_sum(pieces)

    if N == 1:
        # exact tail: the lattice is L0 Z and the sum covered k <= K, so add
        # sum_{k>K} 2 [1/(t+L0 k) + 1/(t-L0 k)] via digamma
        L0 = abs(basis[0, 0])
        K = norms.size // 2
        tau = t / L0
        tail = (2.0 / L0) * (digamma(K + 1 - tau) - digamma(K + 1 + tau))
        total += tail
    return pref * complex(total)


def wave_trace_tail_bound(basis, N: int, r_lattice: float, t: float) -> float:
    """Crude bound on the omitted lattice tail of the wave trace sum."""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if N == 1:
        return 0.0  # digamma tail is exact
    cell = abs(np.linalg.det(basis)) ** (1.0 / N)
    p = (N - 1) / 2.0 + N
    # sum over |gamma| > R of |gamma|^(-(N-1)/2) |t-|gamma||^-N ~ integral
    return float(sphere_volume(N) / cell**N * r_lattice ** (N - p) / max(p - N, 0.5))
