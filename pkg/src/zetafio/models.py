"""Exactly solvable flat-torus and circle models plus their spectral
oracles, and the named-builtin registry for problem files.

The oracle computations (eta series, theta sums, the cotangent identity,
direct lattice sums) live here, physically separated from the pipeline
code they validate: nothing in this section is called by the trace
pipeline.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._numeric import central_derivative, lattice_points, pairwise_sum
from .distribution import GaugedDistribution
from .errors import PoleError, ZetafioError
from .fio import AmplitudeTerm, FioSymbol, trace_distribution, zeta_laurent_fio
from .specfun import fourier_abs_power, gamma, hurwitz_zeta, riemann_zeta
from .statphase import Phase


@dataclass(frozen=True)
class LatticeSpec:
    """A full-rank lattice Gamma = basis . Z^N with an enumeration radius."""

    basis: np.ndarray
    truncation_radius: float

    def __post_init__(self):
        B = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if abs(np.linalg.det(B)) < 1e-14:
            raise ValueError("lattice basis must be invertible")
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def cell_volume(self) -> float:
        return abs(np.linalg.det(self.basis))

    def points(self) -> np.ndarray:
        pts = lattice_points(self.basis, self.truncation_radius)
        # completeness: compare the count against the ball-volume estimate
        N = self.dim
        ball = math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0) \
            * self.truncation_radius**N
        expect = ball / self.cell_volume
        if pts.shape[0] < 0.5 * expect - N:
            raise ZetafioError("lattice enumeration incomplete within radius")
        return pts


# ==========================================================================
# independent spectral oracles (never called by the pipeline)
# ==========================================================================

def eta_series_zeta(s: complex, terms: int = 60) -> complex:
    """Riemann zeta from the alternating eta series, continued by the
    iterated-averaging Euler transform: zeta(s) = eta(s) / (1 - 2^(1-s)).
    For Re(s) < 0.5 the reflection formula is applied first."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta pole at 1", location=1.0, order=1, residue=1.0)
    if s.real < -1.5:
        # reflection with the eta evaluation on the convergent side; the
        # Euler transform itself handles moderate negative real parts
        return (2.0 * (2.0 * math.pi) ** (s - 1.0) * cmath.sin(math.pi * s / 2.0)
                * gamma(1.0 - s) * eta_series_zeta(1.0 - s, terms))
    row = [cmath.exp(-s * math.log(n + 1)) * (-1.0) ** n for n in range(terms)]
    # Euler transform: eta = sum_k (forward difference)^k a_0 / 2^(k+1)
    acc = 0.0 + 0.0j
    for k in range(terms):
        acc += row[0] / 2.0 ** (k + 1)
        row = [(row[i] + row[i + 1]) / 1.0 for i in range(len(row) - 1)]
        if not row:
            break
    eta = acc
    return eta / (1.0 - 2.0 ** (1.0 - s))


def eta_series_zeta_derivative(k: int, s: complex, step: float = 1e-3,
                               richardson: bool = False) -> complex:
    """k-th derivative of the eta-series zeta by central differences.

    With the default step this uses the same stencil as the pipeline-side
    finite differences, so truncation errors cancel in comparisons;
    ``richardson`` adds one halving step (h^4 accuracy) for standalone
    derivative values."""
    f = lambda dz: eta_series_zeta(s + dz)
    d1 = central_derivative(f, k, step=step)
    if not richardson:
        return d1
    d2 = central_derivative(f, k, step=step / 2.0)
    return (4.0 * d2 - d1) / 3.0


def theta_sum(t: float, lat: LatticeSpec) -> float:
    """Spectral heat oracle: sum over the dual lattice of e^(-t |k|^2).

    The Dirichlet Laplacian on R^N / Gamma has eigenfunctions e^(i<k,x>)
    with k in 2 pi (basis^-T) Z^N.
    """
    dual = 2.0 * math.pi * np.linalg.inv(lat.basis).T
    radius = math.sqrt(max(-math.log(1e-18), 1.0) / t) + 1e-9
    pts = lattice_points(dual, radius)
    vals = np.exp(-t * np.sum(pts**2, axis=1))
    order = np.argsort(-vals, kind="stable")
    return float(pairwise_sum(list(vals[order])).real)


def abel_wave_oracle(t: float) -> complex:
    """Abel-summed spectral wave trace on R/2piZ:
    sum_n e^(i t |n|) -> i cot(t/2)."""
    return 1j / math.tan(t / 2.0)


def shifted_lattice_sum(alpha: complex, h: float, z: complex,
                        terms: int = 2_000_000) -> complex:
    """Direct summation oracle sum_{n in Z} (h+|n|)^(z+alpha), valid in the
    convergence region Re(z+alpha) < -1."""
    beta = complex(z) + complex(alpha)
    if beta.real >= -1.0:
        raise ZetafioError("direct lattice sum diverges for Re(z+alpha) >= -1")
    n = np.arange(1, terms + 1, dtype=float)
    vals = (h + n) ** beta
    tail = (h + terms) ** (beta + 1.0) / (-(beta + 1.0))
    return h**beta + 2.0 * (complex(vals.sum()) + tail)


# ==========================================================================
# heat trace on the flat torus
# ==========================================================================

def heat_trace_closed_form(t: float, lat: LatticeSpec, N: int) -> float:
    """vol(R^N/Gamma) / (4 pi t)^(N/2) * sum_gamma exp(-|gamma|^2 / 4t),
    truncated with a reported Gaussian tail bound."""
    if t <= 0:
        raise ValueError("t must be > 0")
    pts = lat.points()
    vals = np.exp(-np.sum(pts**2, axis=1) / (4.0 * t))
    order = np.argsort(-vals, kind="stable")
    total = pairwise_sum(list(vals[order])).real
    return float(lat.cell_volume / (4.0 * math.pi * t) ** (N / 2.0) * total)


def heat_gaussian_tail_bound(t: float, lat: LatticeSpec, N: int) -> float:
    """Crude bound on the omitted gaussian lattice tail."""
    R = lat.truncation_radius
    return float(lat.cell_volume / (4.0 * math.pi * t) ** (N / 2.0)
                 * math.exp(-R**2 / (4.0 * t))
                 * (2.0 * R / math.sqrt(t) + 1.0) ** N)


def heat_symbol(t: float, lat: LatticeSpec, N: int, jet_len: int = 3) -> FioSymbol:
    """Gauged heat-semigroup symbol on the flat torus: pseudo-differential
    phase <x-y, xi>, Schwartz amplitude (2 pi)^-N e^(-t |xi|^2) with the
    r^z gauge, and the lattice copies of the kernel."""
    pref = (2.0 * math.pi) ** (-N)

    def make_entry(n):
        fac = 1.0 / math.factorial(n)

        def a0(x, y, xi):
            xi = np.asarray(xi, dtype=float)
            if xi.ndim == 1:
                r2 = float(xi @ xi)
                logr = 0.5 * math.log(r2) if r2 > 0 else 0.0
                return pref * math.exp(-t * r2) * logr**n * fac
            r2 = np.sum(xi**2, axis=1)
            logr = np.where(r2 > 0, 0.5 * np.log(np.where(r2 > 0, r2, 1.0)), 0.0)
            return pref * np.exp(-t * r2) * logr**n * fac

        return a0

    phase = Phase(
        func=lambda x, y, xi: np.asarray(xi) @ (np.asarray(x) - np.asarray(y)),
    )
    radius = math.sqrt(4.0 * t * (-math.log(1e-16))) + 1e-9
    return FioSymbol(
        base_dim=N,
        freq_dim=N,
        base_volume=lat.cell_volume,
        phase=phase,
        amplitude_remainder=tuple(make_entry(n) for n in range(jet_len)),
        lattice_basis=lat.basis,
        lattice_radius=radius,
    )


def heat_trace_via_zeta(t: float, lat: LatticeSpec, N: int,
                        level: int | None = None) -> complex:
    """Constant Laurent coefficient of the heat family through the full
    trace pipeline; must match the closed form and the theta oracle."""
    if level is None:
        level = 6 if N >= 2 else 1
    sym = heat_symbol(t, lat, N)
    series = zeta_laurent_fio(sym, K=0, level=level)
    return series.coefficient(0)


# ==========================================================================
# fractional Laplacians on the circle
# ==========================================================================

_CIRCLE_LATTICE = LatticeSpec(basis=np.array([[2.0 * math.pi]]),
                              truncation_radius=2.0 * math.pi * 64.0)


def fractional_circle_symbol(alpha: complex, jet_len: int = 9) -> FioSymbol:
    """H^(z+alpha) on R/2piZ, H = sqrt(|Laplacian|): amplitude
    |xi|^(alpha+z) / (2 pi) (an M-gauge: the angular part is
    z-independent) with the lattice copies of the kernel."""
    pref = 1.0 / (2.0 * math.pi)

    def a0(x, y, nu):
        nu = np.asarray(nu, dtype=float)
        if nu.ndim == 1:
            return pref
        return np.full(nu.shape[0], pref, dtype=complex)

    phase = Phase(func=lambda x, y, xi: np.asarray(xi) @ (np.asarray(x) - np.asarray(y)))
    return FioSymbol(
        base_dim=1,
        freq_dim=1,
        base_volume=2.0 * math.pi,
        phase=phase,
        amplitude_terms=(AmplitudeTerm(degree=alpha, log_order=0,
                                       angular_jet=(a0,)),),
        lattice_basis=_CIRCLE_LATTICE.basis,
        lattice_radius=_CIRCLE_LATTICE.truncation_radius,
    )


def circle_fractional_distribution(alpha: complex, jet_len: int = 9) -> GaugedDistribution:
    """The gauged distribution induced by the circle fractional Laplacian
    (the trace pipeline's reduction of :func:`fractional_circle_symbol`)."""
    return trace_distribution(fractional_circle_symbol(alpha), level=1,
                              jet_len=jet_len)


def circle_fractional_zeta(alpha: complex, z: complex, n_direct: int = 8) -> complex:
    """zeta(s -> H^s H^alpha)(z) assembled along the closed-form route:

    * unit-ball integral of |xi|^(alpha+z): 2 / (1 + alpha + z),
    * the critical radial weight: -2 / (1 + alpha + z),
    * the lattice Fourier sum over n != 0 of e^(-2 pi i n xi)|xi|^(alpha+z),
      resummed through the Riemann zeta.

    The first two cancel exactly (asserted algebraically before summing);
    the value is the resummed lattice sum.
    """
    alpha, z = complex(alpha), complex(z)
    beta = alpha + z
    unit_ball = 2.0 / (1.0 + beta)
    critical_weight = -2.0 / (1.0 + beta)
    if unit_ball + critical_weight != 0.0:
        raise AssertionError("unit-ball term must cancel the critical weight exactly")

    direct = [2.0 * fourier_abs_power(beta, float(k)) for k in range(1, n_direct + 1)]
    pref = 2.0 * cmath.sin(-beta * math.pi / 2.0) * gamma(beta + 1.0)
    partial = pairwise_sum([complex(k) ** (-beta - 1.0) for k in range(1, n_direct + 1)])
    tail = 2.0 * pref * (2.0 * math.pi) ** (-beta - 1.0) * (riemann_zeta(beta + 1.0) - partial)
    return pairwise_sum(direct) + tail


def circle_fractional_zeta_derivative(alpha: complex, k: int,
                                      step: float = 1e-3) -> complex:
    """k-th z-derivative at 0 of the assembled circle zeta (central
    differences); the oracle is (-1)^k 2 zeta_R^(k)(-alpha)."""
    if k > 2:
        raise ValueError("k <= 2")
    return central_derivative(lambda z: circle_fractional_zeta(alpha, z), k,
                              step=step)


# ==========================================================================
# shifted fractional Laplacians on the circle
# ==========================================================================

def shifted_fractional_zeta(alpha: complex, h: float, z: complex) -> complex:
    """zeta(s -> G^(s+alpha))(z) with G = h + sqrt(|Laplacian|) on the
    circle: the closed form 2 zeta_H(-z-alpha; h) - h^(z+alpha)."""
    if not 0.0 < h <= 1.0:
        raise ValueError("h in (0, 1] required")
    alpha, z = complex(alpha), complex(z)
    s = -z - alpha
    return 2.0 * hurwitz_zeta(s, h) - h ** (z + alpha)


def shifted_fractional_zeta_pipeline(alpha: complex, h: float, z: complex,
                                     k_max: int = 64, tol: float = 1e-9) -> complex:
    """The same value through the binomial-expanded amplitude

        (h+|xi|)^(alpha+z) = sum_k C(alpha+z, k) |xi|^(alpha+z-k) h^k,

    each term contributing its lattice zeta value, plus the h^(z+alpha)
    zero-mode.  Raises when the truncation bound exceeds tol.
    """
    if not 0.0 < h <= 1.0:
        raise ValueError("h in (0, 1] required")
    beta = complex(alpha) + complex(z)
    binom = 1.0 + 0.0j
    pieces = []
    for k in range(k_max + 1):
        if k > 0:
            binom *= (beta - (k - 1)) / k
        pieces.append(2.0 * binom * h**k * riemann_zeta(k - beta))
    bound = abs(binom * (beta - k_max) / (k_max + 1.0) * h ** (k_max + 1)
                * riemann_zeta(k_max + 1.0 - beta.real))
    if bound > tol:
        raise ZetafioError(f"binomial truncation bound {bound:.2e} exceeds {tol}")
    return h**beta + pairwise_sum(pieces)


def shifted_exponent_ladder(alpha: complex, count: int = 2):
    """Known h->0 error exponents of the shifted closed form at fixed z:
    the zero mode contributes h^alpha, the Hurwitz expansion contributes
    integer powers."""
    return [float(alpha.real) if isinstance(alpha, complex) else float(alpha)] + \
        [float(k) for k in range(1, count + 1)]


# ==========================================================================
# builtin registry for problem files
# ==========================================================================

def _angular_one(nu):
    nu = np.atleast_2d(np.asarray(nu, dtype=float))
    return np.ones(nu.shape[0], dtype=complex)


def _angular_first_coord(nu):
    nu = np.atleast_2d(np.asarray(nu, dtype=float))
    return nu[:, 0].astype(complex)


def _angular_first_coord_sq(nu):
    nu = np.atleast_2d(np.asarray(nu, dtype=float))
    return (nu[:, 0] ** 2).astype(complex)


def _remainder_exp(r, nodes):
    return np.full(nodes.shape[0], math.exp(-r), dtype=complex)


def _remainder_gauss(r, nodes):
    return np.full(nodes.shape[0], math.exp(-r * r), dtype=complex)


def _unit_ball_gauss(xi):
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    return np.exp(-np.sum(xi**2, axis=1)).astype(complex)


BUILTIN_ANGULAR = {
    "one": _angular_one,
    "first_coord": _angular_first_coord,
    "first_coord_sq": _angular_first_coord_sq,
}

BUILTIN_REMAINDER = {
    "exp_decay": _remainder_exp,
    "gauss_decay": _remainder_gauss,
}

BUILTIN_UNIT_BALL = {
    "gauss": _unit_ball_gauss,
}

BUILTIN_PHASES = {
    "psdo_identity_phase": Phase(
        func=lambda x, y, xi: np.asarray(xi) @ (np.asarray(x) - np.asarray(y))
    ),
}

BUILTIN_MODELS = {
    "heat": heat_symbol,
    "fractional_laplacian_circle": fractional_circle_symbol,
    "shifted_fractional": shifted_fractional_zeta,
    "wave_flat_torus": "statphase.wave_trace_flat_torus",
}
