"""Gauged poly-log-homogeneous distributions and their zeta functions.

A distribution is a finite family of log-homogeneous terms

    alpha_i(z)(r, nu) = r^(d_i + z) (ln r)^(l_i) atilde_i(z)(nu)

on the half-cylinder [1, inf) x S^(N-1), plus an integrable remainder
alpha_0(z).  Gauges enter only through their z-Taylor jets at 0, which are
polynomials by construction; a jet entry beyond the stored length is
exactly zero.

Conventions
-----------
* Angular jet entries are functions on the sphere: ``A_n(nu)`` with
  ``A_n = (d/dz)^n atilde(0) / n!``.
* Remainder jet entries are *radial densities with respect to
  dr x dvol_M*: any cone volume Jacobian r^(dim M) is already included in
  the stored function.  Term weights get the Jacobian through the radial
  coefficient instead.
* Unit-ball jet entries are plain functions on the ball B(0,1) in R^N,
  integrated against Lebesgue measure; they carry the holomorphic part of
  operator traces.
* For distributions whose remainder/ball content only exists as a
  meromorphic extension (lattice models), precomputed Taylor jets of the
  integrated contributions may be supplied instead of pointwise functions
  (``remainder_integral_jet`` / ``unit_ball_integral_jet``).  Unlike the
  polynomial function jets, these are truncations: requesting more Laurent
  orders than the stored jet carries silently truncates, and point
  evaluation treats them as Taylor polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._numeric import eval_on_points, gauss_legendre_panel, pairwise_dot, pairwise_sum
from .errors import (
    NearPoleError,
    NonIntegrableError,
    PoleError,
    ZetafioError,
)
from .laurent import DEFAULT_TRUNC_POWERS, LaurentSeries
from .sphere import SphereRule, sphere_integral

#: |d + dim M + 1| below this counts as a critical degree.
CRITICAL_TOL = 1e-9

#: zeta_eval refuses to evaluate closer than this to a pole.
POLE_GUARD = 1e-8


@dataclass(frozen=True)
class LogHomogeneousTerm:
    """One term: degree d, log order l, and the z-Taylor jet of the gauged
    angular part (A_n = d^n atilde(0) / n!)."""

    degree: complex
    log_order: int
    angular_jet: tuple

    def __post_init__(self):
        object.__setattr__(self, "degree", complex(self.degree))
        object.__setattr__(self, "angular_jet", tuple(self.angular_jet))
        if self.log_order < 0:
            raise ValueError("log_order must be >= 0")
        if len(self.angular_jet) < 1:
            raise ValueError("angular_jet needs at least the order-0 entry")

    def jet_coefficient(self, n: int):
        """A_n, or None when the (polynomial) jet is zero at that order."""
        if 0 <= n < len(self.angular_jet):
            return self.angular_jet[n]
        return None

    def is_m_gauged(self) -> bool:
        return len(self.angular_jet) == 1


@dataclass(frozen=True)
class GaugedDistribution:
    """alpha = alpha_0 + sum of log-homogeneous terms over a sphere."""

    manifold: SphereRule
    terms: tuple = ()
    remainder_jet: tuple = ()
    unit_ball_jet: tuple = ()
    remainder_integral_jet: tuple | None = None
    unit_ball_integral_jet: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "remainder_jet", tuple(self.remainder_jet))
        object.__setattr__(self, "unit_ball_jet", tuple(self.unit_ball_jet))
        if self.remainder_integral_jet is not None:
            object.__setattr__(self, "remainder_integral_jet",
                               tuple(complex(v) for v in self.remainder_integral_jet))
        if self.unit_ball_integral_jet is not None:
            object.__setattr__(self, "unit_ball_integral_jet",
                               tuple(complex(v) for v in self.unit_ball_integral_jet))
        pairs = [(t.degree, t.log_order) for t in self.terms]
        if len(set(pairs)) != len(pairs):
            raise ValueError("the map term -> (degree, log_order) must be injective")
        if self.terms and not all(
            np.isfinite(t.degree.real) for t in self.terms
        ):
            raise ValueError("degrees must be finite")

    @property
    def dim_m(self) -> int:
        return self.manifold.dim_manifold

    def critical_terms(self, tol: float = CRITICAL_TOL):
        """Terms with d = -dim M - 1 (the index set I_0)."""
        c = -self.dim_m - 1.0
        return tuple(t for t in self.terms if abs(t.degree - c) <= tol)

    def noncritical_terms(self, tol: float = CRITICAL_TOL):
        c = -self.dim_m - 1.0
        return tuple(t for t in self.terms if abs(t.degree - c) > tol)


# --------------------------------------------------------------------------
# radial coefficient and its mollified/unit-interval relatives
# --------------------------------------------------------------------------

def radial_coefficient(d: complex, l: int, dimM: int, z: complex) -> complex:
    """Meromorphic extension of int_1^inf rho^(dimM + d + z) (ln rho)^l drho:

        (-1)^(l+1) l! (dim M + d + z + 1)^(-(l+1))
    """
    w = dimM + complex(d) + complex(z) + 1.0
    if abs(w) <= CRITICAL_TOL:
        raise PoleError(
            "radial coefficient pole: dim M + d + z + 1 = 0",
            location=complex(z), order=l + 1,
        )
    return (-1.0) ** (l + 1) * math.factorial(l) * w ** (-(l + 1))


def unit_interval_radial_coefficient(d: complex, l: int, dimM: int, z: complex) -> complex:
    """Meromorphic extension of int_0^1 rho^(dimM + d + z) (ln rho)^l drho:

        (-1)^l l! (dim M + d + z + 1)^(-(l+1))

    This is the exact negative of :func:`radial_coefficient`; the two add
    to zero, which is the regularized vanishing of full-radial powers.
    """
    return -radial_coefficient(d, l, dimM, z)


# --------------------------------------------------------------------------
# residues
# --------------------------------------------------------------------------

def residue_term(t: LogHomogeneousTerm, n: int, rule: SphereRule) -> complex:
    """int_M d^n atilde(0) dvol_M = n! * int_M A_n dvol_M.

    Jets are polynomials in z, so orders beyond the stored length are
    exactly zero.
    """
    if n < 0:
        raise ValueError("derivative order must be >= 0")
    A = t.jet_coefficient(n)
    if A is None:
        return 0.0 + 0.0j
    return math.factorial(n) * sphere_integral(A, rule)


def _angular_integrals(t: LogHomogeneousTerm, rule: SphereRule):
    """[int A_n dvol_M for each stored jet order]."""
    return [sphere_integral(A, rule) for A in t.angular_jet]


# --------------------------------------------------------------------------
# radial quadrature of remainders
# --------------------------------------------------------------------------

_PROBE_MAX_K = 17  # probe radii 2^0 .. 2^17
_GL_POINTS = 32


def _remainder_values(f, r: float, nodes: np.ndarray) -> np.ndarray:
    """Evaluate a remainder density at one radius on all sphere nodes."""
    try:
        out = np.asarray(f(r, nodes), dtype=complex)
        if out.shape == (nodes.shape[0],):
            return out
        if out.shape == ():
            return np.full(nodes.shape[0], complex(out))
    except (TypeError, ValueError, IndexError):
        pass
    return np.array([complex(f(r, nu)) for nu in nodes], dtype=complex)


def integrate_remainder_radial(f, rule: SphereRule, tol: float = 1e-12):
    """int_1^inf int_M f(r, nu) dvol_M dr for a remainder density f.

    Geometric Gauss-Legendre panels [2^k, 2^(k+1)] with a probed stopping
    radius; a fitted power tail is added past the last panel and its
    uncertainty is the reported tail bound.  Raises NonIntegrableError
    when the probes do not decay integrably.

    Returns (value, tail_bound).
    """
    nodes, weights = rule.nodes, rule.weights

    def g(r: float) -> complex:
        return pairwise_dot(weights, _remainder_values(f, r, nodes))

    def gabs(r: float) -> float:
        return float(np.dot(weights, np.abs(_remainder_values(f, r, nodes))))

    probes = []
    scale = 0.0
    stop_k = None
    for k in range(_PROBE_MAX_K + 1):
        a = gabs(2.0**k)
        probes.append(a)
        scale = max(scale, a)
        if k >= 2 and a <= tol * max(scale, 1e-300):
            stop_k = k
            break

    exhausted = stop_k is None
    if exhausted:
        stop_k = _PROBE_MAX_K
    R = 2.0**stop_k
    hi = probes[-1]
    lo = probes[-2] if len(probes) >= 2 else hi
    p = math.inf if hi <= 0.0 else math.log2(max(lo, 1e-300) / hi)
    if exhausted and not (p > 1.05):
        raise NonIntegrableError(
            f"remainder tail decays like r^-{p:.3f}: not integrable"
        )
    # power-model tail correction g(r) ~ g(R) (r/R)^(-p) past the last panel
    tail_corr = 0.0 + 0.0j
    tail_bound = 0.0
    if math.isfinite(p) and p > 1.05:
        tail_corr = g(R) * R / (p - 1.0)
        p_prev = p if len(probes) < 3 else math.log2(
            max(probes[-3], 1e-300) / max(lo, 1e-300))
        tail_bound = abs(tail_corr) * min(1.0, abs(p - p_prev) / max(p - 1.0, 0.1) + 0.05)

    total = 0.0 + 0.0j
    pieces = []
    for k in range(stop_k):
        x, w = gauss_legendre_panel(2.0**k, 2.0 ** (k + 1), _GL_POINTS)
        vals = np.array([g(r) for r in x])
        pieces.append(pairwise_dot(w, vals))
    total = pairwise_sum(pieces) + tail_corr
    return total, tail_bound


def integrate_unit_ball(U, rule: SphereRule, n_radial: int = 48) -> complex:
    """int_{B(0,1)} U(xi) d xi by an r = s^2 graded radial rule times the
    sphere rule; the substitution keeps integrable power singularities at
    the origin accurate."""
    N = rule.dim_ambient
    s, ws = gauss_legendre_panel(0.0, 1.0, n_radial)
    pieces = []
    for si, wi in zip(s, ws):
        r = si * si
        vals = eval_on_points(U, r * rule.nodes)
        jac = 2.0 * si * r ** (N - 1)
        pieces.append(wi * jac * pairwise_dot(rule.weights, vals))
    return pairwise_sum(pieces)


# --------------------------------------------------------------------------
# tau_0 jets (remainder + unit ball)
# --------------------------------------------------------------------------

def _tau0_jet(dist: GaugedDistribution, K: int, tol: float = 1e-12):
    """Taylor coefficients at 0 (orders 0..K) of the holomorphic part
    tau_0(z): remainder plus unit-ball contributions.  Pointwise jets are
    integrated by quadrature; precomputed integral jets add on top."""
    out = [0.0 + 0.0j] * (K + 1)
    if dist.remainder_integral_jet is not None:
        for n, v in enumerate(dist.remainder_integral_jet[: K + 1]):
            out[n] += complex(v)
    for n, Rn in enumerate(dist.remainder_jet[: K + 1]):
        val, _ = integrate_remainder_radial(Rn, dist.manifold, tol=tol)
        out[n] += val
    if dist.unit_ball_integral_jet is not None:
        for n, v in enumerate(dist.unit_ball_integral_jet[: K + 1]):
            out[n] += complex(v)
    for n, Un in enumerate(dist.unit_ball_jet[: K + 1]):
        out[n] += integrate_unit_ball(Un, dist.manifold)
    return out


# --------------------------------------------------------------------------
# the Laurent expansion
# --------------------------------------------------------------------------

def zeta_laurent(dist: GaugedDistribution, K: int = DEFAULT_TRUNC_POWERS) -> LaurentSeries:
    """Laurent expansion of zeta(alpha) about 0 through order K.

    Assembles, with dm = dim M and I_0 the critical index set:

    * principal part and on-diagonal orders from critical terms:
      sum_{i in I_0} sum_{n<=l_i} (-1)^(l_i+1) l_i! (int A_n) z^(n-l_i-1),
    * the holomorphic tau_0 jet (remainder + unit ball),
    * noncritical term weights, the z^n Taylor coefficient of c(z) res(z):
      sum_j (-1)^(l+j+1) ((l+j)!/j!) (int A_{n-j}) (dm+d+1)^-(l+j+1),
    * the critical correction (-1)^(l+1) l! (int A_{n+l+1}) at order n.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    dm = dist.dim_m
    crit = dist.critical_terms()
    min_order = -max((t.log_order + 1 for t in crit), default=0)
    coeffs = np.zeros(K - min_order + 1, dtype=complex)

    def add(order: int, value: complex):
        coeffs[order - min_order] += value

    for t in crit:
        l = t.log_order
        ang = _angular_integrals(t, dist.manifold)
        sign = (-1.0) ** (l + 1) * math.factorial(l)
        # orders n - l - 1 for n = 0..l
        for n in range(min(l, len(ang) - 1) + 1):
            add(n - l - 1, sign * ang[n])
        # holomorphic correction at order n uses A_{n+l+1}
        for n in range(0, K + 1):
            if n + l + 1 < len(ang):
                add(n, sign * ang[n + l + 1])

    for t in dist.noncritical_terms():
        l = t.log_order
        d = t.degree
        ang = _angular_integrals(t, dist.manifold)
        w = dm + d + 1.0
        for n in range(0, K + 1):
            acc = []
            for j in range(0, n + 1):
                if n - j >= len(ang):
                    continue
                acc.append(
                    (-1.0) ** (l + j + 1)
                    * math.factorial(l + j) / math.factorial(j)
                    * ang[n - j]
                    * w ** -(l + j + 1.0)
                )
            if acc:
                add(n, pairwise_sum(acc))

    for n, v in enumerate(_tau0_jet(dist, K)):
        add(n, v)

    return LaurentSeries(0.0, min_order, tuple(coeffs))


# --------------------------------------------------------------------------
# direct evaluation of the meromorphic extension
# --------------------------------------------------------------------------

def _res_polynomial(t: LogHomogeneousTerm, rule: SphereRule, z: complex) -> complex:
    """res alpha_i(z) = sum_n (int A_n) z^n (jets are polynomials)."""
    ang = _angular_integrals(t, rule)
    return pairwise_sum([a * z**n for n, a in enumerate(ang)])


def zeta_eval(dist: GaugedDistribution, z: complex) -> complex:
    """Value of the meromorphic extension at z:
    tau_0(z) + sum_i c_i(z) res alpha_i(z)."""
    z = complex(z)
    dm = dist.dim_m
    for t in dist.terms:
        if abs(dm + t.degree + z + 1.0) < POLE_GUARD:
            raise NearPoleError(
                f"zeta_eval within pole guard of term d={t.degree}, l={t.log_order}",
                location=z, order=t.log_order + 1,
            )
    pieces = []
    for t in dist.terms:
        c = radial_coefficient(t.degree, t.log_order, dm, z)
        pieces.append(c * _res_polynomial(t, dist.manifold, z))

    if dist.remainder_integral_jet is not None:
        pieces.append(pairwise_sum(
            [complex(v) * z**n for n, v in enumerate(dist.remainder_integral_jet)]
        ))
    for n, Rn in enumerate(dist.remainder_jet):
        val, _ = integrate_remainder_radial(Rn, dist.manifold)
        pieces.append(val * z**n)

    if dist.unit_ball_integral_jet is not None:
        pieces.append(pairwise_sum(
            [complex(v) * z**n for n, v in enumerate(dist.unit_ball_integral_jet)]
        ))
    for n, Un in enumerate(dist.unit_ball_jet):
        pieces.append(integrate_unit_ball(Un, dist.manifold) * z**n)
    return pairwise_sum(pieces)


def direct_integral_oracle(dist: GaugedDistribution, z: complex) -> complex:
    """Brute-force quadrature of the defining integral, valid only in the
    absolute-convergence region Re(z) < -dim M - 1 - sup Re(d_i).

    Used solely as an independent cross-check of :func:`zeta_eval`; it
    never touches the radial-coefficient formula.
    """
    z = complex(z)
    dm = dist.dim_m
    if dist.remainder_integral_jet is not None or dist.unit_ball_integral_jet is not None:
        raise ZetafioError("oracle needs pointwise jets, not precomputed integrals")
    if dist.terms:
        bound = -dm - 1.0 - max(t.degree.real for t in dist.terms)
        if z.real >= bound:
            raise ZetafioError(
                f"z = {z} outside the convergence region Re(z) < {bound}"
            )
    rule = dist.manifold
    ang_cache = [
        (t, [eval_on_points(A, rule.nodes) for A in t.angular_jet])
        for t in dist.terms
    ]

    def integrand(r: float, nodes: np.ndarray) -> np.ndarray:
        total = np.zeros(nodes.shape[0], dtype=complex)
        for t, angs in ang_cache:
            atilde = np.zeros(nodes.shape[0], dtype=complex)
            for n, av in enumerate(angs):
                atilde = atilde + av * z**n
            total += (
                r ** (dm + t.degree + z) * math.log(r) ** t.log_order * atilde
            )
        for n, Rn in enumerate(dist.remainder_jet):
            total += _remainder_values(Rn, r, nodes) * z**n
        return total

    val, _ = integrate_remainder_radial(integrand, rule)
    return val


# --------------------------------------------------------------------------
# gauge surgery
# --------------------------------------------------------------------------

def finite_part(dist: GaugedDistribution) -> GaugedDistribution:
    """fp_0: the distribution with all critical-degree terms removed."""
    return replace(dist, terms=dist.noncritical_terms())


def _log_jet_entry(base, n: int):
    fac = 1.0 / math.factorial(n)

    def entry(r, nodes):
        return base(r, nodes) * math.log(r) ** n * fac

    return entry


def _log_ball_entry(base, n: int):
    fac = 1.0 / math.factorial(n)

    def entry(xi):
        pts = np.atleast_2d(np.asarray(xi, dtype=float))
        vals = eval_on_points(base, pts)
        vals = vals * np.log(np.linalg.norm(pts, axis=1)) ** n * fac
        return vals if np.asarray(xi).ndim > 1 else complex(vals[0])

    return entry


def m_gauge(dist: GaugedDistribution, jet_len: int | None = None) -> GaugedDistribution:
    """The Mellin gauge: angular parts become z-independent (jets truncate
    to order 0) and the remainder/ball gauges become r^z * (order-0 part),
    i.e. R_n = R_0 (ln r)^n / n!."""
    if dist.remainder_integral_jet is not None or dist.unit_ball_integral_jet is not None:
        raise ZetafioError(
            "M-gauge needs pointwise jets; precomputed integral jets carry "
            "no radial structure to re-gauge"
        )
    K = jet_len if jet_len is not None else max(
        len(dist.remainder_jet), len(dist.unit_ball_jet), DEFAULT_TRUNC_POWERS + 1
    )
    terms = tuple(
        LogHomogeneousTerm(t.degree, t.log_order, (t.angular_jet[0],))
        for t in dist.terms
    )
    remainder = ()
    if dist.remainder_jet:
        R0 = dist.remainder_jet[0]
        remainder = tuple(_log_jet_entry(R0, n) for n in range(K))
    ball = ()
    if dist.unit_ball_jet:
        U0 = dist.unit_ball_jet[0]
        ball = tuple(_log_ball_entry(U0, n) for n in range(K))
    return replace(dist, terms=terms, remainder_jet=remainder, unit_ball_jet=ball)


def zeta_determinant(dist: GaugedDistribution) -> complex:
    """exp(zeta(alpha)'(0)); requires zeta holomorphic at zero."""
    series = zeta_laurent(dist, K=2).normalize()
    if series.min_order < 0:
        raise PoleError("zeta not holomorphic at zero", location=0j,
                        order=-series.min_order)
    return np.exp(series.coefficient(1))
