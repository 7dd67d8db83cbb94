"""Fourier integral operator traces.

A symbol is a phase theta(x, y, xi) (homogeneous of degree 1 in xi) plus
an amplitude given as log-homogeneous terms and an integrable remainder.
On the diagonal the trace integral reduces to a gauged
poly-log-homogeneous distribution over S^(N-1), from which the full
Laurent expansion, the residue trace, and the generalized
Kontsevich-Vishik trace follow.

Routing on the diagonal:

* terms whose diagonal phase vanishes become log-homogeneous terms; their
  unit-ball content is the exact meromorphic extension of the radial
  integral over (0, 1) (the mollified value whenever the amplitude is
  singular at the origin);
* lattice copies (kernels summed over gamma in Gamma) carry oscillatory
  diagonal phases -<gamma, xi>.  Schwartz/integrable remainder content
  goes to the remainder jets by quadrature; for N = 1 homogeneous terms
  the full-line Fourier transforms are resummed in closed form through
  the Riemann zeta;
* anything else is referred to stationary-phase treatment.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._numeric import (
    eval_on_points,
    lattice_points,
    pairwise_dot,
    pairwise_sum,
    taylor_jet_contour,
)
from .distribution import (
    CRITICAL_TOL,
    GaugedDistribution,
    LogHomogeneousTerm,
    radial_coefficient,
    unit_interval_radial_coefficient,
    zeta_laurent,
)
from .errors import (
    CriticalTermError,
    ExtrapolationError,
    StatPhaseRequiredError,
    ZetafioError,
)
from .laurent import DEFAULT_TRUNC_POWERS, LaurentSeries
from .specfun import fourier_abs_power, gamma, riemann_zeta
from .sphere import build_rule, sphere_integral
from .statphase import Phase, as_phase

_PHASE_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class AmplitudeTerm:
    """One log-homogeneous amplitude term.

    ``angular_jet`` holds callables A_n(x, y, nu) on the sphere with
    A_n = d^n atilde(0) / n!; the full term is
    |xi|^(d+z) (ln|xi|)^l atilde(z)(x, y, xi/|xi|).
    """

    degree: complex
    log_order: int
    angular_jet: tuple

    def __post_init__(self):
        object.__setattr__(self, "degree", complex(self.degree))
        object.__setattr__(self, "angular_jet", tuple(self.angular_jet))


@dataclass(frozen=True)
class FioSymbol:
    """Phase/amplitude data of a gauged Fourier integral operator family.

    ``lattice_basis``/``lattice_radius`` describe kernels summed over a
    lattice: the represented kernel is the sum over lattice points gamma
    of copies whose phase is shifted by -<gamma, xi>.  Base-space
    integration is exact (volume times the diagonal value) unless a base
    quadrature (points, weights) is supplied.
    """

    base_dim: int
    freq_dim: int
    base_volume: float
    phase: Phase
    amplitude_terms: tuple = ()
    amplitude_remainder: tuple = ()
    lattice_basis: np.ndarray | None = None
    lattice_radius: float = 0.0
    base_points: np.ndarray | None = None
    base_weights: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "phase", as_phase(self.phase))
        object.__setattr__(self, "amplitude_terms", tuple(self.amplitude_terms))
        object.__setattr__(self, "amplitude_remainder", tuple(self.amplitude_remainder))

    def base_x0(self) -> np.ndarray:
        return np.zeros(self.base_dim)


def validate_symbol(sym: FioSymbol, rtol: float = 1e-10) -> None:
    """Check phase homogeneity of degree 1 in xi by sampled scaling at
    lambda in {2, 3.7}."""
    rng = np.random.default_rng(7)
    x0 = sym.base_x0()
    for _ in range(4):
        xi = rng.normal(size=sym.freq_dim)
        xi /= np.linalg.norm(xi)
        th = float(sym.phase(x0, x0, xi))
        for lam in (2.0, 3.7):
            tl = float(sym.phase(x0, x0, lam * xi))
            if abs(tl - lam * th) > rtol * lam * max(abs(th), 1.0):
                raise ZetafioError("phase is not homogeneous of degree 1 in xi")


# --------------------------------------------------------------------------
# base-space integration and lattice handling
# --------------------------------------------------------------------------

def _base_points_weights(sym: FioSymbol, at_point=None):
    """Base quadrature as (points, weights).  With no quadrature supplied
    the diagonal data are x-independent and integration is exact:
    vol_X times the value at a representative point."""
    if at_point is not None:
        return [np.asarray(at_point, dtype=float)], np.array([1.0])
    if sym.base_points is not None:
        return list(np.atleast_2d(sym.base_points)), np.asarray(sym.base_weights, dtype=float)
    return [sym.base_x0()], np.array([sym.base_volume])


def _lattice_gammas(sym: FioSymbol) -> np.ndarray:
    if sym.lattice_basis is None:
        return np.zeros((1, sym.freq_dim))
    pts = lattice_points(sym.lattice_basis, sym.lattice_radius)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def _phase_values(phase: Phase, x, nodes: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(phase(x, x, nodes), dtype=float)
        if out.shape == (nodes.shape[0],):
            return out
    except Exception:
        pass
    return np.array([float(phase(x, x, nu)) for nu in nodes], dtype=float)


def _diag_phase_is_zero(phase: Phase, xs, nodes: np.ndarray) -> bool:
    return all(
        float(np.max(np.abs(_phase_values(phase, x, nodes)))) < _PHASE_ZERO_TOL
        for x in xs
    )


def _xint_angular(A, xs, ws, phase: Phase | None = None, gamma=None):
    """X-integrated angular function nu -> sum_x w_x e^(i theta) A(x,x,nu)."""

    def f(pts):
        pts2 = np.atleast_2d(np.asarray(pts, dtype=float))
        acc = np.zeros(pts2.shape[0], dtype=complex)
        for x, w in zip(xs, ws):
            vals = eval_on_points(lambda nu: A(x, x, nu), pts2)
            if phase is not None:
                phi = _phase_values(phase, x, pts2)
                if gamma is not None:
                    phi = phi - pts2 @ np.asarray(gamma, dtype=float)
                vals = vals * np.exp(1j * phi)
            acc = acc + w * vals
        return acc if np.asarray(pts).ndim > 1 else acc[0]

    return f


# --------------------------------------------------------------------------
# closed forms for singular / lattice content
# --------------------------------------------------------------------------

def _res_u_product(res_jet, d: complex, l: int, dm: int):
    """res(z) * int_0^1 r^(dm+d+z) (ln r)^l dr as a callable of z (the
    meromorphic extension; singular at critical degrees)."""

    def f(z: complex) -> complex:
        res = pairwise_sum([c * z**n for n, c in enumerate(res_jet)])
        return res * unit_interval_radial_coefficient(d, l, dm, z)

    return f


def _lattice_fourier_sum(d: complex, even_jet, L: float, kmax: int,
                         n_direct: int = 8):
    """z |-> sum over k != 0 of the full-line Fourier transform of
    |xi|^(d+z) against the even angular part at frequencies L k:

        sum_{k!=0} int e^(-i L k xi) |xi|^(d+z) dxi
            = 4 sin(-b pi/2) Gamma(b+1) L^(-b-1) zeta_R(b+1),  b = d+z,

    evaluated as a short direct sum of Fourier transforms plus the
    Riemann-zeta tail (the +-k pairing gives the factor 2 per k)."""
    n_direct = min(n_direct, kmax)

    def f(z: complex) -> complex:
        beta = d + z
        even = pairwise_sum([c * z**n for n, c in enumerate(even_jet)])
        direct = [2.0 * fourier_abs_power(beta, L * k / (2.0 * math.pi))
                  for k in range(1, n_direct + 1)]
        pref = 2.0 * cmath.sin(-beta * math.pi / 2.0) * gamma(beta + 1.0)
        partial = pairwise_sum([complex(k) ** (-beta - 1.0)
                                for k in range(1, n_direct + 1)])
        tail = 2.0 * pref * L ** (-beta - 1.0) * (riemann_zeta(beta + 1.0) - partial)
        return even * (pairwise_sum(direct) + tail)

    return f


def _holomorphic_jet(f, d: complex, order: int):
    """Taylor jet at 0 of a closed-form z-function whose potential
    singularities sit at z = -(1+d) - m (gamma factors) and z = -d (zeta
    pole); the contour radius keeps clear of them.  Candidates below 1e-9
    correspond to exactly cancelling pole pairs and are ignored."""
    cands = [abs(1.0 + d + m) for m in range(0, 8)] + [abs(d)]
    cands = [c for c in cands if c > 1e-9]
    radius = min(0.1, 0.45 * min(cands)) if cands else 0.1
    return taylor_jet_contour(f, order, radius=radius, samples=96)


# --------------------------------------------------------------------------
# reduction to a gauged distribution
# --------------------------------------------------------------------------

def _sum_closures(closures):
    if len(closures) == 1:
        return closures[0]

    def combined(*args):
        acc = closures[0](*args)
        for c in closures[1:]:
            acc = acc + c(*args)
        return acc

    return combined


def _collect_jet(fn_dict):
    if not fn_dict:
        return ()
    top = max(fn_dict) + 1
    out = []
    for n in range(top):
        closures = fn_dict.get(n, [])
        if closures:
            out.append(_sum_closures(closures))
        else:
            out.append(lambda *args: 0.0)
    return tuple(out)


def _remainder_tail_closure(sym: FioSymbol, a0, gammas, xs, ws, dm):
    phase = sym.phase
    gs = np.atleast_2d(np.asarray(gammas, dtype=float))

    def R(r, nodes):
        acc = np.zeros(nodes.shape[0], dtype=complex)
        for x, w in zip(xs, ws):
            vals = eval_on_points(lambda nu: a0(x, x, r * nu), nodes)
            base_phi = _phase_values(phase, x, nodes)
            osc = np.zeros(nodes.shape[0], dtype=complex)
            for g in gs:
                osc = osc + np.exp(1j * r * (base_phi - nodes @ g))
            acc = acc + w * vals * osc
        return acc * r**dm

    return R


def _remainder_ball_closure(sym: FioSymbol, a0, gammas, xs, ws):
    phase = sym.phase
    gs = np.atleast_2d(np.asarray(gammas, dtype=float))

    def U(pts):
        pts2 = np.atleast_2d(np.asarray(pts, dtype=float))
        norms = np.linalg.norm(pts2, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        acc = np.zeros(pts2.shape[0], dtype=complex)
        for x, w in zip(xs, ws):
            vals = eval_on_points(lambda xi: a0(x, x, xi), pts2)
            # theta homogeneous of degree 1: theta(x,x,xi) = |xi| theta(x,x,xi/|xi|)
            base_phi = norms * _phase_values(phase, x, pts2 / safe[:, None])
            osc = np.zeros(pts2.shape[0], dtype=complex)
            for g in gs:
                osc = osc + np.exp(1j * (base_phi - pts2 @ g))
            acc = acc + w * vals * osc
        return acc if np.asarray(pts).ndim > 1 else acc[0]

    return U


def trace_distribution(sym: FioSymbol, level: int = 5, at_point=None,
                       jet_len: int | None = None) -> GaugedDistribution:
    """Reduce the diagonal trace integral of the symbol to a gauged
    poly-log-homogeneous distribution over S^(N-1).

    With ``at_point`` the base integration is replaced by evaluation at
    that point (used for pointwise densities).
    """
    N = sym.freq_dim
    dm = N - 1
    rule = build_rule(N, level)
    xs, ws = _base_points_weights(sym, at_point=at_point)
    gammas = _lattice_gammas(sym)
    osc_gammas = [g for g in gammas if np.linalg.norm(g) > 1e-12]
    K_jet = jet_len if jet_len is not None else DEFAULT_TRUNC_POWERS + 1

    diag_zero = _diag_phase_is_zero(sym.phase, xs, rule.nodes)
    if sym.amplitude_terms and not diag_zero:
        raise StatPhaseRequiredError(
            "amplitude terms with nonvanishing diagonal base phase require "
            "stationary-phase treatment"
        )

    terms_out = []
    rem_fns: dict = {}
    ball_fns: dict = {}
    rem_int_jet = np.zeros(K_jet, dtype=complex)
    ball_int_jet = np.zeros(K_jet, dtype=complex)
    have_rem_int = False
    have_ball_int = False

    for term in sym.amplitude_terms:
        d, l = term.degree, term.log_order
        ang_fns = tuple(_xint_angular(A, xs, ws) for A in term.angular_jet)
        res_jet = [pairwise_dot(rule.weights, eval_on_points(f, rule.nodes))
                   for f in ang_fns]
        is_critical = abs(d + dm + 1.0) <= CRITICAL_TOL
        terms_out.append(LogHomogeneousTerm(d, l, ang_fns))

        if osc_gammas:
            if N != 1:
                raise StatPhaseRequiredError(
                    "oscillatory lattice copies of homogeneous terms with "
                    "N > 1 require stationary-phase treatment"
                )
            if l != 0:
                raise StatPhaseRequiredError(
                    "the lattice closed form is implemented for log order 0"
                )
            vals = [eval_on_points(f, rule.nodes) for f in ang_fns]
            even = [complex(0.5 * (v[0] + v[1])) for v in vals]
            odd = max(abs(0.5 * (v[0] - v[1])) for v in vals)
            if odd > 1e-12 * max(max(abs(e) for e in even), 1e-300):
                raise StatPhaseRequiredError(
                    "odd angular content is outside the lattice closed form"
                )
            freqs = sorted(abs(float(g[0])) for g in osc_gammas if g[0] > 0)
            L = freqs[0]
            kmax = int(round(freqs[-1] / L))
            E = _lattice_fourier_sum(d, even, L, kmax)
            ru = _res_u_product(res_jet, d, l, dm)
            jet = _holomorphic_jet(lambda z: E(z) + ru(z), d, K_jet - 1)
            rem_int_jet += np.asarray(jet)
            have_rem_int = True
        elif not is_critical:
            # unit-ball content: meromorphic extension of res(z) int_0^1;
            # for a critical term without compensating lattice content the
            # extension is singular and the pole stays on the term alone
            ru = _res_u_product(res_jet, d, l, dm)
            jet = _holomorphic_jet(ru, d, K_jet - 1)
            ball_int_jet += np.asarray(jet)
            have_ball_int = True

    for n, a0 in enumerate(sym.amplitude_remainder):
        rem_fns.setdefault(n, []).append(
            _remainder_tail_closure(sym, a0, gammas, xs, ws, dm))
        ball_fns.setdefault(n, []).append(
            _remainder_ball_closure(sym, a0, gammas, xs, ws))

    return GaugedDistribution(
        manifold=rule,
        terms=tuple(terms_out),
        remainder_jet=_collect_jet(rem_fns),
        unit_ball_jet=_collect_jet(ball_fns),
        remainder_integral_jet=tuple(rem_int_jet) if have_rem_int else None,
        unit_ball_integral_jet=tuple(ball_int_jet) if have_ball_int else None,
    )


# --------------------------------------------------------------------------
# traces
# --------------------------------------------------------------------------

def zeta_laurent_fio(sym: FioSymbol, K: int = DEFAULT_TRUNC_POWERS,
                     level: int = 5) -> LaurentSeries:
    """Laurent expansion about 0 of the zeta function of the symbol."""
    return zeta_laurent(trace_distribution(sym, level=level, jet_len=K + 1), K=K)


def residue_trace(sym: FioSymbol, level: int = 5) -> complex:
    """-sum over critical terms of the diagonal sphere integrals
    int_X int_{S^(N-1)} e^(i theta) atilde(0); requires a poly-homogeneous
    amplitude (all log orders zero)."""
    if any(t.log_order != 0 for t in sym.amplitude_terms):
        raise ZetafioError(
            "log orders present: use extract_leading on the full Laurent "
            "series instead of residue_trace"
        )
    N = sym.freq_dim
    rule = build_rule(N, level)
    xs, ws = _base_points_weights(sym)
    total = 0.0 + 0.0j
    for term in sym.amplitude_terms:
        if abs(term.degree + N) > CRITICAL_TOL:
            continue
        f = _xint_angular(term.angular_jet[0], xs, ws, phase=sym.phase)
        total += sphere_integral(f, rule)
    return -total


def kv_density(sym: FioSymbol, x, level: int = 5) -> complex:
    """Pointwise generalized Kontsevich-Vishik density at the base point
    x: unit-ball integral + remainder radial tail + weighted spherical
    integrals of the noncritical terms.  Requires I_0 to be empty."""
    d = trace_distribution(sym, level=level, at_point=x, jet_len=1)
    if d.critical_terms():
        raise CriticalTermError(
            "critical-degree terms obstruct the Kontsevich-Vishik density"
        )
    return zeta_laurent(d, K=0).coefficient(0)


def kv_trace(sym: FioSymbol, level: int = 5) -> complex:
    """Generalized Kontsevich-Vishik trace: the base integral of the
    density; equals the constant Laurent coefficient when I_0 is empty."""
    if sym.base_points is not None:
        ws = np.asarray(sym.base_weights, dtype=float)
        vals = [kv_density(sym, x, level=level) for x in np.atleast_2d(sym.base_points)]
        return pairwise_dot(ws, np.array(vals))
    return sym.base_volume * kv_density(sym, sym.base_x0(), level=level)


def kv_trace_vanishing_phase(sym: FioSymbol, n0: int, level: int = 5) -> complex:
    """Kontsevich-Vishik trace in the vanishing-diagonal-phase form:

        int_X int [ a - sum_{i <= n0} a_i ]  over frequency space,

    with the first n0 amplitude terms removed.  Every retained term must
    have Re(d) < -N; each then contributes its regularized full-radial
    integral, which is an exact cancellation of the (0,1) and (1,inf)
    closed forms.  The remainder is integrated numerically over the ball
    and the radial tail.
    """
    N = sym.freq_dim
    dm = N - 1
    rule = build_rule(N, level)
    xs, ws = _base_points_weights(sym)
    if not _diag_phase_is_zero(sym.phase, xs, rule.nodes):
        raise ZetafioError("kv_trace_vanishing_phase requires a vanishing "
                           "diagonal phase")
    kept = sym.amplitude_terms[n0:]
    for t in kept:
        if t.degree.real >= -N:
            raise ZetafioError(
                f"term with Re(d) = {t.degree.real} >= -N must be below the "
                f"cutoff index"
            )
    pieces = []
    for t in kept:
        f = _xint_angular(t.angular_jet[0], xs, ws)
        res0 = sphere_integral(f, rule)
        closed = (unit_interval_radial_coefficient(t.degree, t.log_order, dm, 0.0)
                  + radial_coefficient(t.degree, t.log_order, dm, 0.0))
        pieces.append(res0 * closed)

    d = trace_distribution(sym, level=level, jet_len=1)
    from .distribution import integrate_remainder_radial, integrate_unit_ball
    if d.remainder_jet:
        val, _ = integrate_remainder_radial(d.remainder_jet[0], rule)
        pieces.append(val)
    if d.unit_ball_jet:
        pieces.append(integrate_unit_ball(d.unit_ball_jet[0], rule))
    return pairwise_sum(pieces)


# --------------------------------------------------------------------------
# mollification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MollifiedFamily:
    """A zeta family sampled along a decreasing mollification ladder."""

    h_sequence: tuple
    values: tuple
    target: complex
    diagnostics: dict

    def __post_init__(self):
        hs = tuple(float(h) for h in self.h_sequence)
        if any(h2 >= h1 for h1, h2 in zip(hs, hs[1:])) or any(h <= 0 for h in hs):
            raise ValueError("h_sequence must be strictly decreasing and positive")
        object.__setattr__(self, "h_sequence", hs)
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))


def mollified_radial_coefficient(d: complex, l: int, dimM: int, z: complex,
                                 h: float) -> complex:
    """int_0^1 (h+r)^(dimM+d+z) (ln(h+r))^l dr by adaptive quadrature; the
    integrand is regular for h > 0."""
    if h <= 0:
        raise ValueError("h must be > 0")
    w = dimM + complex(d) + complex(z)

    def integrand(r, part):
        v = cmath.exp(w * math.log(h + r)) * math.log(h + r) ** l
        return v.real if part == 0 else v.imag

    re, _ = quad(integrand, 0.0, 1.0, args=(0,), limit=200, epsabs=1e-13, epsrel=1e-12)
    im, _ = quad(integrand, 0.0, 1.0, args=(1,), limit=200, epsabs=1e-13, epsrel=1e-12)
    return complex(re, im)


def z_condition_proxy(d: complex, l: int, z: complex, h: float) -> float:
    """Boundedness proxy for the mollification hypothesis:
    l * sum_{j<=l} |zeta_H(l-j-d-z; h) - zeta_H(l-j-d-z; 1+h)|."""
    from .specfun import hurwitz_zeta

    if l == 0:
        return 0.0
    acc = 0.0
    for j in range(l + 1):
        s = l - j - d - z
        acc += abs(hurwitz_zeta(s, h) - hurwitz_zeta(s, 1.0 + h))
    return l * acc


def _detect_order(deltas, ratios):
    """Leading error order from consecutive difference ratios."""
    ps = []
    for i in range(len(deltas) - 1):
        if abs(deltas[i + 1]) < 1e-300:
            continue
        ps.append(math.log(abs(deltas[i] / deltas[i + 1])) / math.log(ratios[i]))
    if not ps:
        raise ExtrapolationError("differences vanished; nothing to extrapolate")
    return ps


def mollification_limit(h_sequence, values, exponents=None,
                        known_terms=None) -> MollifiedFamily:
    """Extrapolate zeta(alpha_h) to h -> 0.

    ``known_terms`` is a list of (exponent, coefficient) pairs of
    analytically known contributions c h^p subtracted from the values
    before extrapolation (e.g. the explicit zero-mode h^(z+alpha) of a
    shifted spectral family, whose raw values need not converge at all).

    With ``exponents`` (known error-exponent ladder p_1 < p_2 < ...) the
    limit solves the collocation system value(h) = L + sum c_k h^(p_k).
    Otherwise iterated Richardson with the order estimated from
    consecutive difference ratios is used; a non-monotone or oscillatory
    table raises ExtrapolationError.  Diagnostics carry the table and the
    estimated orders.
    """
    hs = [float(h) for h in h_sequence]
    vals = [complex(v) for v in values]
    if len(hs) != len(vals) or len(hs) < 4:
        raise ValueError("need at least 4 (h, value) pairs")
    if any(h2 >= h1 for h1, h2 in zip(hs, hs[1:])):
        raise ValueError("h_sequence must be strictly decreasing")

    diagnostics: dict = {"h": list(hs)}
    if known_terms:
        vals = [v - pairwise_sum([complex(c) * h**float(p) for p, c in known_terms])
                for h, v in zip(hs, vals)]
        diagnostics["known_terms"] = [(float(p), complex(c)) for p, c in known_terms]

    if exponents is not None:
        ps = [float(p) for p in exponents]
        if len(ps) + 1 > len(hs):
            raise ValueError("too many exponents for the available h values")
        n = len(ps) + 1
        A = np.ones((len(hs), n), dtype=float)
        for k, p in enumerate(ps):
            A[:, k + 1] = np.power(hs, p)
        coeff, *_ = np.linalg.lstsq(A, np.array(vals), rcond=None)
        target = complex(coeff[0])
        # drop the coarsest h and re-solve as an error estimate
        if len(hs) > n:
            coeff2, *_ = np.linalg.lstsq(A[1:], np.array(vals[1:]), rcond=None)
        else:
            A2 = A[1:, : n - 1]
            coeff2, *_ = np.linalg.lstsq(A2, np.array(vals[1:]), rcond=None)
        est = abs(target - complex(coeff2[0]))
        diagnostics.update({
            "mode": "collocation",
            "exponents": ps,
            "coefficients": [complex(c) for c in coeff],
            "error_estimate": est,
        })
        return MollifiedFamily(tuple(hs), tuple(vals), target, diagnostics)

    ratios = [hs[i] / hs[i + 1] for i in range(len(hs) - 1)]
    first_deltas = [abs(vals[i] - vals[i + 1]) for i in range(len(vals) - 1)]
    scale = max(max(abs(v) for v in vals), 1e-300)
    if max(first_deltas) <= 1e-14 * scale:
        diagnostics.update({"mode": "constant", "orders": []})
        return MollifiedFamily(tuple(hs), tuple(values), vals[-1], diagnostics)
    if all(d2 >= d1 for d1, d2 in zip(first_deltas, first_deltas[1:])):
        raise ExtrapolationError(
            "values do not converge: successive differences are non-decreasing"
        )
    table = [list(vals)]
    orders = []
    col = list(vals)
    level = 0
    while len(col) > 1:
        deltas = [col[i] - col[i + 1] for i in range(len(col) - 1)]
        if len(deltas) >= 2:
            ps = _detect_order(np.array(deltas), ratios)
            signs = [p for p in ps]
            p = float(np.median(signs))
            spread = float(np.max(signs) - np.min(signs)) if len(signs) > 1 else 0.0
            if spread > max(0.75, 0.5 * abs(p)):
                raise ExtrapolationError(
                    f"oscillatory Richardson table: estimated orders {signs}"
                )
        else:
            p = orders[-1] + 1.0 if orders else 1.0
        orders.append(p)
        nxt = []
        for i in range(len(col) - 1):
            rho = ratios[i + level] ** p
            nxt.append(col[i + 1] + (col[i + 1] - col[i]) / (rho - 1.0))
        table.append(nxt)
        col = nxt
        level += 1
    target = col[0]
    diagnostics.update({
        "mode": "richardson",
        "orders": orders,
        "table": [[complex(v) for v in row] for row in table],
    })
    return MollifiedFamily(tuple(hs), tuple(vals), target, diagnostics)
