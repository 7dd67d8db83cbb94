"""zetafio: zeta-regularized traces of Fourier integral operator symbols.

The package computes zeta functions of gauged poly-log-homogeneous
distributions, their full Laurent expansions, residue traces, and the
generalized Kontsevich-Vishik trace, with exactly solvable flat-torus and
circle models (heat trace, fractional Laplacians, wave trace) as a
validation suite backed by independent spectral oracles.
"""

from .laurent import LaurentSeries, extract_leading, series_add, series_mul
from .sphere import SphereRule, build_rule, gl_pullback_check, sphere_integral
from .distribution import (
    GaugedDistribution,
    LogHomogeneousTerm,
    direct_integral_oracle,
    finite_part,
    m_gauge,
    radial_coefficient,
    residue_term,
    zeta_determinant,
    zeta_eval,
    zeta_laurent,
)
from .fio import (
    AmplitudeTerm,
    FioSymbol,
    MollifiedFamily,
    kv_density,
    kv_trace,
    kv_trace_vanishing_phase,
    mollification_limit,
    mollified_radial_coefficient,
    residue_trace,
    trace_distribution,
    zeta_laurent_fio,
)
from .statphase import (
    Phase,
    StationaryPointData,
    find_stationary_points,
    g_coefficient,
    h_coefficient,
    hilbert_schmidt_check,
    spherical_phase_integral,
    wave_trace_flat_torus,
)
from .models import LatticeSpec

__all__ = [
    "LaurentSeries", "series_add", "series_mul", "extract_leading",
    "SphereRule", "build_rule", "sphere_integral", "gl_pullback_check",
    "LogHomogeneousTerm", "GaugedDistribution", "radial_coefficient",
    "residue_term", "zeta_laurent", "zeta_eval", "direct_integral_oracle",
    "finite_part", "m_gauge", "zeta_determinant",
    "AmplitudeTerm", "FioSymbol", "MollifiedFamily", "trace_distribution",
    "zeta_laurent_fio", "residue_trace", "kv_density", "kv_trace",
    "kv_trace_vanishing_phase", "mollified_radial_coefficient",
    "mollification_limit",
    "Phase", "StationaryPointData", "find_stationary_points",
    "h_coefficient", "g_coefficient", "spherical_phase_integral",
    "hilbert_schmidt_check", "wave_trace_flat_torus",
    "LatticeSpec",
]

__version__ = "0.1.0"
