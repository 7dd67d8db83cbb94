"""Model tests: every closed form against its independent spectral
oracle."""

import cmath
import math

import numpy as np
import pytest

from zetafio.errors import PoleError, ZetafioError
from zetafio.fio import mollification_limit
from zetafio.models import (
    LatticeSpec,
    abel_wave_oracle,
    circle_fractional_zeta,
    circle_fractional_zeta_derivative,
    eta_series_zeta,
    eta_series_zeta_derivative,
    heat_gaussian_tail_bound,
    heat_trace_closed_form,
    heat_trace_via_zeta,
    shifted_fractional_zeta,
    shifted_fractional_zeta_pipeline,
    shifted_lattice_sum,
    theta_sum,
)


class TestLatticeSpec:
    def test_point_count_complete(self):
        lat = LatticeSpec(basis=np.eye(2), truncation_radius=10.0)
        pts = lat.points()
        # ball area pi * 100 ~ 314 points
        assert 280 <= pts.shape[0] <= 350

    def test_singular_basis_rejected(self):
        with pytest.raises(ValueError):
            LatticeSpec(basis=np.zeros((2, 2)), truncation_radius=1.0)


class TestEtaOracle:
    @pytest.mark.parametrize("s,value", [
        (2.0, math.pi**2 / 6.0),
        (-1.0, -1.0 / 12.0),
        (0.0, -0.5),
        (4.0, math.pi**4 / 90.0),
    ])
    def test_known_values(self, s, value):
        assert abs(eta_series_zeta(s) - value) < 1e-10


class TestHeatTrace:
    LAT1 = LatticeSpec(basis=np.array([[2.0 * math.pi]]), truncation_radius=40.0)
    LAT2 = LatticeSpec(basis=2.0 * math.pi * np.eye(2), truncation_radius=40.0)

    def test_theta_identity_n1(self):
        # closed form equals the spectral theta sum (Poisson summation)
        for t in (0.5, 1.0, 2.0):
            cf = heat_trace_closed_form(t, self.LAT1, 1)
            th = theta_sum(t, self.LAT1)
            assert abs(cf - th) < 1e-10 * th

    def test_value_n1(self):
        # sqrt(pi) * sum_n e^(-pi^2 n^2) evaluated directly
        direct = math.sqrt(math.pi) * sum(
            math.exp(-math.pi**2 * n * n) for n in range(-6, 7))
        assert abs(heat_trace_closed_form(1.0, self.LAT1, 1) - direct) < 1e-12

    def test_short_time_limit(self):
        # all gamma != 0 terms vanish as t -> 0 and the gamma = 0 term
        # vol / (4 pi t)^(N/2) dominates (the Weyl asymptotic)
        t = 1e-3
        v = heat_trace_closed_form(t, self.LAT1, 1)
        leading = self.LAT1.cell_volume / (4.0 * math.pi * t) ** 0.5
        assert abs(v - leading) / leading < 1e-12

    def test_pipeline_three_ways(self):
        for N, lat in ((1, self.LAT1), (2, self.LAT2)):
            for t in (0.5, 1.0, 2.0):
                a = complex(heat_trace_via_zeta(t, lat, N)).real
                b = heat_trace_closed_form(t, lat, N)
                c = theta_sum(t, lat)
                m = max(abs(a), abs(b), abs(c))
                assert abs(a - b) / m < 1e-6
                assert abs(b - c) / m < 1e-6

    def test_rapid_decay_agreement(self):
        a = complex(heat_trace_via_zeta(4.0, self.LAT1, 1)).real
        b = heat_trace_closed_form(4.0, self.LAT1, 1)
        assert abs(a - b) / b < 1e-8

    def test_no_principal_part(self):
        from zetafio.fio import zeta_laurent_fio
        from zetafio.models import heat_symbol

        s = zeta_laurent_fio(heat_symbol(1.0, self.LAT1, 1), K=1, level=1)
        assert s.min_order == 0

    def test_tail_bound_reported(self):
        assert heat_gaussian_tail_bound(1.0, self.LAT1, 1) < 1e-60


class TestCircleFractional:
    def test_grid_vs_oracle(self):
        alphas = (-0.75, -0.5, -0.25, 0.5, 1.0)
        zs = (0.0, 0.1, -0.2, 0.3j, 0.1 - 0.2j)
        worst = 0.0
        for a in alphas:
            for z in zs:
                v = circle_fractional_zeta(a, z)
                o = 2.0 * eta_series_zeta(-complex(z) - a)
                worst = max(worst, abs(v - o) / max(abs(o), 1e-3))
        assert worst < 1e-8

    def test_residue_limit(self):
        probes = [abs(z * circle_fractional_zeta(-1.0, z) + 2.0)
                  for z in (1e-2, 1e-3, 1e-4)]
        assert probes[0] > probes[1] > probes[2]
        assert probes[-1] < 2e-4

    def test_derivative_identity(self):
        for alpha in (-0.5, -0.25):
            for k in (1, 2):
                v = circle_fractional_zeta_derivative(alpha, k)
                o = (-1.0) ** k * 2.0 * eta_series_zeta_derivative(k, -alpha)
                assert abs(v - o) < 1e-5

    def test_second_derivative_quarter(self):
        v = circle_fractional_zeta_derivative(-0.25, 2)
        o = 2.0 * eta_series_zeta_derivative(2, 0.25)
        assert abs(v - o) < 1e-4


class TestShiftedFractional:
    def test_residue_for_all_h(self):
        for h in (0.2, 0.7, 1.0):
            z = 1e-7
            v = shifted_fractional_zeta(-1.0, h, z)
            assert abs(z * v + 2.0) < 1e-5

    def test_direct_sum_agreement(self):
        closed = shifted_fractional_zeta(-3.0, 0.5, 0.0)
        direct = shifted_lattice_sum(-3.0, 0.5, 0.0)
        assert abs(closed - direct) / abs(closed) < 1e-10

    def test_integer_alpha_regular_at_zero(self):
        # binomial coefficient (alpha choose alpha+1) = 0: no critical term
        v = shifted_fractional_zeta(1.0, 0.5, 0.0)
        assert np.isfinite(v.real)
        # and the value moves smoothly through z = 0
        v2 = shifted_fractional_zeta(1.0, 0.5, 1e-6)
        assert abs(v - v2) < 1e-4

    def test_pipeline_binomial_route(self):
        for alpha, h in ((-0.5, 0.4), (0.5, 0.3), (-2.0, 0.5)):
            closed = shifted_fractional_zeta(alpha, h, 0.1)
            pipe = shifted_fractional_zeta_pipeline(alpha, h, 0.1)
            assert abs(closed - pipe) / abs(closed) < 1e-9

    def test_pipeline_truncation_bound_enforced(self):
        with pytest.raises(ZetafioError):
            shifted_fractional_zeta_pipeline(-0.5, 1.0, 0.0, k_max=6)

    def test_mollification_to_circle(self):
        hs = [0.2, 0.1, 0.05, 0.025]
        for alpha in (-0.5, 0.5):
            vals = [shifted_fractional_zeta(alpha, h, 0.0) for h in hs]
            fam = mollification_limit(hs, vals, exponents=[1.0, 2.0, 3.0],
                                      known_terms=[(alpha, 1.0)])
            assert abs(fam.target - circle_fractional_zeta(alpha, 0.0)) < 1e-4


class TestWaveOracle:
    def test_abel_summation_matches_cotangent(self):
        # Abel sums 1 + 2 sum q^n cos(t n) -> i cot(t/2) as q -> 1
        t = 1.3
        for q in (0.999, 0.9999):
            acc = 1.0 + 0j
            n = np.arange(1, 200_000)
            acc += 2.0 * np.sum(q**n * np.exp(1j * t * n))
            if q == 0.9999:
                assert abs(acc - abel_wave_oracle(t)) < 2e-3
