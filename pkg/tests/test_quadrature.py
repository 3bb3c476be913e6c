import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aicontrast import _kernels_py, kernels
from aicontrast.errors import DomainError, IntegrationError
from aicontrast.physics import AtomCloud, RamanBeam, cloud_sigma
from aicontrast.quadrature import (
    DEFAULT_GRID,
    RadialGrid,
    radial_average,
    single_pulse_average,
    three_pulse_average,
    weight_mass,
)


def brute_force_single_pulse(beam, cloud, t, tau, nr=4001, nz=801):
    """Trapezoid rule over (r, z) of the cloud-averaged sin^2 integrand, physical units."""
    sig = cloud_sigma(cloud, t)
    r = np.linspace(0.0, 8 * sig, nr)
    z = np.linspace(-8 * sig, 8 * sig, nz)
    rr, zz = np.meshgrid(r, z, indexing="ij")
    density = rr / (math.sqrt(2 * math.pi) * sig**3) * np.exp(-(rr**2 + zz**2) / (2 * sig**2))
    p = np.sin(0.5 * tau * beam.omega_max * np.exp(-(rr**2) / (2 * beam.w**2))) ** 2
    return np.trapezoid(np.trapezoid(density * p, z, axis=1), r)


class TestGrid:
    def test_defaults(self):
        assert DEFAULT_GRID == RadialGrid(8.0, 1e-9, 2000)

    @pytest.mark.parametrize("kw", [dict(rho_max=5.9), dict(tolerance=0.0), dict(max_subdivisions=0)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            RadialGrid(**kw)


class TestRadialAverage:
    @pytest.mark.parametrize("rho_max", [6.0, 7.0, 8.0, 12.0])
    def test_weight_normalization(self, rho_max):
        grid = RadialGrid(rho_max=rho_max)
        assert radial_average(lambda r: 1.0, grid) == pytest.approx(1.0, abs=1e-9)

    @given(st.floats(0.0, 1.0))
    def test_constant(self, c):
        assert radial_average(lambda r: c) == pytest.approx(c, abs=1e-9)

    def test_gaussian_gives_half(self):
        # int rho e^{-rho^2} / int rho e^{-rho^2/2} = (1/2) / 1
        assert radial_average(lambda r: math.exp(-0.5 * r * r)) == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize("cut", [0.5, 1.0, 2.0, 3.5])
    def test_detection_cutoff_renormalized(self, cut):
        expected = 0.5 * (-math.expm1(-cut * cut)) / (-math.expm1(-0.5 * cut * cut))
        got = radial_average(lambda r: math.exp(-0.5 * r * r), detection_rho=cut)
        assert got == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("cut", [0.5, 2.0])
    def test_detection_cutoff_unrenormalized(self, cut):
        expected = 0.5 * (-math.expm1(-cut * cut)) / weight_mass(8.0)
        got = radial_average(lambda r: math.exp(-0.5 * r * r), detection_rho=cut, renormalize=False)
        assert got == pytest.approx(expected, abs=1e-9)

    def test_cutoff_beyond_grid_is_ignored(self):
        f = lambda r: math.exp(-0.5 * r * r)  # noqa: E731
        assert radial_average(f, detection_rho=20.0) == radial_average(f)

    def test_bad_cutoff(self):
        with pytest.raises(DomainError):
            radial_average(lambda r: 1.0, detection_rho=0.0)

    def test_non_convergence_reports_estimate(self):
        grid = RadialGrid(tolerance=1e-14, max_subdivisions=3)
        with pytest.raises(IntegrationError) as info:
            radial_average(lambda r: math.sin(40 * r) ** 2, grid)
        assert 0.0 < info.value.estimate < 1.0
        assert info.value.error_bound > 0.0

    def test_kernel_non_convergence(self):
        grid = RadialGrid(tolerance=1e-14, max_subdivisions=2)
        with pytest.raises(IntegrationError):
            single_pulse_average(40 * math.pi, 1.0, grid)

    def test_halving_tolerance(self):
        # a Simpson error estimate can be fooled by an oscillatory integrand,
        # so the property is checked as a rate over random draws
        rng = np.random.default_rng(159)
        ratios = []
        for _ in range(400):
            a, b, c = rng.uniform(0.5, 20.0), rng.uniform(0.01, 3.0), rng.uniform(0.0, 3.0)
            tol = 10.0 ** -int(rng.integers(4, 9))
            f = lambda r: math.sin(a * math.exp(-b * r * r) + c) ** 2  # noqa: E731
            coarse = radial_average(f, RadialGrid(tolerance=tol))
            fine = radial_average(f, RadialGrid(tolerance=tol / 2))
            ratios.append(abs(coarse - fine) / tol)
        ratios = np.array(ratios)
        assert np.mean(ratios <= 1.0) >= 0.99
        assert ratios.max() < 5.0


class TestAgainstBruteForce:
    @pytest.mark.parametrize("seed", range(5))
    def test_single_pulse_matches_2d_trapezoid(self, seed):
        rng = np.random.default_rng(seed)
        beam = RamanBeam(rng.uniform(10e-3, 40e-3), 2 * math.pi * 25e3)
        cloud = AtomCloud(rng.uniform(1e-3, 5e-3), rng.uniform(1e-6, 10e-6))
        t = rng.uniform(0.05, 1.0)
        tau = rng.uniform(0.5, 2.0) * beam.tau_pi
        ratio = beam.w / cloud_sigma(cloud, t)
        got = single_pulse_average(beam.omega_max * tau, ratio)
        assert got == pytest.approx(brute_force_single_pulse(beam, cloud, t, tau), abs=1e-6)

    def test_matches_generic_engine(self):
        area, s = 1.3 * math.pi, 1.7
        generic = radial_average(lambda r: math.sin(0.5 * area * math.exp(-r * r / (2 * s * s))) ** 2)
        assert single_pulse_average(area, s) == pytest.approx(generic, abs=2e-9)

    def test_flat_beam(self):
        assert single_pulse_average(math.pi, math.inf) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
class TestBackendParity:
    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.0, 6 * math.pi), st.floats(0.3, 100.0), st.floats(1.0, 12.0))
    def test_single(self, area, ratio, upper):
        k = 0.5 / ratio**2
        c = kernels._impl.simpson_single(area, k, upper, 1e-9, 2000)
        p = _kernels_py.simpson_single(area, k, upper, 1e-9, 2000)
        assert c[0] == pytest.approx(p[0], abs=1e-12)
        assert c[2:] == p[2:]

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0.0, 2 * math.pi), min_size=3, max_size=3),
           st.lists(st.floats(0.3, 100.0), min_size=3, max_size=3),
           st.lists(st.floats(-math.pi, math.pi), min_size=3, max_size=3))
    def test_three(self, areas, ratios, phases):
        ks = [0.5 / s**2 for s in ratios]
        c = kernels._impl.simpson_three(areas, ks, phases, 8.0, 1e-9, 2000)
        p = _kernels_py.simpson_three(areas, ks, phases, 8.0, 1e-9, 2000)
        assert c[0] == pytest.approx(p[0], abs=1e-12)


def test_three_pulse_needs_three():
    with pytest.raises(DomainError):
        three_pulse_average([1.0, 2.0], [1.0, 1.0], [0.0, 0.0])
