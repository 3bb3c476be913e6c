import math

import numpy as np
import pytest

from aicontrast.errors import DomainError
from aicontrast.interferometer import MzSequence, pi_fidelity
from aicontrast.montecarlo import (
    mc_contrast,
    mc_single_pulse_p2,
    mc_three_pulse_p2,
    propagate,
    sample_cloud,
)
from aicontrast.physics import AtomCloud

from conftest import make


class TestSampling:
    def test_moments(self):
        cloud = AtomCloud(3e-3, 7e-6)
        n = 200_000
        s = sample_cloud(cloud, n, 11)
        for arr, sd in ((s.x0, cloud.sigma0), (s.y0, cloud.sigma0), (s.z0, cloud.sigma0),
                        (s.vx0, cloud.sigma_v), (s.vy0, cloud.sigma_v), (s.vz0, cloud.sigma_v)):
            assert abs(arr.mean()) < 4 * sd / math.sqrt(n)
            # standard error of a sample variance for Gaussian data: sd^2 sqrt(2/n)
            assert abs(arr.var() - sd**2) < 4 * sd**2 * math.sqrt(2 / n)

    def test_width_after_one_second(self):
        s = sample_cloud(AtomCloud(3e-3, 7e-6), 400_000, 3)
        assert s.sigma(1.0) * 1e3 == pytest.approx(26.1, abs=0.2)

    def test_seed_determinism(self):
        cloud = AtomCloud(3e-3, 7e-6)
        a, b = sample_cloud(cloud, 1000, 5), sample_cloud(cloud, 1000, 5)
        assert np.array_equal(a.x0, b.x0) and np.array_equal(a.vz0, b.vz0)
        assert not np.array_equal(a.x0, sample_cloud(cloud, 1000, 6).x0)

    def test_invalid(self):
        with pytest.raises(DomainError):
            sample_cloud(AtomCloud(3e-3, 7e-6), 0, 1)


class TestThreePulse:
    def test_per_atom_unitarity(self, normal):
        seq = MzSequence(*normal)
        c1, c2 = propagate(sample_cloud(seq.cloud, 50_000, 1), seq, 1.3)
        assert np.abs(np.abs(c1) ** 2 + np.abs(c2) ** 2 - 1.0).max() < 1e-12

    def test_ideal(self, ideal):
        seq = MzSequence(*ideal)
        assert mc_three_pulse_p2(seq, math.pi, 10_000, 1).mean == pytest.approx(1.0, abs=1e-6)
        assert mc_three_pulse_p2(seq, 0.0, 10_000, 1).mean == pytest.approx(0.0, abs=1e-6)

    def test_bit_identical(self, normal):
        seq = MzSequence(*normal)
        a = mc_three_pulse_p2(seq, 0.0, 50_000, 9, shard_size=8192)
        b = mc_three_pulse_p2(seq, 0.0, 50_000, 9, shard_size=8192)
        assert a == b

    def test_worker_count_does_not_change_result(self, normal):
        seq = MzSequence(*normal)
        serial = mc_contrast(seq, 40_000, 2, shard_size=10_000)
        parallel = mc_contrast(seq, 40_000, 2, shard_size=10_000, workers=3)
        assert serial == parallel

    def test_minimum_samples(self, normal):
        with pytest.raises(DomainError):
            mc_three_pulse_p2(MzSequence(*normal), 0.0, 999, 1)

    def test_std_error_definition(self, normal):
        seq = MzSequence(*normal)
        n = 5000
        est = mc_three_pulse_p2(seq, 0.0, n, 4, shard_size=n)
        samples = sample_cloud(seq.cloud, n, np.random.SeedSequence(4).spawn(1)[0])
        p = np.abs(propagate(samples, seq, 0.0)[1]) ** 2
        assert est.mean == pytest.approx(p.mean(), rel=1e-12)
        assert est.std_error == pytest.approx(p.std(ddof=1) / math.sqrt(n), rel=1e-9)

    def test_contrast_close_to_quadrature(self, better):
        from aicontrast.interferometer import contrast
        seq = MzSequence(*better)
        est = mc_contrast(seq, 100_000, 7)
        # the comoving-radius model differs from true trajectories by a few 1e-3
        assert est.contrast == pytest.approx(contrast(seq), abs=5e-3)


class TestSinglePulse:
    def test_matches_quadrature_at_first_pulse(self, normal):
        beam, cloud = normal
        est = mc_single_pulse_p2(beam, cloud, 0.13, beam.tau_pi, 200_000, 21)
        assert abs(est.mean - pi_fidelity(beam, cloud, 0.13)) < 3 * est.std_error

    def test_error_scales_as_inverse_sqrt(self, normal):
        beam, cloud = normal
        errs = [mc_single_pulse_p2(beam, cloud, 0.65, beam.tau_pi, n, 8).std_error
                for n in (10_000, 100_000, 1_000_000)]
        for coarse, fine in zip(errs, errs[1:]):
            assert coarse / fine == pytest.approx(math.sqrt(10), rel=0.2)
