import math

import pytest

from aicontrast.compensation import (
    CompensationPlan,
    build_plan,
    first_peak_max,
    fidelity_vs_time,
    golden_section_max,
    joint_gammas,
    optimal_gamma,
    optimal_gamma_for_ratio,
    sequence_gammas,
)
from aicontrast.errors import DomainError, OptimizationError
from aicontrast.interferometer import MzSequence, RamanPulse, contrast, pi_fidelity, three_pulse_p2
from aicontrast.quadrature import single_pulse_average

from conftest import make


def test_golden_section_parabola():
    x, fx = golden_section_max(lambda x: -(x - 1.2345) ** 2, 1.0, 2.0, 1e-6)
    assert x == pytest.approx(1.2345, abs=1e-6)
    assert fx == pytest.approx(0.0, abs=1e-11)


def test_golden_section_endpoint_maximum():
    x, _ = golden_section_max(lambda x: -x, 1.0, 1.5, 1e-4)
    assert x == pytest.approx(1.0, abs=1e-4)


class TestOptimalGamma:
    @pytest.mark.parametrize("ratio", [math.inf, 1e4])
    def test_flat_beam_needs_no_compensation(self, ratio):
        assert optimal_gamma_for_ratio(ratio) == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("ratio", [4.4, 1.9, 1.2, 0.7])
    def test_peak_is_stationary(self, ratio):
        g = optimal_gamma_for_ratio(ratio)
        peak = single_pulse_average(g * math.pi, ratio)
        for step in (0.99, 1.01):
            assert single_pulse_average(g * step * math.pi, ratio) <= peak

    def test_precision_against_dense_scan(self):
        ratio = 1.9
        g = optimal_gamma_for_ratio(ratio)
        grid = [1.15 + i * 1e-5 for i in range(10001)]
        best = max(grid, key=lambda x: single_pulse_average(x * math.pi, ratio))
        assert g == pytest.approx(best, abs=1e-4)

    def test_monotone_in_time(self, normal):
        gammas = [optimal_gamma(*normal, t) for t in (0.0, 0.2, 0.4, 0.8, 1.2)]
        assert all(b >= a for a, b in zip(gammas, gammas[1:]))
        assert all(g >= 1.0 for g in gammas)

    def test_bracket_failure(self):
        with pytest.raises(OptimizationError):
            first_peak_max(lambda g: g)

    def test_bracket_extends_past_scan(self):
        assert first_peak_max(lambda g: -(g - 2.8) ** 2) == pytest.approx(2.8, abs=1e-4)

    def test_first_of_two_peaks(self):
        f = lambda g: math.cos(4 * math.pi * (g - 1.25))  # noqa: E731  peaks at 1.25 and 1.75
        assert first_peak_max(f) == pytest.approx(1.25, abs=1e-4)

    def test_negative_time(self, normal):
        with pytest.raises(DomainError):
            optimal_gamma(*normal, -1.0)


class TestPlan:
    @pytest.mark.parametrize("name", ["normal", "better"])
    def test_invariants(self, name):
        plan = build_plan(MzSequence(*make(name)))
        assert isinstance(plan, CompensationPlan)
        assert all(g >= 1.0 for g in plan.gamma)
        assert all(a >= b for a, b in zip(plan.fidelity_after, plan.fidelity_before))
        assert plan.contrast_after >= plan.contrast_before
        assert plan.sensitivity_gain == pytest.approx(plan.contrast_after / plan.contrast_before)

    def test_ideal_unchanged(self):
        plan = build_plan(MzSequence(*make("ideal")))
        assert plan.gamma == pytest.approx((1.0, 1.0, 1.0), abs=1e-3)
        assert plan.contrast_after == pytest.approx(plan.contrast_before, abs=1e-6)
        assert plan.contrast_after == pytest.approx(1.0, abs=1e-6)

    def test_plan_ignores_existing_gammas(self, normal):
        seq = MzSequence(*normal)
        assert build_plan(seq.with_gammas((2, 2, 2))) == build_plan(seq)

    def test_local_optimality(self, normal):
        beam, cloud = normal
        plan = build_plan(MzSequence(beam, cloud))
        for t, g, f in zip(plan.firing_times, plan.gamma, plan.fidelity_after):
            for step in (0.99, 1.01):
                assert pi_fidelity(beam, cloud, t, g * step) <= f

    def test_intensity_equals_duration(self, better):
        seq = MzSequence(*better)
        plan = build_plan(seq)
        stretched = tuple(RamanPulse(p.tau * g) for p, g in zip(seq.pulses, plan.gamma))
        by_duration = MzSequence(*better, pulses=stretched)
        assert contrast(by_duration) == pytest.approx(plan.contrast_after, abs=1e-8)
        assert three_pulse_p2(by_duration, 0.5) == pytest.approx(
            three_pulse_p2(seq.with_gammas(plan.gamma), 0.5), abs=1e-9)

    def test_first_pulse_left_alone(self, normal):
        seq = MzSequence(*normal)
        g_all = sequence_gammas(seq)
        g_23 = sequence_gammas(seq, compensate_first=False)
        assert g_23[0] == 1.0 and g_23[1:] == g_all[1:]
        plan = build_plan(seq, compensate_first=False)
        assert plan.fidelity_after[0] == plan.fidelity_before[0]

    def test_joint_not_worse(self, normal):
        seq = MzSequence(*normal)
        per_pulse = contrast(seq.with_gammas(sequence_gammas(seq)))
        joint = contrast(seq.with_gammas(joint_gammas(seq, sweeps=1)))
        assert joint >= per_pulse - 1e-9


class TestFidelitySweep:
    def test_rows(self, better):
        rows = fidelity_vs_time(*better, (0.5, 1.5), 3)
        assert [r[0] for r in rows] == pytest.approx([0.5, 1.0, 1.5])
        for t, f0, f1, g in rows:
            assert f1 >= f0
            assert g == pytest.approx(optimal_gamma(*better, t))

    def test_invalid(self, better):
        with pytest.raises(DomainError):
            fidelity_vs_time(*better, (1.0, 0.5), 3)
