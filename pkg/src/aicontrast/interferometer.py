"""Single-pulse Rabi curves and the pi/2 - pi - pi/2 Mach-Zehnder sequence.

Cloud averages use the comoving-radius model: an atom keeps its radius in
units of the instantaneous cloud width across the three pulses, so pulse
``i`` sees the diameter ratio ``w / sigma(t_i)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError
from .parallel import ordered_map
from .physics import AtomCloud, RamanBeam, diameter_ratio
from .quadrature import DEFAULT_GRID, RadialGrid, single_pulse_average, three_pulse_average

DEFAULT_T1 = 0.130
DEFAULT_INTERVAL = 0.260


@dataclass(frozen=True)
class RamanPulse:
    """One Raman pulse.

    ``gamma`` multiplies the peak Rabi frequency (intensity compensation).
    A zero duration is allowed and acts as the identity.
    """

    tau: float
    gamma: float = 1.0
    phi: float = 0.0
    t_fire: float = 0.0

    def __post_init__(self):
        if self.tau < 0:
            raise DomainError(f"pulse duration must be non-negative, got {self.tau}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if self.t_fire < 0:
            raise DomainError(f"firing time must be non-negative, got {self.t_fire}")


@dataclass(frozen=True)
class MzSequence:
    """Beamsplitter, mirror, beamsplitter fired at ``t1 + i * interval_T``.

    The firing times of ``pulses`` are always overwritten from ``t1`` and
    ``interval_T``.
    """

    beam: RamanBeam
    cloud: AtomCloud
    t1: float = DEFAULT_T1
    interval_T: float = DEFAULT_INTERVAL
    pulses: tuple[RamanPulse, RamanPulse, RamanPulse] = field(default=None)

    def __post_init__(self):
        if self.t1 < 0:
            raise DomainError(f"t1 must be non-negative, got {self.t1}")
        if self.interval_T < 0:
            raise DomainError(f"interval_T must be non-negative, got {self.interval_T}")
        pulses = self.pulses
        if pulses is None:
            tau0 = self.beam.tau_pi
            pulses = (RamanPulse(tau0 / 2), RamanPulse(tau0), RamanPulse(tau0 / 2))
        if len(pulses) != 3:
            raise DomainError(f"a Mach-Zehnder sequence has 3 pulses, got {len(pulses)}")
        pulses = tuple(replace(p, t_fire=t) for p, t in zip(pulses, self.firing_times))
        object.__setattr__(self, "pulses", pulses)

    @property
    def firing_times(self) -> tuple[float, float, float]:
        return tuple(self.t1 + i * self.interval_T for i in range(3))

    @property
    def ratios(self) -> tuple[float, float, float]:
        return tuple(diameter_ratio(self.beam, self.cloud, t) for t in self.firing_times)

    @property
    def areas(self) -> tuple[float, float, float]:
        """Pulse areas at the beam centre, compensation included."""
        return tuple(p.gamma * self.beam.omega_max * p.tau for p in self.pulses)

    @property
    def gammas(self) -> tuple[float, float, float]:
        return tuple(p.gamma for p in self.pulses)

    def with_gammas(self, gammas) -> MzSequence:
        pulses = tuple(replace(p, gamma=float(g)) for p, g in zip(self.pulses, gammas))
        return replace(self, pulses=pulses)

    def with_timing(self, t1=None, interval_T=None) -> MzSequence:
        return replace(self, t1=self.t1 if t1 is None else t1,
                       interval_T=self.interval_T if interval_T is None else interval_T)

    def with_phase3(self, phi3) -> MzSequence:
        p1, p2, p3 = self.pulses
        return replace(self, pulses=(p1, p2, replace(p3, phi=phi3)))


@dataclass(frozen=True)
class FringeResult:
    phi3_samples: list[tuple[float, float]]
    contrast: float
    p_at_0: float
    p_at_pi: float

    @property
    def extrema_contrast(self) -> float:
        """``(max - min) / (max + min)`` over the sampled fringe."""
        p = [v for _, v in self.phi3_samples]
        return (max(p) - min(p)) / (max(p) + min(p))


def fringe_contrast(p_at_pi: float, p_at_0: float) -> float:
    return (p_at_pi - p_at_0) / (p_at_pi + p_at_0)


def single_pulse_p2(beam: RamanBeam, cloud: AtomCloud, t: float, tau: float, gamma: float = 1.0,
                    grid: RadialGrid = DEFAULT_GRID, detection_rho=None, renormalize=True) -> float:
    """Cloud-averaged transfer probability of one pulse fired at ``t``.

    Atoms start in the lower state; ``gamma`` scales the peak Rabi frequency.
    """
    if tau < 0:
        raise DomainError(f"pulse duration must be non-negative, got {tau}")
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    s = diameter_ratio(beam, cloud, t)
    return single_pulse_average(gamma * beam.omega_max * tau, s, grid, detection_rho, renormalize)


def rabi_curve(beam, cloud, t, tau_range, n_points, gamma=1.0, grid=DEFAULT_GRID):
    """Sample ``single_pulse_p2`` over ``n_points`` durations in ``tau_range``."""
    lo, hi = tau_range
    if n_points < 2 or lo < 0 or hi <= lo:
        raise DomainError(f"invalid rabi sweep {tau_range} with {n_points} points")
    taus = np.linspace(lo, hi, n_points)
    return [(float(tau), single_pulse_p2(beam, cloud, t, float(tau), gamma, grid)) for tau in taus]


def pi_fidelity(beam, cloud, t, gamma=1.0, grid=DEFAULT_GRID, detection_rho=None,
                renormalize=True) -> float:
    """Transfer probability at the nominal pi duration ``pi / omega_max``."""
    return single_pulse_p2(beam, cloud, t, beam.tau_pi, gamma, grid, detection_rho, renormalize)


def three_pulse_p2(seq: MzSequence, phi3: float, grid: RadialGrid = DEFAULT_GRID,
                   detection_rho=None, renormalize=True) -> float:
    """Output-port upper-state probability for third-pulse phase ``phi3``."""
    phases = (seq.pulses[0].phi, seq.pulses[1].phi, phi3)
    return three_pulse_average(seq.areas, seq.ratios, phases, grid, detection_rho, renormalize)


def contrast(seq: MzSequence, grid=DEFAULT_GRID, detection_rho=None, renormalize=True) -> float:
    p0 = three_pulse_p2(seq, 0.0, grid, detection_rho, renormalize)
    ppi = three_pulse_p2(seq, math.pi, grid, detection_rho, renormalize)
    return fringe_contrast(ppi, p0)


def fringe_scan(seq: MzSequence, n_points: int = 73, grid=DEFAULT_GRID, detection_rho=None,
                renormalize=True) -> FringeResult:
    """Fringe over ``phi3`` in ``[0, 2 pi]``; contrast from the 0 and pi points."""
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    samples = [(float(phi), three_pulse_p2(seq, float(phi), grid, detection_rho, renormalize))
               for phi in np.linspace(0.0, 2.0 * math.pi, n_points)]
    p0 = three_pulse_p2(seq, 0.0, grid, detection_rho, renormalize)
    ppi = three_pulse_p2(seq, math.pi, grid, detection_rho, renormalize)
    return FringeResult(samples, fringe_contrast(ppi, p0), p0, ppi)


def _contrast_at_interval(interval, seq, compensated, compensate_first, grid):
    from .compensation import sequence_gammas

    s = seq.with_timing(interval_T=interval)
    if compensated:
        s = s.with_gammas(sequence_gammas(s, grid, compensate_first))
    else:
        s = s.with_gammas((1.0, 1.0, 1.0))
    return contrast(s, grid)


def contrast_vs_interval(seq: MzSequence, T_range, n_points: int, compensated: bool = False,
                         compensate_first: bool = True, grid=DEFAULT_GRID, workers=1):
    """Contrast as a function of the pulse spacing, ``t1`` held fixed.

    With ``compensated`` the per-pulse factors are re-optimized for every
    spacing; otherwise all factors are one.
    """
    lo, hi = T_range
    if n_points < 2 or lo < 0 or hi <= lo:
        raise DomainError(f"invalid interval sweep {T_range} with {n_points} points")
    intervals = [float(x) for x in np.linspace(lo, hi, n_points)]
    fn = functools.partial(_contrast_at_interval, seq=seq, compensated=compensated,
                           compensate_first=compensate_first, grid=grid)
    return list(zip(intervals, ordered_map(fn, intervals, workers)))


def relative_sensitivity_gain(c_before, c_after, t_before, t_after) -> float:
    """Factor by which the single-shot sensitivity improves.

    The phase sensitivity scales as ``1 / (k_eff T^2 C sqrt(N))``; at fixed
    ``k_eff`` and atom number the gain is ``(C'/C) (T'/T)^2``.
    """
    for name, v in (("c_before", c_before), ("c_after", c_after),
                    ("t_before", t_before), ("t_after", t_after)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v}")
    return (c_after / c_before) * (t_after / t_before) ** 2
