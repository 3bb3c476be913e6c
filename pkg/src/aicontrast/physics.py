"""Two-level Raman dynamics, Gaussian beam profile and ballistic cloud growth.

All quantities are SI: metres, seconds, kelvin, kilograms, rad/s.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

BOLTZMANN = 1.380649e-23  # J/K, exact
RB87_MASS = 1.44316e-25  # kg

NORM_TOL = 1e-12


@dataclass(frozen=True)
class TwoLevelState:
    """Amplitudes of the lower (``c1``) and upper (``c2``) states."""

    c1: complex = 1.0 + 0.0j
    c2: complex = 0.0j

    @property
    def p1(self) -> float:
        return abs(self.c1) ** 2

    @property
    def p2(self) -> float:
        return abs(self.c2) ** 2

    @property
    def norm(self) -> float:
        return self.p1 + self.p2


GROUND = TwoLevelState(1.0 + 0.0j, 0.0j)


@dataclass(frozen=True)
class PulseTransfer:
    """Unitary ``[[a, -i b], [-i conj(b), conj(a)]]`` of a square Raman pulse."""

    a: complex
    b: complex

    def matrix(self) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
        return ((self.a, -1j * self.b), (-1j * self.b.conjugate(), self.a.conjugate()))

    def dagger(self) -> PulseTransfer:
        # the adjoint keeps the same [[a, -ib], [-ib*, a*]] form with a -> a*, b -> -b
        return PulseTransfer(self.a.conjugate(), -self.b)

    def __matmul__(self, other: PulseTransfer) -> PulseTransfer:
        (a1, b1), (a2, b2) = (self.a, self.b), (other.a, other.b)
        a = a1 * a2 - b1 * b2.conjugate()
        b = a1 * b2 + b1 * a2.conjugate()
        return PulseTransfer(a, b)

    @property
    def transfer_probability(self) -> float:
        return abs(self.b) ** 2


IDENTITY = PulseTransfer(1.0 + 0.0j, 0.0j)


def transfer_matrix(omega_eff, tau, delta=0.0, t0=0.0, phi=0.0) -> PulseTransfer:
    """Transfer matrix of a pulse of duration ``tau`` with detuning ``delta``.

    ``omega_eff`` is the local two-photon Rabi frequency, ``t0`` the firing
    time (only enters through the ``delta * t0`` phase) and ``phi`` the laser
    phase. A vanishing generalized Rabi frequency gives the identity.
    """
    if tau < 0:
        raise DomainError(f"pulse duration must be non-negative, got {tau}")
    if omega_eff < 0:
        raise DomainError(f"Rabi frequency must be non-negative, got {omega_eff}")
    omega_r = math.hypot(omega_eff, delta)
    if omega_r == 0.0:
        return IDENTITY
    sin_alpha = delta / omega_r
    cos_alpha = omega_eff / omega_r
    half = 0.5 * omega_r * tau
    s, c = math.sin(half), math.cos(half)
    a = complex(c, -sin_alpha * s)
    b = cmath.exp(1j * (delta * t0 + phi)) * (cos_alpha * s)
    return PulseTransfer(a, b)


def apply_transfer(m: PulseTransfer, s: TwoLevelState) -> TwoLevelState:
    c1 = m.a * s.c1 - 1j * m.b * s.c2
    c2 = -1j * m.b.conjugate() * s.c1 + m.a.conjugate() * s.c2
    return TwoLevelState(c1, c2)


@dataclass(frozen=True)
class RamanBeam:
    """Gaussian Raman beam with intensity profile ``exp(-r**2 / w**2)``.

    ``w`` is used exactly as it appears in the Rabi-frequency profile
    ``omega_max * exp(-r**2 / (2 w**2))``; no waist conversion is applied.
    """

    w: float
    omega_max: float

    def __post_init__(self):
        if not self.w > 0:
            raise DomainError(f"beam width must be positive, got {self.w}")
        if not self.omega_max > 0:
            raise DomainError(f"omega_max must be positive, got {self.omega_max}")

    @classmethod
    def from_laser(cls, w, gamma_nat, i_sat, p0, detuning_single) -> RamanBeam:
        return cls(w, omega_max_from_laser(gamma_nat, i_sat, p0, detuning_single, w))

    @property
    def tau_pi(self) -> float:
        """Nominal pi-pulse duration at the beam centre."""
        return math.pi / self.omega_max


def effective_rabi(beam: RamanBeam, r: float) -> float:
    if r < 0:
        raise DomainError(f"radius must be non-negative, got {r}")
    return beam.omega_max * math.exp(-(r * r) / (2.0 * beam.w * beam.w))


def omega_max_from_laser(gamma_nat, i_sat, p0, detuning_single, w) -> float:
    """Peak two-photon Rabi frequency from laser power and single-photon detuning.

    Parameters
    ----------
    gamma_nat : float
        Natural linewidth (rad/s).
    i_sat : float
        Saturation intensity (W/m^2).
    p0 : float
        Total Raman power (W).
    detuning_single : float
        Single-photon detuning from the excited state (rad/s).
    w : float
        Beam width parameter (m).
    """
    for name, value in (("gamma_nat", gamma_nat), ("i_sat", i_sat), ("p0", p0),
                        ("detuning_single", detuning_single), ("w", w)):
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")
    return gamma_nat**2 / (2.0 * i_sat * detuning_single) * p0 / (math.pi * w * w)


@dataclass(frozen=True)
class AtomCloud:
    """Thermal cloud with isotropic initial width ``sigma0`` (m)."""

    sigma0: float
    temperature: float
    mass: float = RB87_MASS
    boltzmann: float = BOLTZMANN

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise DomainError(f"sigma0 must be positive, got {self.sigma0}")
        if self.temperature < 0:
            raise DomainError(f"temperature must be non-negative, got {self.temperature}")
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")

    @property
    def sigma_v(self) -> float:
        return math.sqrt(self.boltzmann * self.temperature / self.mass)

    def sigma(self, t: float) -> float:
        return cloud_sigma(self, t)


def cloud_sigma(cloud: AtomCloud, t: float) -> float:
    if t < 0:
        raise DomainError(f"time must be non-negative, got {t}")
    return math.sqrt(cloud.sigma0**2 + (cloud.sigma_v * t) ** 2)


def diameter_ratio(beam: RamanBeam, cloud: AtomCloud, t: float) -> float:
    """Beam width over cloud width at time ``t`` after launch."""
    return beam.w / cloud_sigma(cloud, t)
