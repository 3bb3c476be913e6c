"""Contrast loss from thermal cloud expansion in light-pulse atom interferometers.

Models the cloud-averaged Raman pulse fidelity and Mach-Zehnder fringe
contrast for a Gaussian beam and an expanding thermal cloud, and computes
per-pulse intensity compensation factors that restore the pi-pulse fidelity.
"""
__version__ = "0.1.0"

from .errors import DomainError, IntegrationError, OptimizationError
from .physics import (
    BOLTZMANN,
    RB87_MASS,
    AtomCloud,
    PulseTransfer,
    RamanBeam,
    TwoLevelState,
    apply_transfer,
    cloud_sigma,
    diameter_ratio,
    effective_rabi,
    omega_max_from_laser,
    transfer_matrix,
)
from .quadrature import RadialGrid, radial_average
from .interferometer import (
    FringeResult,
    MzSequence,
    RamanPulse,
    contrast,
    contrast_vs_interval,
    fringe_scan,
    pi_fidelity,
    rabi_curve,
    relative_sensitivity_gain,
    single_pulse_p2,
    three_pulse_p2,
)
from .compensation import CompensationPlan, build_plan, fidelity_vs_time, optimal_gamma
from .kernels import BACKEND
