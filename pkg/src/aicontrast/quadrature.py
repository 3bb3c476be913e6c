"""Ensemble averages over the radial Gaussian distribution of the cloud.

Positions are measured in units of the instantaneous cloud width, so the
radial density is the Rayleigh weight ``rho * exp(-rho**2 / 2)`` at every
time and the beam only enters through the diameter ratio ``s = w / sigma``.
The axial integral of the density is exactly one and is not evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .errors import DomainError, IntegrationError

MIN_RHO_MAX = 6.0


@dataclass(frozen=True)
class RadialGrid:
    """Truncation radius and accuracy settings for radial averages.

    ``tolerance`` is an absolute tolerance on the weighted integral, whose
    value is at most one.
    """

    rho_max: float = 8.0
    tolerance: float = 1e-9
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.rho_max < MIN_RHO_MAX:
            raise DomainError(f"rho_max must be >= {MIN_RHO_MAX}, got {self.rho_max}")
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_GRID = RadialGrid()


def weight_mass(upper: float) -> float:
    """Integral of ``rho * exp(-rho**2/2)`` from 0 to ``upper``."""
    return -math.expm1(-0.5 * upper * upper)


def _limits(grid: RadialGrid, detection_rho: float | None, renormalize: bool):
    upper = grid.rho_max
    if detection_rho is not None:
        if not detection_rho > 0:
            raise DomainError(f"detection_rho must be positive, got {detection_rho}")
        upper = min(upper, detection_rho)
    if detection_rho is None or renormalize:
        return upper, weight_mass(upper)
    # unrenormalized: fraction of the whole cloud, detected atoms only
    return upper, weight_mass(grid.rho_max)


def _finish(result, norm, what):
    value, error, nsub, converged = result
    if not converged:
        raise IntegrationError(
            f"{what}: no convergence within {nsub} subdivisions "
            f"(estimate {value / norm:.12g}, error bound {error / norm:.3g})",
            value / norm, error / norm,
        )
    return value / norm


def radial_average(f, grid: RadialGrid = DEFAULT_GRID, detection_rho: float | None = None,
                   renormalize: bool = True) -> float:
    """Average of ``f(rho)`` over the radial cloud density.

    Parameters
    ----------
    f : callable
        Function of the normalized radius, bounded in ``[0, 1]``.
    grid : RadialGrid
    detection_rho : float, optional
        Detection-zone radius in units of the cloud width. Atoms beyond it
        are not counted.
    renormalize : bool
        With a detection cutoff, divide by the detected weight (post-selection)
        instead of by the whole-cloud weight.
    """
    upper, norm = _limits(grid, detection_rho, renormalize)
    result = kernels.adaptive_simpson(
        lambda rho: rho * math.exp(-0.5 * rho * rho) * f(rho),
        0.0, upper, grid.tolerance, grid.max_subdivisions,
    )
    return _finish(result, norm, "radial_average")


def _k(ratio: float) -> float:
    if not ratio > 0:
        raise DomainError(f"diameter ratio must be positive, got {ratio}")
    return 0.0 if math.isinf(ratio) else 0.5 / (ratio * ratio)


def single_pulse_average(area: float, ratio: float, grid: RadialGrid = DEFAULT_GRID,
                         detection_rho: float | None = None, renormalize: bool = True) -> float:
    """Mean transfer probability of one resonant pulse.

    ``area`` is the pulse area at the beam centre and ``ratio`` the beam to
    cloud width ratio (``math.inf`` for a flat beam).
    """
    upper, norm = _limits(grid, detection_rho, renormalize)
    result = kernels.simpson_single(area, _k(ratio), upper, grid.tolerance,
                                    grid.max_subdivisions)
    return _finish(result, norm, "single pulse")


def three_pulse_average(areas, ratios, phases, grid: RadialGrid = DEFAULT_GRID,
                        detection_rho: float | None = None, renormalize: bool = True) -> float:
    """Mean output probability of a three-pulse sequence, comoving radius.

    Each atom keeps its normalized radius; pulse ``i`` sees the centre area
    ``areas[i]`` attenuated by the beam profile at ratio ``ratios[i]``.
    """
    if not len(areas) == len(ratios) == len(phases) == 3:
        raise DomainError("three areas, ratios and phases are required")
    upper, norm = _limits(grid, detection_rho, renormalize)
    result = kernels.simpson_three(
        [float(a) for a in areas], [_k(s) for s in ratios], [float(p) for p in phases],
        upper, grid.tolerance, grid.max_subdivisions,
    )
    return _finish(result, norm, "three pulse")
