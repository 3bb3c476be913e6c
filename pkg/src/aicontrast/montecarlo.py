"""Monte Carlo check of the cloud averages using explicit trajectories.

Atoms are drawn from the separable Gaussian phase-space density, fly
ballistically, and each pulse acts with the Rabi frequency at the atom's
true horizontal radius at that pulse. This avoids the comoving-radius
approximation used by the quadrature path. Gravity is left out because it
only moves atoms along the beam axis; axial velocity is sampled but unused
(zero two-photon detuning).

Random numbers come from NumPy's Philox counter-based generator. A run is
cut into fixed-size shards with seeds spawned from one ``SeedSequence``, and
shard moments are reduced in shard order, so results do not depend on the
number of worker processes.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .interferometer import MzSequence, fringe_contrast
from .parallel import ordered_map
from .physics import AtomCloud, RamanBeam

RNG_ALGORITHM = "numpy.random.Philox (4x64, 10 rounds) seeded via SeedSequence.spawn"
SHARD_SIZE = 1 << 17
MIN_THREE_PULSE_SAMPLES = 1000


@dataclass(frozen=True)
class PhaseSpaceSamples:
    """Initial positions (m) and velocities (m/s), one array entry per atom."""

    x0: np.ndarray
    y0: np.ndarray
    z0: np.ndarray
    vx0: np.ndarray
    vy0: np.ndarray
    vz0: np.ndarray

    def __len__(self):
        return len(self.x0)

    def radius(self, t: float) -> np.ndarray:
        """Horizontal distance from the beam axis at time ``t``."""
        return np.hypot(self.x0 + self.vx0 * t, self.y0 + self.vy0 * t)

    def sigma(self, t: float) -> float:
        """Empirical per-axis horizontal width at time ``t``."""
        x = self.x0 + self.vx0 * t
        y = self.y0 + self.vy0 * t
        return float(np.sqrt(0.5 * (np.mean(x * x) + np.mean(y * y))))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int


@dataclass(frozen=True)
class McContrast:
    contrast: float
    std_error: float
    p_at_0: McEstimate
    p_at_pi: McEstimate
    n_samples: int


def _generator(seed) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def sample_cloud(cloud: AtomCloud, n: int, rng_seed) -> PhaseSpaceSamples:
    """Draw ``n`` atoms; identical seeds give identical samples."""
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    z = _generator(rng_seed).standard_normal((6, n))
    pos = cloud.sigma0
    vel = cloud.sigma_v
    return PhaseSpaceSamples(z[0] * pos, z[1] * pos, z[2] * pos, z[3] * vel, z[4] * vel, z[5] * vel)


def _apply_pulse(c1, c2, area, phi):
    a = np.cos(0.5 * area)
    b = np.sin(0.5 * area) * np.exp(1j * phi)
    return a * c1 - 1j * b * c2, -1j * np.conj(b) * c1 + a * c2


def propagate(samples: PhaseSpaceSamples, seq: MzSequence, phi3: float):
    """Final amplitudes ``(c1, c2)`` of every sampled atom."""
    n = len(samples)
    c1 = np.ones(n, dtype=complex)
    c2 = np.zeros(n, dtype=complex)
    w2 = 2.0 * seq.beam.w ** 2
    phases = (seq.pulses[0].phi, seq.pulses[1].phi, phi3)
    for pulse, area0, phi in zip(seq.pulses, seq.areas, phases):
        r = samples.radius(pulse.t_fire)
        c1, c2 = _apply_pulse(c1, c2, area0 * np.exp(-(r * r) / w2), phi)
    return c1, c2


def _shards(n, rng_seed, shard_size):
    sizes = [shard_size] * (n // shard_size)
    if n % shard_size:
        sizes.append(n % shard_size)
    seeds = np.random.SeedSequence(rng_seed).spawn(len(sizes))
    return list(zip(sizes, seeds))


def _sums(columns):
    """Per-column sums and the full matrix of cross sums, for later reduction."""
    m = np.vstack(columns)
    return m.sum(axis=1), m @ m.T


def _reduce(parts, n):
    s1 = np.zeros_like(parts[0][0])
    s2 = np.zeros_like(parts[0][1])
    for a, b in parts:
        s1 = s1 + a
        s2 = s2 + b
    mean = s1 / n
    cov = (s2 - np.outer(s1, s1) / n) / max(n - 1, 1)
    return mean, cov


def _three_pulse_shard(shard, seq, phis):
    size, seed = shard
    samples = sample_cloud(seq.cloud, size, seed)
    cols = [np.abs(propagate(samples, seq, phi)[1]) ** 2 for phi in phis]
    return _sums(cols)


def _single_pulse_shard(shard, cloud, beam, t, area):
    size, seed = shard
    samples = sample_cloud(cloud, size, seed)
    r = samples.radius(t)
    p = np.sin(0.5 * area * np.exp(-(r * r) / (2.0 * beam.w ** 2))) ** 2
    return _sums([p])


def _estimate(mean, var, n):
    return McEstimate(float(mean), float(math.sqrt(max(var, 0.0) / n)), n)


def mc_three_pulse_p2(seq: MzSequence, phi3: float, n: int, rng_seed: int,
                      shard_size: int = SHARD_SIZE, workers: int = 1) -> McEstimate:
    """Trajectory average of the output probability at third-pulse phase ``phi3``."""
    if n < MIN_THREE_PULSE_SAMPLES:
        raise DomainError(f"at least {MIN_THREE_PULSE_SAMPLES} samples required, got {n}")
    fn = functools.partial(_three_pulse_shard, seq=seq, phis=(phi3,))
    mean, cov = _reduce(ordered_map(fn, _shards(n, rng_seed, shard_size), workers), n)
    return _estimate(mean[0], cov[0, 0], n)


def mc_contrast(seq: MzSequence, n: int, rng_seed: int, shard_size: int = SHARD_SIZE,
                workers: int = 1) -> McContrast:
    """Fringe contrast from the 0 and pi phases evaluated on the same atoms.

    The standard error uses the delta method with the sample covariance of
    the two per-atom probabilities.
    """
    if n < MIN_THREE_PULSE_SAMPLES:
        raise DomainError(f"at least {MIN_THREE_PULSE_SAMPLES} samples required, got {n}")
    fn = functools.partial(_three_pulse_shard, seq=seq, phis=(math.pi, 0.0))
    mean, cov = _reduce(ordered_map(fn, _shards(n, rng_seed, shard_size), workers), n)
    a, b = mean
    grad = np.array([2.0 * b, -2.0 * a]) / (a + b) ** 2
    var = float(grad @ cov @ grad)
    return McContrast(
        contrast=float(fringe_contrast(a, b)),
        std_error=math.sqrt(max(var, 0.0) / n),
        p_at_0=_estimate(b, cov[1, 1], n),
        p_at_pi=_estimate(a, cov[0, 0], n),
        n_samples=n,
    )


def mc_single_pulse_p2(beam: RamanBeam, cloud: AtomCloud, t: float, tau: float, n: int,
                       rng_seed: int, gamma: float = 1.0, shard_size: int = SHARD_SIZE,
                       workers: int = 1) -> McEstimate:
    """Trajectory average of one pulse's transfer probability at time ``t``."""
    if n < 2:
        raise DomainError(f"at least 2 samples required, got {n}")
    fn = functools.partial(_single_pulse_shard, cloud=cloud, beam=beam, t=t,
                           area=gamma * beam.omega_max * tau)
    mean, cov = _reduce(ordered_map(fn, _shards(n, rng_seed, shard_size), workers), n)
    return _estimate(mean[0], cov[0, 0], n)
