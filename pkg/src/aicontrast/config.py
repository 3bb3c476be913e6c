"""Scenario configuration: presets, JSON files and unit conversion.

Config files are flat JSON objects. Keys carry their unit as a suffix
(``_mm``, ``_uK``, ``_ms``, ``_kHz`` ...) and are converted to SI here;
nothing past this module sees non-SI values.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .errors import DomainError
from .interferometer import MzSequence, RamanPulse
from .physics import RB87_MASS, AtomCloud, RamanBeam, cloud_sigma, omega_max_from_laser
from .quadrature import RadialGrid

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid configuration file or value."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved scenario, SI units."""

    scenario: str = "normal"
    sigma0: float = 3e-3
    temperature: float = 7e-6
    mass: float = RB87_MASS
    w: float = 20e-3
    omega_max0: float = TWO_PI * 25e3
    laser: dict | None = None
    t1: float = 0.130
    interval_T: float = 0.260
    tau_factors: tuple[float, float, float] = (0.5, 1.0, 0.5)
    phases: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rho_max: float = 8.0
    tolerance: float = 1e-9
    max_subdivisions: int = 2000
    mc_samples: int = 0
    seed: int = 20170101
    detection_rho: float | None = None
    detection_radius: float | None = None
    detection_time: float | None = None
    detection_renormalize: bool = True
    compensate_first: bool = True
    workers: int = 1

    def beam(self) -> RamanBeam:
        return RamanBeam(self.w, self.omega_max0)

    def cloud(self) -> AtomCloud:
        return AtomCloud(self.sigma0, self.temperature, self.mass)

    def grid(self) -> RadialGrid:
        return RadialGrid(self.rho_max, self.tolerance, self.max_subdivisions)

    def sequence(self) -> MzSequence:
        beam = self.beam()
        tau0 = beam.tau_pi
        pulses = tuple(RamanPulse(f * tau0, 1.0, phi) for f, phi in zip(self.tau_factors, self.phases))
        return MzSequence(beam, self.cloud(), self.t1, self.interval_T, pulses)

    def cutoff(self) -> float | None:
        """Detection radius in units of the cloud width at detection."""
        if self.detection_rho is not None:
            return self.detection_rho
        if self.detection_radius is not None:
            return self.detection_radius / cloud_sigma(self.cloud(), self.detection_time)
        return None

    def to_units(self) -> dict:
        """Boundary-unit view, suitable for provenance metadata."""
        d = {
            "scenario": self.scenario,
            "sigma0_mm": self.sigma0 * 1e3,
            "temperature_uK": self.temperature * 1e6,
            "mass_kg": self.mass,
            "w_mm": self.w * 1e3,
            "rabi_frequency_kHz": self.omega_max0 / TWO_PI / 1e3,
            "t1_ms": self.t1 * 1e3,
            "interval_T_ms": self.interval_T * 1e3,
            "tau_factors": list(self.tau_factors),
            "phases_rad": list(self.phases),
            "rho_max": self.rho_max,
            "tolerance": self.tolerance,
            "max_subdivisions": self.max_subdivisions,
            "mc_samples": self.mc_samples,
            "seed": self.seed,
            "detection_rho": self.detection_rho,
            "detection_radius_mm": None if self.detection_radius is None else self.detection_radius * 1e3,
            "detection_time_ms": None if self.detection_time is None else self.detection_time * 1e3,
            "detection_renormalize": self.detection_renormalize,
            "compensate_first": self.compensate_first,
        }
        if self.laser is not None:
            d["laser"] = dict(self.laser)
        return d


PRESETS = {
    "normal": dict(temperature=7e-6, w=20e-3),
    "better": dict(temperature=3e-6, w=30e-3),
    # no thermal expansion and w / sigma0 = 100 at every pulse
    "ideal": dict(temperature=0.0, w=300e-3),
    "custom": dict(),
}

# key -> (field, scale to SI)
_SCALED = {
    "sigma0_mm": ("sigma0", 1e-3),
    "sigma0_m": ("sigma0", 1.0),
    "temperature_uK": ("temperature", 1e-6),
    "temperature_K": ("temperature", 1.0),
    "mass_kg": ("mass", 1.0),
    "w_mm": ("w", 1e-3),
    "w_m": ("w", 1.0),
    "rabi_frequency_kHz": ("omega_max0", TWO_PI * 1e3),
    "omega_max0_rad_s": ("omega_max0", 1.0),
    "t1_ms": ("t1", 1e-3),
    "t1_s": ("t1", 1.0),
    "interval_T_ms": ("interval_T", 1e-3),
    "interval_T_s": ("interval_T", 1.0),
    "rho_max": ("rho_max", 1.0),
    "tolerance": ("tolerance", 1.0),
    "detection_rho": ("detection_rho", 1.0),
    "detection_radius_mm": ("detection_radius", 1e-3),
    "detection_time_ms": ("detection_time", 1e-3),
}
_INTS = {"max_subdivisions", "mc_samples", "seed", "workers"}
_BOOLS = {"detection_renormalize", "compensate_first"}
_TRIPLES = {"tau_factors": "tau_factors", "phases_rad": "phases"}
_LASER_KEYS = {
    "linewidth_MHz": TWO_PI * 1e6,
    "i_sat_W_per_m2": 1.0,
    "power_mW": 1e-3,
    "detuning_GHz": TWO_PI * 1e9,
}


def _number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{key}': expected a number, got {value!r}")
    return float(value)


def _laser_omega(key, laser, w):
    if not isinstance(laser, dict):
        raise ConfigError(f"field '{key}': expected an object")
    unknown = set(laser) - set(_LASER_KEYS)
    missing = set(_LASER_KEYS) - set(laser)
    if unknown or missing:
        raise ConfigError(f"field '{key}': unknown keys {sorted(unknown)}, missing {sorted(missing)}")
    si = {k: _number(f"{key}.{k}", laser[k]) * scale for k, scale in _LASER_KEYS.items()}
    try:
        return omega_max_from_laser(si["linewidth_MHz"], si["i_sat_W_per_m2"], si["power_mW"],
                                    si["detuning_GHz"], w)
    except DomainError as exc:
        raise ConfigError(f"field '{key}': {exc}") from None


def resolve(values: dict, scenario: str | None = None) -> ScenarioConfig:
    """Build a config from a preset plus unit-suffixed overrides.

    ``scenario`` (e.g. from the command line) takes precedence over a
    ``"scenario"`` key in ``values``.
    """
    values = dict(values)
    name = scenario or values.pop("scenario", None) or "normal"
    values.pop("scenario", None)
    if name not in PRESETS:
        raise ConfigError(f"field 'scenario': unknown scenario {name!r}, choose from {sorted(PRESETS)}")
    updates = dict(PRESETS[name], scenario=name)
    laser = values.pop("laser", None)
    for key, value in values.items():
        if key in _SCALED:
            fname, scale = _SCALED[key]
            updates[fname] = None if value is None else _number(key, value) * scale
        elif key in _INTS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"field '{key}': expected an integer, got {value!r}")
            updates[key] = value
        elif key in _BOOLS:
            if not isinstance(value, bool):
                raise ConfigError(f"field '{key}': expected true/false, got {value!r}")
            updates[key] = value
        elif key in _TRIPLES:
            if not isinstance(value, list) or len(value) != 3:
                raise ConfigError(f"field '{key}': expected a list of 3 numbers")
            updates[_TRIPLES[key]] = tuple(_number(key, v) for v in value)
        else:
            raise ConfigError(f"field '{key}': unknown key")
    cfg = replace(ScenarioConfig(), **updates)
    if laser is not None:
        cfg = replace(cfg, laser=dict(laser), omega_max0=_laser_omega("laser", laser, cfg.w))
    return validate(cfg)


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    try:
        cfg.beam()
        cfg.cloud()
        cfg.grid()
        cfg.sequence()
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.mc_samples < 0:
        raise ConfigError("field 'mc_samples': must be >= 0")
    if cfg.workers < 1:
        raise ConfigError("field 'workers': must be >= 1")
    if (cfg.detection_radius is None) != (cfg.detection_time is None):
        raise ConfigError("fields 'detection_radius_mm' and 'detection_time_ms' must be given together")
    if cfg.detection_rho is not None and cfg.detection_radius is not None:
        raise ConfigError("give either 'detection_rho' or 'detection_radius_mm', not both")
    try:
        cutoff = cfg.cutoff()
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if cutoff is not None and not cutoff > 0:
        raise ConfigError("detection cutoff must be positive")
    return cfg


def load(path: str | None = None, scenario: str | None = None, overrides: dict | None = None) -> ScenarioConfig:
    """Read a JSON config (optional), apply the preset and flag overrides."""
    values = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(values, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return resolve(values, scenario)
    except ConfigError as exc:
        if path is not None:
            raise ConfigError(f"{path}: {exc}") from None
        raise


def as_json(cfg: ScenarioConfig) -> str:
    return json.dumps(cfg.to_units(), sort_keys=True, separators=(",", ":"))

