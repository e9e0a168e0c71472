"""Experiment configuration: JSON schema, loading, and validation.

All lengths in the config file are in meters. Validation never raises on a
bad value; it returns a list of human-readable diagnostics naming the field,
so a config can be checked as a whole before anything runs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ConfigurationError

EXPERIMENTS = ("young", "focus", "modes-audit")
MODES = ("forward", "reversed", "analytic", "compare")


def _take(d: dict, context: str, required: Tuple[str, ...],
          optional: Tuple[str, ...] = ()) -> dict:
    if not isinstance(d, dict):
        raise ConfigurationError(f"{context}: expected a JSON object")
    unknown = set(d) - set(required) - set(optional)
    if unknown:
        raise ConfigurationError(f"{context}: unknown keys {sorted(unknown)}")
    missing = [k for k in required if k not in d]
    if missing:
        raise ConfigurationError(f"{context}: missing keys {missing}")
    return d


@dataclass(frozen=True)
class SweepSpec:
    """One linear sweep axis: `count` points from `start` to `stop` (meters)."""

    axis: str
    start: float
    stop: float
    count: int
    second: Optional["SweepSpec"] = None

    @staticmethod
    def from_dict(d: dict, context: str = "sweep") -> "SweepSpec":
        _take(d, context, ("axis", "start", "stop", "count"), ("second",))
        second = None
        if d.get("second") is not None:
            second = SweepSpec.from_dict(d["second"], context + ".second")
        return SweepSpec(str(d["axis"]), float(d["start"]), float(d["stop"]),
                         int(d["count"]), second)


@dataclass(frozen=True)
class GridSpec:
    """Simulation grid: n samples at dx meters (per axis for 2-D runs)."""

    n: int
    dx: float

    @staticmethod
    def from_dict(d: dict) -> "GridSpec":
        _take(d, "grid", ("n", "dx"))
        return GridSpec(int(d["n"]), float(d["dx"]))


@dataclass(frozen=True)
class AuditSpec:
    """Size of the randomized mode-space audit."""

    n_modes: int
    trials: int

    @staticmethod
    def from_dict(d: dict) -> "AuditSpec":
        _take(d, "audit", ("n_modes", "trials"))
        return AuditSpec(int(d["n_modes"]), int(d["trials"]))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    mode: str
    wavelength: Optional[float] = None
    f: Optional[float] = None
    D: Optional[float] = None
    x1: Optional[float] = None
    slit_width: Optional[float] = None
    L1: Optional[float] = None
    L2: Optional[float] = None
    z0: float = 0.0
    sweep: Optional[SweepSpec] = None
    grid: Optional[GridSpec] = None
    audit: Optional[AuditSpec] = None
    seed: int = 0
    output: Optional[str] = None

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        _take(d, "config", ("experiment", "mode"),
              ("wavelength", "f", "D", "x1", "slit_width", "L1", "L2", "z0",
               "sweep", "grid", "audit", "seed", "output"))

        def num(key):
            return None if d.get(key) is None else float(d[key])

        return ExperimentConfig(
            experiment=str(d["experiment"]),
            mode=str(d["mode"]),
            wavelength=num("wavelength"), f=num("f"), D=num("D"),
            x1=num("x1"), slit_width=num("slit_width"),
            L1=num("L1"), L2=num("L2"), z0=float(d.get("z0", 0.0)),
            sweep=None if d.get("sweep") is None else SweepSpec.from_dict(d["sweep"]),
            grid=None if d.get("grid") is None else GridSpec.from_dict(d["grid"]),
            audit=None if d.get("audit") is None else AuditSpec.from_dict(d["audit"]),
            seed=int(d.get("seed", 0)),
            output=None if d.get("output") is None else str(d["output"]),
        )


def load_config(path: str) -> ExperimentConfig:
    """Parse a JSON experiment config; malformed documents raise ConfigurationError."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path!r} is not valid JSON: {exc}") from exc
    try:
        return ExperimentConfig.from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"config {path!r}: {exc}") from exc


def _positive(diags: List[str], cfg: ExperimentConfig, *names: str) -> None:
    for name in names:
        val = getattr(cfg, name)
        if val is None:
            diags.append(f"{name}: required for this experiment/mode")
        elif not val > 0:
            diags.append(f"{name}: must be positive, got {val!r}")


def _check_axis(diags: List[str], sweep: SweepSpec, allowed: Tuple[str, ...],
                prefix: str = "sweep") -> None:
    if sweep.axis not in allowed:
        diags.append(f"{prefix}.axis: must be one of {list(allowed)}, got {sweep.axis!r}")
    if sweep.count < 2:
        diags.append(f"{prefix}.count: must be >= 2, got {sweep.count}")
    if not sweep.stop > sweep.start:
        diags.append(f"{prefix}.stop: must exceed {prefix}.start")


def validate(cfg: ExperimentConfig) -> List[str]:
    """All violated invariants, one string per problem; empty means runnable."""
    diags: List[str] = []
    if cfg.experiment not in EXPERIMENTS:
        diags.append(f"experiment: must be one of {list(EXPERIMENTS)}, "
                     f"got {cfg.experiment!r}")
        return diags
    if cfg.mode not in MODES:
        diags.append(f"mode: must be one of {list(MODES)}, got {cfg.mode!r}")
        return diags
    if cfg.seed < 0:
        diags.append(f"seed: must be nonnegative, got {cfg.seed}")

    if cfg.experiment == "modes-audit":
        if cfg.audit is None:
            diags.append("audit: required for modes-audit (n_modes, trials)")
        else:
            if cfg.audit.n_modes < 1:
                diags.append(f"audit.n_modes: must be >= 1, got {cfg.audit.n_modes}")
            if cfg.audit.trials < 1:
                diags.append(f"audit.trials: must be >= 1, got {cfg.audit.trials}")
        return diags

    needs_grid = cfg.mode in ("forward", "reversed", "compare")
    if cfg.sweep is None:
        diags.append("sweep: required for young/focus experiments")
    if needs_grid:
        if cfg.grid is None:
            diags.append(f"grid: required for mode={cfg.mode}")
        else:
            if cfg.grid.n < 2:
                diags.append(f"grid.n: must be >= 2, got {cfg.grid.n}")
            if not cfg.grid.dx > 0:
                diags.append(f"grid.dx: must be positive, got {cfg.grid.dx}")
    if cfg.mode in ("reversed", "compare"):
        _positive(diags, cfg, "L1", "L2")

    if cfg.experiment == "young":
        _positive(diags, cfg, "wavelength", "f", "x1")
        if cfg.slit_width is not None and not cfg.slit_width > 0:
            diags.append(f"slit_width: must be positive when given, got {cfg.slit_width!r}")
        if cfg.sweep is not None:
            _check_axis(diags, cfg.sweep, ("x0",))
            if cfg.sweep.second is not None:
                diags.append("sweep.second: young sweeps are one-dimensional")
    else:  # focus
        _positive(diags, cfg, "wavelength", "f", "D")
        if cfg.mode == "forward":
            diags.append("mode: focus supports analytic/reversed/compare only")
        if cfg.f is not None and not abs(cfg.z0) < cfg.f:
            diags.append(f"z0: |z0| must stay below f, got {cfg.z0!r}")
        if cfg.sweep is not None:
            _check_axis(diags, cfg.sweep, ("r0", "z0"))
            if cfg.sweep.second is not None:
                _check_axis(diags, cfg.sweep.second, ("r0", "z0"), "sweep.second")
                if cfg.sweep.second.axis == cfg.sweep.axis:
                    diags.append("sweep.second.axis: must differ from sweep.axis")
            for spec, prefix in ((cfg.sweep, "sweep"),
                                 (cfg.sweep.second, "sweep.second")):
                if spec is not None and spec.axis == "z0" and cfg.f is not None:
                    if max(abs(spec.start), abs(spec.stop)) >= cfg.f:
                        diags.append(f"{prefix}: |z0| values must stay below f")
    return diags
