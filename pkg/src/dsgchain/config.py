"""Run configuration files (YAML).

Every key is optional; omitted keys take the defaults in ``DEFAULTS``,
which follow the published experiment protocol.  Sweep lists accept either
an explicit list or a ``{start, stop, step}`` mapping with inclusive stop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import ParseError, ValidationError
from .experiments import SweepSpec
from .model import ChainParams, Driving, PotentialKind, TimeGrid

DEFAULTS = {
    "potential": "double-sine-gordon",
    "n_nodes": 200,
    "coupling": 4.0,
    "damping": 0.0,
    "amplitude": 1.04,
    "frequency": 0.9,
    "ramp_time": 50.0,
    "dt": 0.05,
    "horizon": 200.0,
    "newton_tol": 1e-4,
    "max_newton_iters": 50,
    "sweep.amplitudes": {"start": 0.8, "stop": 1.3, "step": 0.01},
    "sweep.frequencies": {"start": 0.2, "stop": 1.0, "step": 0.05},
    "sweep.dampings": [0.0, 0.01, 0.02, 0.03],
    "output_dir": "out",
    "workers": 1,
    "jump_factor": 3.0,
    "probe_node": 60,
    "energy_mode": "narrow",
    "random_free": True,
}


@dataclass(frozen=True)
class RunConfig:
    params: ChainParams
    driving: Driving
    grid: TimeGrid
    newton_tol: float
    max_newton_iters: int
    amplitudes: np.ndarray
    frequencies: np.ndarray
    dampings: np.ndarray
    output_dir: Path
    workers: int
    jump_factor: float
    probe_node: int
    energy_mode: str
    random_free: bool = True

    def sweep_spec(self, study: str) -> SweepSpec:
        """SweepSpec for ``study`` in {"sweep", "surface", "damping"}."""
        freqs = self.frequencies if study == "surface" else [self.driving.frequency]
        damps = self.dampings if study == "damping" else [self.params.damping]
        return SweepSpec(
            amplitudes=self.amplitudes,
            frequencies=freqs,
            dampings=damps,
            base=self.params,
            grid=self.grid,
            ramp_time=self.driving.ramp_time,
            jump_factor=self.jump_factor,
            probe_node=self.probe_node,
            newton_tol=self.newton_tol,
            max_newton_iters=self.max_newton_iters,
        )


def expand_range(key, value):
    """Explicit list, scalar, or inclusive ``{start, stop, step}`` mapping."""
    if isinstance(value, dict):
        missing = {"start", "stop", "step"} - set(value)
        if missing:
            raise ValidationError(key, f"range needs start, stop and step (missing {sorted(missing)})")
        start, stop, step = (_real(f"{key}.{k}", value[k]) for k in ("start", "stop", "step"))
        if step <= 0 or stop < start:
            raise ValidationError(key, "range needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        # round away accumulation error so grid values print cleanly
        return np.round(start + step * np.arange(count), 12)
    if isinstance(value, (list, tuple)):
        return np.array([_real(key, v) for v in value], dtype=float)
    return np.array([_real(key, value)], dtype=float)


def _real(key, value):
    if isinstance(value, bool):
        raise ValidationError(key, f"expected a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ValidationError(key, f"expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ValidationError(key, "must be finite")
    return out


def _int(key, value):
    out = _real(key, value)
    if out != int(out):
        raise ValidationError(key, f"expected an integer, got {value!r}")
    return int(out)


def _flatten(raw):
    flat = {}
    for key, value in raw.items():
        key = str(key)
        if key == "sweep" and isinstance(value, dict):
            for sub, v in value.items():
                flat[f"sweep.{sub}"] = v
        else:
            flat[key] = value
    return flat


def build_config(raw: dict | None = None) -> RunConfig:
    """Validate a key-value mapping (flat or with a nested ``sweep`` table)."""
    flat = _flatten(raw or {})
    unknown = sorted(set(flat) - set(DEFAULTS))
    if unknown:
        raise ValidationError(unknown[0], "unknown configuration key")
    cfg = {**DEFAULTS, **flat}

    params = ChainParams(
        n_nodes=_int("n_nodes", cfg["n_nodes"]),
        coupling=_real("coupling", cfg["coupling"]),
        damping=_real("damping", cfg["damping"]),
        potential=PotentialKind.from_name(cfg["potential"]),
    )
    driving = Driving(
        amplitude=_real("amplitude", cfg["amplitude"]),
        frequency=_real("frequency", cfg["frequency"]),
        ramp_time=_real("ramp_time", cfg["ramp_time"]),
    )
    grid = TimeGrid(dt=_real("dt", cfg["dt"]), horizon=_real("horizon", cfg["horizon"]))

    tol = _real("newton_tol", cfg["newton_tol"])
    if tol <= 0:
        raise ValidationError("newton_tol", "must be positive")
    iters = _int("max_newton_iters", cfg["max_newton_iters"])
    if iters < 1:
        raise ValidationError("max_newton_iters", "must be at least 1")
    workers = _int("workers", cfg["workers"])
    if workers < 1:
        raise ValidationError("workers", "must be at least 1")
    jump = _real("jump_factor", cfg["jump_factor"])
    if jump <= 1:
        raise ValidationError("jump_factor", "must exceed 1")
    probe = _int("probe_node", cfg["probe_node"])
    if not 0 <= probe <= params.n_nodes:
        raise ValidationError("probe_node", f"must lie in 0..{params.n_nodes}")
    mode = str(cfg["energy_mode"])
    if mode not in ("narrow", "wide"):
        raise ValidationError("energy_mode", "must be 'narrow' or 'wide'")
    if cfg["random_free"] is not True:
        raise ValidationError("random_free", "all runs are deterministic; only true is accepted")

    config = RunConfig(
        params=params,
        driving=driving,
        grid=grid,
        newton_tol=tol,
        max_newton_iters=iters,
        amplitudes=expand_range("sweep.amplitudes", cfg["sweep.amplitudes"]),
        frequencies=expand_range("sweep.frequencies", cfg["sweep.frequencies"]),
        dampings=expand_range("sweep.dampings", cfg["sweep.dampings"]),
        output_dir=Path(str(cfg["output_dir"])),
        workers=workers,
        jump_factor=jump,
        probe_node=probe,
        energy_mode=mode,
    )
    # validates the sweep lists (nonempty, strictly increasing, signs)
    SweepSpec(config.amplitudes, config.frequencies, config.dampings, base=params,
              grid=grid, ramp_time=driving.ramp_time, jump_factor=jump, probe_node=probe)
    return config


def load_config(path) -> RunConfig:
    """Read and validate a YAML run configuration."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ParseError(f"malformed config {path}: {problem}", line=line) from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError(f"config {path} must be a mapping of keys to values", line=1)
    return build_config(raw)
