"""Amplitude sweeps, threshold detection, frequency surfaces and damping studies."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .energy import energy_record
from .errors import NoThreshold, NumericalError, ValidationError
from .integrator import MAX_NEWTON_ITERS, NEWTON_TOL, run_simulation
from .model import ChainParams, Driving, TimeGrid

logger = logging.getLogger(__name__)

ENERGY_FLOOR = 1e-12
JUMP_FACTOR = 3.0
PROBE_NODE = 60


def _increasing(name, values):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.size == 0:
        raise ValidationError(name, "must not be empty")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise ValidationError(name, "must be strictly increasing")
    return arr


@dataclass(frozen=True)
class SweepSpec:
    amplitudes: np.ndarray
    frequencies: np.ndarray
    dampings: np.ndarray
    base: ChainParams = field(default_factory=ChainParams)
    grid: TimeGrid = field(default_factory=TimeGrid)
    ramp_time: float = 50.0
    jump_factor: float = JUMP_FACTOR
    probe_node: int = PROBE_NODE
    newton_tol: float = NEWTON_TOL
    max_newton_iters: int = MAX_NEWTON_ITERS

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _increasing("sweep.amplitudes", self.amplitudes))
        object.__setattr__(self, "frequencies", _increasing("sweep.frequencies", self.frequencies))
        object.__setattr__(self, "dampings", _increasing("sweep.dampings", self.dampings))
        if np.any(self.amplitudes < 0):
            raise ValidationError("sweep.amplitudes", "must be nonnegative")
        if np.any(self.frequencies <= 0):
            raise ValidationError("sweep.frequencies", "must be positive")
        if np.any(self.dampings < 0):
            raise ValidationError("sweep.dampings", "must be nonnegative")
        if not 0 <= self.probe_node <= self.base.n_nodes:
            raise ValidationError("probe_node", f"must lie in 0..{self.base.n_nodes}")
        if not self.jump_factor > 1:
            raise ValidationError("jump_factor", "must exceed 1")
        Driving(0.0, 1.0, self.ramp_time)  # validates ramp_time

    @property
    def in_gap(self) -> np.ndarray:
        """Per-frequency flag: True inside the forbidden band gap (Omega < 1)."""
        return self.frequencies < 1.0


class SweepPoint(NamedTuple):
    omega: float
    amplitude: float
    gamma: float
    energy: float  # time-integrated total energy over [0, T]
    converged: bool
    max_node_amplitude: float  # max_t |u_probe(t)|
    min_energy: float = float("nan")  # smallest H_n^k or E^k seen in the run


class Threshold(NamedTuple):
    omega: float
    gamma: float
    amplitude: float | None  # None when no jump was detected


@dataclass
class SweepResult:
    points: list[SweepPoint]
    thresholds: list[Threshold] = field(default_factory=list)

    @property
    def threshold_curve(self) -> list[tuple[float, float]]:
        """(Omega, A_s) for every frequency where a threshold was found."""
        return [(t.omega, t.amplitude) for t in self.thresholds if t.amplitude is not None]

    def select(self, omega=None, gamma=None) -> list[SweepPoint]:
        return [
            p for p in self.points
            if (omega is None or p.omega == omega) and (gamma is None or p.gamma == gamma)
        ]


def run_point(spec: SweepSpec, omega: float, amplitude: float, gamma: float) -> SweepPoint:
    params = replace(spec.base, damping=float(gamma))
    driving = Driving(float(amplitude), float(omega), spec.ramp_time)
    try:
        traj = run_simulation(
            params, driving, spec.grid,
            newton_tol=spec.newton_tol, max_newton_iters=spec.max_newton_iters,
        )
    except NumericalError as exc:
        logger.warning("omega=%g A=%g gamma=%g failed: %s", omega, amplitude, gamma, exc)
        return SweepPoint(float(omega), float(amplitude), float(gamma), float("nan"), False, float("nan"))
    peak = float(np.max(np.abs(traj.states[:, spec.probe_node])))
    record = energy_record(traj)
    lowest = float(min(record.local.min(), record.total.min()))
    return SweepPoint(float(omega), float(amplitude), float(gamma), record.integrated, True, peak, lowest)


def _run_task(args):
    return run_point(*args)


def run_grid(spec: SweepSpec, workers: int = 1) -> list[SweepPoint]:
    """Every (Omega, gamma, A) combination, gathered in spec order."""
    tasks = [
        (spec, om, a, g)
        for om in spec.frequencies
        for g in spec.dampings
        for a in spec.amplitudes
    ]
    if workers <= 1 or len(tasks) == 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def detect_threshold(points, jump_factor: float = JUMP_FACTOR) -> float:
    """Midpoint of the consecutive amplitude pair with the largest energy ratio.

    ``points`` is a sequence of ``(amplitude, energy)`` pairs, or of
    ``SweepPoint``.  Raises ``NoThreshold`` when no ratio reaches
    ``jump_factor``.
    """
    pairs = [(p.amplitude, p.energy) if isinstance(p, SweepPoint) else tuple(p) for p in points]
    if isinstance(points[0] if len(points) else None, SweepPoint) and not all(p.converged for p in points):
        raise ValueError("all points must have converged")
    if len(pairs) < 3:
        raise ValueError("need at least three points")
    amps = np.array([a for a, _ in pairs], dtype=float)
    energy = np.array([e for _, e in pairs], dtype=float)
    if not np.all(np.diff(amps) > 0):
        raise ValueError("amplitudes must be strictly increasing")
    if not np.all(np.isfinite(energy)):
        raise ValueError("energies must be finite")
    ratios = energy[1:] / np.maximum(energy[:-1], ENERGY_FLOOR)
    i = int(np.argmax(ratios))
    if ratios[i] < jump_factor:
        raise NoThreshold(f"largest consecutive energy ratio {ratios[i]:.3g} < {jump_factor:g}")
    return float(0.5 * (amps[i] + amps[i + 1]))


def _thresholds(spec, points):
    out = []
    for om in spec.frequencies:
        for g in spec.dampings:
            pts = [p for p in points if p.omega == om and p.gamma == g and p.converged]
            try:
                a_s = detect_threshold(pts, spec.jump_factor)
            except (NoThreshold, ValueError) as exc:
                logger.info("omega=%g gamma=%g: no threshold (%s)", om, g, exc)
                a_s = None
            out.append(Threshold(float(om), float(g), a_s))
    return out


def _require_single(spec, name):
    if getattr(spec, name).size != 1:
        raise ValidationError(f"sweep.{name}", "this study takes exactly one value")


def amplitude_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Integrated energy versus driving amplitude at one frequency and damping."""
    _require_single(spec, "frequencies")
    _require_single(spec, "dampings")
    points = run_grid(spec, workers)
    return SweepResult(points, _thresholds(spec, points))


def bifurcation_surface(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Energy over the (Omega, A) grid and the threshold curve A_s(Omega)."""
    _require_single(spec, "dampings")
    points = run_grid(spec, workers)
    return SweepResult(points, _thresholds(spec, points))


def damping_study(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """One amplitude sweep per damping value at a fixed frequency."""
    _require_single(spec, "frequencies")
    points = run_grid(spec, workers)
    return SweepResult(points, _thresholds(spec, points))
