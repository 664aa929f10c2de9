"""Physical configuration of the driven chain: potentials, driving, grids."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


class PotentialKind(enum.Enum):
    """On-site potentials supported by the integrator.

    The value is the name used in configuration files.
    """

    SINE_GORDON = "sine-gordon"
    DOUBLE_SINE_GORDON = "double-sine-gordon"
    PHI6_KLEIN_GORDON = "phi6-klein-gordon"

    @property
    def code(self) -> int:
        # integer tag understood by the compiled kernels
        return _CODES[self]

    @classmethod
    def from_name(cls, name: str) -> PotentialKind:
        key = str(name).strip().lower().replace("_", "-")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValidationError("potential", f"unknown potential {name!r} (choose from {choices})") from None


_CODES = {
    PotentialKind.SINE_GORDON: 0,
    PotentialKind.DOUBLE_SINE_GORDON: 1,
    PotentialKind.PHI6_KLEIN_GORDON: 2,
}
_ALIASES = {
    "sg": "sine-gordon",
    "dsg": "double-sine-gordon",
    "phi6": "phi6-klein-gordon",
    "klein-gordon": "phi6-klein-gordon",
}


def eval_potential(kind: PotentialKind, u):
    """Potential energy V(u); works on scalars and arrays."""
    if kind is PotentialKind.SINE_GORDON:
        return 1.0 - np.cos(u)
    if kind is PotentialKind.DOUBLE_SINE_GORDON:
        return 0.5 - (2.0 * np.cos(u) + np.cos(2.0 * u)) / 6.0
    u2 = np.square(u)
    return u2 / 2.0 - u2 * u2 / 24.0 + u2 * u2 * u2 / 720.0


def eval_potential_deriv(kind: PotentialKind, u):
    """Force law V'(u)."""
    if kind is PotentialKind.SINE_GORDON:
        return np.sin(u)
    if kind is PotentialKind.DOUBLE_SINE_GORDON:
        return (np.sin(u) + np.sin(2.0 * u)) / 3.0
    u2 = np.square(u)
    return u - u * u2 / 6.0 + u * u2 * u2 / 120.0


def eval_potential_second_deriv(kind: PotentialKind, u):
    """V''(u), needed only where the Jacobian's difference quotient degenerates."""
    if kind is PotentialKind.SINE_GORDON:
        return np.cos(u)
    if kind is PotentialKind.DOUBLE_SINE_GORDON:
        return (np.cos(u) + 2.0 * np.cos(2.0 * u)) / 3.0
    u2 = np.square(u)
    return 1.0 - u2 / 2.0 + u2 * u2 / 24.0


def dispersion_omega(c: float, k):
    """Linear dispersion relation of the chain, omega(k) >= 1."""
    if c <= 0:
        raise ValidationError("coupling", "must be positive")
    return np.sqrt(1.0 + 2.0 * c * c * (1.0 - np.cos(k)))


@dataclass(frozen=True)
class ChainParams:
    n_nodes: int = 200
    coupling: float = 4.0
    damping: float = 0.0
    potential: PotentialKind = PotentialKind.DOUBLE_SINE_GORDON

    def __post_init__(self):
        if isinstance(self.potential, str):
            object.__setattr__(self, "potential", PotentialKind.from_name(self.potential))
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise ValidationError("n_nodes", f"must be an integer >= 2, got {self.n_nodes!r}")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))
        if not self.coupling > 0 or not math.isfinite(self.coupling):
            raise ValidationError("coupling", f"must be positive, got {self.coupling!r}")
        if not self.damping >= 0 or not math.isfinite(self.damping):
            raise ValidationError("damping", f"must be nonnegative, got {self.damping!r}")


@dataclass(frozen=True)
class Driving:
    """Harmonic boundary forcing with a linear amplitude ramp over ``ramp_time``."""

    amplitude: float
    frequency: float = 0.9
    ramp_time: float = 50.0

    def __post_init__(self):
        if not self.amplitude >= 0 or not math.isfinite(self.amplitude):
            raise ValidationError("amplitude", f"must be nonnegative, got {self.amplitude!r}")
        if not self.frequency > 0 or not math.isfinite(self.frequency):
            raise ValidationError("frequency", f"must be positive, got {self.frequency!r}")
        if not self.ramp_time >= 0 or not math.isfinite(self.ramp_time):
            raise ValidationError("ramp_time", f"must be nonnegative, got {self.ramp_time!r}")

    @property
    def in_gap(self) -> bool:
        return self.frequency < 1.0


def driving_value(d: Driving, t):
    """Boundary displacement at time ``t``: ramp(t) * A * sin(Omega t)."""
    t = np.asarray(t, dtype=float)
    if d.ramp_time > 0:
        ramp = np.minimum(t, d.ramp_time) / d.ramp_time
    else:
        ramp = 1.0
    out = ramp * d.amplitude * np.sin(d.frequency * t)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time partition t_k = k * dt, k = 0..n_steps."""

    dt: float = 0.05
    horizon: float = 200.0
    n_steps: int = field(init=False)

    def __post_init__(self):
        if not self.dt > 0 or not math.isfinite(self.dt):
            raise ValidationError("dt", f"must be positive, got {self.dt!r}")
        if not self.horizon > 0 or not math.isfinite(self.horizon):
            raise ValidationError("horizon", f"must be positive, got {self.horizon!r}")
        m = int(round(self.horizon / self.dt))
        if m < 2:
            raise ValidationError("horizon", "must span at least two time steps")
        object.__setattr__(self, "n_steps", m)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt
