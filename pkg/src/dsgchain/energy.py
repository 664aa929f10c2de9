"""Discrete energy bookkeeping for trajectories of the implicit scheme.

Local energies pair the forward time difference between levels k and k+1
with gradient terms averaged over those same two levels, and a potential
averaged over them as well.  With this window the total energy telescopes
exactly against the scheme, so ``power_balance_residual`` vanishes up to
the Newton tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _pykernels
from .errors import IndexOutOfRange
from .integrator import Trajectory
from .model import eval_potential


@dataclass(frozen=True)
class EnergyRecord:
    """``local[k-1, n-1]`` is H_n^k and ``total[k-1]`` is E^k, for k = 1..M-1."""

    local: np.ndarray
    total: np.ndarray
    integrated: float
    dt: float

    @property
    def times(self):
        return np.arange(1, self.total.size + 1) * self.dt


def _check_k(traj, k, lo=1):
    m = traj.grid.n_steps
    if not lo <= k <= m - 1:
        raise IndexOutOfRange(f"time index {k} outside {lo}..{m - 1}")


def _grad_sq(traj, levels):
    # (delta_x u_j^l)^2 for j = 0..N-1 at the requested levels
    u = traj.states[levels]
    return (traj.params.coupling * np.diff(u, axis=-1)) ** 2


def _local_block(traj, ks):
    """H_n^k for every interior n and every k in ``ks`` (array of indices)."""
    s = traj.states
    dt = traj.grid.dt
    kind = traj.params.potential
    kinetic = ((s[ks + 1, 1:-1] - s[ks, 1:-1]) / dt) ** 2
    g = _grad_sq(traj, ks) + _grad_sq(traj, ks + 1)  # summed over l = k, k+1
    gradient = (g[:, :-1] + g[:, 1:]) / 4.0  # j = n-1 and j = n
    pot = 0.5 * (eval_potential(kind, s[ks + 1, 1:-1]) + eval_potential(kind, s[ks, 1:-1]))
    return 0.5 * (kinetic + gradient) + pot


def _total_block(traj, ks):
    g0 = _grad_sq(traj, ks)[:, 0] + _grad_sq(traj, ks + 1)[:, 0]
    return _local_block(traj, ks).sum(axis=1) + 0.5 * g0 / 4.0


def local_energy(traj: Trajectory, n: int, k: int) -> float:
    """H_n^k for an interior node ``n`` at time index ``k``."""
    N = traj.params.n_nodes
    if not 1 <= n <= N - 1:
        raise IndexOutOfRange(f"node index {n} outside 1..{N - 1}")
    _check_k(traj, k)
    return float(_local_block(traj, np.array([k]))[0, n - 1])


def total_energy(traj: Trajectory, k: int) -> float:
    """E^k: interior local energies plus the left boundary coupling term."""
    _check_k(traj, k)
    return float(_total_block(traj, np.array([k]))[0])


def total_energies(traj: Trajectory) -> np.ndarray:
    """E^k for k = 1..M-1."""
    return _total_block(traj, np.arange(1, traj.grid.n_steps))


def integrated_energy(traj: Trajectory) -> float:
    """Riemann sum of E^k * dt over k = 1..M-1."""
    return float(total_energies(traj).sum() * traj.grid.dt)


def energy_record(traj: Trajectory) -> EnergyRecord:
    ks = np.arange(1, traj.grid.n_steps)
    local = _local_block(traj, ks)
    g0 = _grad_sq(traj, ks)[:, 0] + _grad_sq(traj, ks + 1)[:, 0]
    total = local.sum(axis=1) + 0.5 * g0 / 4.0
    return EnergyRecord(local, total, float(total.sum() * traj.grid.dt), traj.grid.dt)


BOUNDARY_VARIANTS = ("endpoint", "averaged")


def _balance(traj, ks, variant):
    s = traj.states
    dt = traj.grid.dt
    c = traj.params.coupling
    gamma = traj.params.damping
    e = _total_block(traj, np.concatenate(([ks[0] - 1], ks)))
    rate = np.diff(e) / dt
    vel = (s[ks + 1] - s[ks - 1]) / (2.0 * dt)
    grad0 = 0.5 * c * ((s[ks + 1, 1] - s[ks + 1, 0]) + (s[ks - 1, 1] - s[ks - 1, 0]))
    if variant == "endpoint":
        v0 = vel[:, 0]
    elif variant == "averaged":
        v0 = 0.5 * (vel[:, 0] + vel[:, 1])
    else:
        raise ValueError(f"unknown boundary variant {variant!r}; use one of {BOUNDARY_VARIANTS}")
    flux = -c * grad0 * v0 - gamma * np.sum(vel[:, 1:-1] ** 2, axis=1)
    return rate - flux, e[1:]


def power_balance_residual(traj: Trajectory, k: int, variant="endpoint") -> float:
    """Discrete energy rate minus boundary inflow and damping loss at level k.

    ``variant="endpoint"`` uses the boundary velocity of node 0 alone (the
    exact balance of this scheme); ``"averaged"`` uses its average with
    node 1.
    """
    _check_k(traj, k, lo=2)
    res, _ = _balance(traj, np.array([k]), variant)
    return float(res[0])


def power_balance_residuals(traj: Trajectory, variant="endpoint"):
    """Residuals and E^k for every k = 2..M-1, as two arrays."""
    return _balance(traj, np.arange(2, traj.grid.n_steps), variant)


def kinetic_identity_gap(u_prev, u_curr, u_next, dt):
    """Change in discrete kinetic energy minus acceleration times velocity times dt."""
    lhs = 0.5 * ((u_next - u_curr) / dt) ** 2 - 0.5 * ((u_curr - u_prev) / dt) ** 2
    accel = (u_next - 2.0 * u_curr + u_prev) / (dt * dt)
    vel = (u_next - u_prev) / (2.0 * dt)
    return lhs - accel * vel * dt


def potential_identity_gap(kind, u_prev, u_curr, u_next, dt):
    """Change in time-averaged potential minus the scheme's force term times velocity times dt."""
    lhs = 0.5 * (eval_potential(kind, u_next) + eval_potential(kind, u_curr)) - 0.5 * (
        eval_potential(kind, u_curr) + eval_potential(kind, u_prev)
    )
    force = _pykernels.difference_quotient(kind, np.asarray(u_next, float), np.asarray(u_prev, float))
    vel = (u_next - u_prev) / (2.0 * dt)
    return lhs - force * vel * dt
