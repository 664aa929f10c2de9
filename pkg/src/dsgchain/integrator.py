"""Implicit energy-consistent time stepping of the driven chain.

Each step solves the nonlinear three-level scheme for ``u^{k+1}`` by Newton's
method; the Jacobian is tridiagonal and is factored with ``crout_solve``.
The per-step kernels live in ``_pykernels`` / ``_kernels``; this module
wraps them with typed inputs and error handling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend, _pykernels
from .errors import NewtonDiverged, SingularMatrix
from .model import ChainParams, Driving, TimeGrid, driving_value
from .tridiag import TridiagonalSystem, crout_solve

NEWTON_TOL = 1e-4
MAX_NEWTON_ITERS = 50


@dataclass
class SchemeState:
    u_prev: np.ndarray
    u_curr: np.ndarray
    step_index: int
    newton_tol: float = NEWTON_TOL
    max_newton_iters: int = MAX_NEWTON_ITERS

    def __post_init__(self):
        self.u_prev = np.asarray(self.u_prev, dtype=float)
        self.u_curr = np.asarray(self.u_curr, dtype=float)
        if self.u_prev.shape != self.u_curr.shape or self.u_curr.ndim != 1:
            raise ValueError("u_prev and u_curr must be vectors of equal length")


@dataclass(frozen=True)
class Trajectory:
    """Solution history; ``states[k]`` is the chain at time ``k * grid.dt``."""

    states: np.ndarray
    params: ChainParams
    driving: Driving
    grid: TimeGrid
    newton_iteration_counts: np.ndarray = field(repr=False)

    @property
    def times(self):
        return self.grid.times

    def node(self, n):
        return self.states[:, n]


def _boundary_value(driving, grid, k):
    return driving_value(driving, k * grid.dt)


def residual(u_next, state: SchemeState, params: ChainParams, driving: Driving, grid: TimeGrid):
    """Discrete equations evaluated at a candidate ``u^{k+1}``."""
    phi = _boundary_value(driving, grid, state.step_index + 1)
    return _pykernels.residual(
        np.asarray(u_next, dtype=float), state.u_curr, state.u_prev, phi,
        params.potential, params.coupling, params.damping, grid.dt,
    )


def assemble_jacobian(u_next, state: SchemeState, params: ChainParams, grid: TimeGrid,
                      driving: Driving | None = None) -> TridiagonalSystem:
    """Newton system ``J y = -f`` at the iterate ``u_next``.

    Without ``driving`` the boundary row of the right-hand side assumes an
    undriven chain.
    """
    u_next = np.asarray(u_next, dtype=float)
    sub, diag, sup = _pykernels.jacobian(
        u_next, state.u_prev, params.potential, params.coupling, params.damping, grid.dt
    )
    drv = driving if driving is not None else Driving(amplitude=0.0)
    f = residual(u_next, state, params, drv, grid)
    return TridiagonalSystem(sub, diag, sup, -f)


def newton_solve_step(state: SchemeState, params: ChainParams, driving: Driving, grid: TimeGrid,
                      return_iterations=False):
    """Advance one step; the update stops once ``||y||_2 < state.newton_tol``.

    Starts from the linear extrapolation ``2 u^k - u^{k-1}``.
    """
    k = state.step_index
    if not 1 <= k <= grid.n_steps - 1:
        raise ValueError(f"step index {k} outside 1..{grid.n_steps - 1}")
    u = 2.0 * state.u_curr - state.u_prev
    for it in range(1, state.max_newton_iters + 1):
        system = assemble_jacobian(u, state, params, grid, driving)
        try:
            y = crout_solve(system)
        except SingularMatrix as exc:
            raise SingularMatrix(str(exc), step=k + 1) from None
        u = u + y
        norm = float(np.linalg.norm(y))
        if not np.isfinite(norm):
            break
        if norm < state.newton_tol:
            return (u, it) if return_iterations else u
    raise NewtonDiverged(
        f"no convergence within {state.max_newton_iters} iterations", step=k + 1
    )


def run_from_states(u0, u1, params: ChainParams, driving: Driving, grid: TimeGrid, *,
                    newton_tol=NEWTON_TOL, max_newton_iters=MAX_NEWTON_ITERS,
                    backend=None) -> Trajectory:
    """Integrate from two given initial levels.

    ``run_simulation`` calls this with the rest state; tests and the
    ``check`` command use it to seed nonzero undriven profiles.
    """
    n = params.n_nodes
    m = grid.n_steps
    states = np.zeros((m + 1, n + 1))
    states[0] = u0
    states[1] = u1
    phi = np.ascontiguousarray(driving_value(driving, grid.times), dtype=float)
    iters = np.zeros(m + 1, dtype=np.int64)
    kernels = _backend.get(backend)
    status, step = kernels.advance(
        states, phi, params.potential.code, float(params.coupling), float(params.damping),
        float(grid.dt), float(newton_tol), int(max_newton_iters), iters,
    )
    if status == _pykernels.DIVERGED:
        raise NewtonDiverged(f"no convergence within {max_newton_iters} iterations", step=step)
    if status == _pykernels.SINGULAR:
        raise SingularMatrix("degenerate Jacobian", step=step)
    states.setflags(write=False)
    iters.setflags(write=False)
    return Trajectory(states, params, driving, grid, iters)


def run_simulation(params: ChainParams, driving: Driving, grid: TimeGrid, **kwargs) -> Trajectory:
    """Simulate the chain from rest under boundary driving.

    The first two levels vanish on the interior; their boundary entries
    follow the same Dirichlet/Neumann rows as every later level.
    """
    n = params.n_nodes
    u0 = np.zeros(n + 1)
    u0[0] = driving_value(driving, 0.0)
    u1 = np.zeros(n + 1)
    u1[0] = driving_value(driving, grid.dt)
    u0[n] = u0[n - 1]
    u1[n] = u1[n - 1]
    return run_from_states(u0, u1, params, driving, grid, **kwargs)
