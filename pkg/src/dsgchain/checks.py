"""Self-checks run by ``dsgchain check``: fast invariants of a clean build."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _backend
from .energy import kinetic_identity_gap, potential_identity_gap, power_balance_residuals, total_energies
from .errors import SingularMatrix
from .integrator import run_from_states, run_simulation
from .model import ChainParams, Driving, PotentialKind, TimeGrid, eval_potential, eval_potential_deriv
from .tridiag import TridiagonalSystem, crout_solve


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def check_potential_derivatives():
    u = np.linspace(-10, 10, 2001)
    h = 1e-6
    worst = 0.0
    for kind in PotentialKind:
        fd = (eval_potential(kind, u + h) - eval_potential(kind, u - h)) / (2 * h)
        # the phi^6 polynomial grows fast; compare relative to its size
        scale = np.maximum(1.0, np.abs(eval_potential_deriv(kind, u)))
        worst = max(worst, float(np.max(np.abs(fd - eval_potential_deriv(kind, u)) / scale)))
    return CheckResult("potential derivatives vs finite differences", worst <= 1e-6, f"max err {worst:.2e}")


def check_crout(n_systems=200, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_systems):
        n = int(rng.integers(2, 200))
        sub, sup = rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n - 1)
        diag = rng.uniform(-1, 1, n) + 4.0
        system = TridiagonalSystem(sub, diag, sup, rng.uniform(-1, 1, n))
        dense = np.linalg.solve(system.dense(), system.rhs)
        worst = max(worst, float(np.max(np.abs(crout_solve(system) - dense))))
    try:
        pivoted = crout_solve(TridiagonalSystem([1.0], [0.0, 1.0], [1.0], [2.0, 3.0]))
        pivot_ok = np.allclose(pivoted, [1.0, 2.0])
    except SingularMatrix:
        pivot_ok = False
    ok = worst <= 1e-10 and pivot_ok
    return CheckResult("Crout solve vs dense elimination", ok, f"max diff {worst:.2e}, zero-pivot ok={pivot_ok}")


def check_identities(n_triples=10_000, seed=1):
    rng = np.random.default_rng(seed)
    up, uc, un = rng.uniform(-3, 3, (3, n_triples))
    dt = 0.05
    kin = float(np.max(np.abs(kinetic_identity_gap(up, uc, un, dt))) / (1 + np.max(((un - uc) / dt) ** 2)))
    pot = max(
        float(np.max(np.abs(potential_identity_gap(kind, up, uc, un, dt))))
        for kind in PotentialKind
    )
    ok = kin <= 1e-12 and pot <= 1e-12
    return CheckResult("discrete kinetic/potential identities", ok, f"kinetic {kin:.1e}, potential {pot:.1e}")


def seeded_profile(n_nodes, height=0.8, width=None):
    """Smooth bump satisfying both boundary rows (u_0 = 0, u_N = u_{N-1})."""
    x = np.arange(n_nodes + 1, dtype=float)
    width = width or n_nodes / 10
    u = height * np.exp(-(((x - n_nodes / 2) / width) ** 2))
    u[0] = 0.0
    u[-1] = u[-2]
    return u


def check_conservation(n_nodes=50, horizon=50.0):
    params = ChainParams(n_nodes, 4.0, 0.0, PotentialKind.DOUBLE_SINE_GORDON)
    u = seeded_profile(n_nodes)
    traj = run_from_states(u, u, params, Driving(0.0), TimeGrid(0.05, horizon))
    e = total_energies(traj)
    drift = float(np.max(np.abs(e - e[0])) / e[0])
    return CheckResult("energy conservation (undamped, undriven)", drift <= 1e-3, f"relative drift {drift:.2e}")


def check_power_balance():
    params = ChainParams(10, 2.0, 0.05, PotentialKind.DOUBLE_SINE_GORDON)
    traj = run_simulation(params, Driving(0.8, 0.9, 50.0), TimeGrid(0.05, 20.0))
    res, e = power_balance_residuals(traj, "endpoint")
    worst = float(np.max(np.abs(res) / (1 + e)))
    return CheckResult("discrete power balance", worst <= 1e-3, f"max scaled residual {worst:.2e}")


def check_backends():
    if len(_backend.BACKENDS) < 2:
        return CheckResult("compiled vs pure-Python kernels", True, "compiled kernels not built; skipped")
    params = ChainParams(40, 4.0, 0.01, PotentialKind.DOUBLE_SINE_GORDON)
    drv, grid = Driving(1.2, 0.9, 5.0), TimeGrid(0.05, 10.0)
    a = run_simulation(params, drv, grid, backend="compiled").states
    b = run_simulation(params, drv, grid, backend="python").states
    diff = float(np.max(np.abs(a - b)))
    return CheckResult("compiled vs pure-Python kernels", diff <= 1e-9, f"max diff {diff:.2e}")


ALL_CHECKS = (
    check_potential_derivatives,
    check_crout,
    check_identities,
    check_conservation,
    check_power_balance,
    check_backends,
)


def run_checks():
    return [check() for check in ALL_CHECKS]
