"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--nodes 200] [--horizon 20] [--repeat 3]

Reports wall time per full simulation and per tridiagonal solve for each
available backend, plus the largest state difference between them.
"""

import argparse
import time

import numpy as np

from dsgchain import _backend
from dsgchain.integrator import run_simulation
from dsgchain.model import ChainParams, Driving, PotentialKind, TimeGrid


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=200)
    ap.add_argument("--horizon", type=float, default=20.0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    params = ChainParams(args.nodes, 4.0, 0.0, PotentialKind.DOUBLE_SINE_GORDON)
    drv = Driving(1.04, 0.9, 50.0)
    grid = TimeGrid(0.05, args.horizon)
    rng = np.random.default_rng(0)
    n = args.nodes + 1
    system = (rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n) + 4, rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n))

    print(f"N={args.nodes}, steps={grid.n_steps}, backends={sorted(_backend.BACKENDS)}")
    results = {}
    for name, kernels in sorted(_backend.BACKENDS.items()):
        t_sim, traj = best_of(lambda: run_simulation(params, drv, grid, backend=name), args.repeat)
        t_solve, _ = best_of(lambda: [kernels.crout_solve(*system) for _ in range(100)], args.repeat)
        results[name] = (t_sim, traj)
        iters = int(traj.newton_iteration_counts.sum())
        print(f"{name:>9}: simulation {t_sim * 1e3:9.1f} ms   "
              f"solve {t_solve * 1e4:8.2f} us   Newton iterations {iters}")
    if len(results) == 2:
        diff = np.max(np.abs(results["compiled"][1].states - results["python"][1].states))
        print(f"speed-up {results['python'][0] / results['compiled'][0]:.1f}x, max |state diff| {diff:.2e}")


if __name__ == "__main__":
    main()
