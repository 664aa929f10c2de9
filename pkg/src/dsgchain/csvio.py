"""CSV writers and readers.

Reals are written with 17 significant digits so doubles round-trip
exactly; files use UTF-8, LF line endings and always carry a header.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .energy import EnergyRecord
from .experiments import SweepPoint, SweepResult, Threshold
from .integrator import Trajectory


def fmt(x) -> str:
    return format(float(x), ".17g")


def _write(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_trajectory_csv(traj: Trajectory, path):
    n = traj.params.n_nodes
    header = ["t"] + [f"u_{j}" for j in range(n + 1)]
    times = traj.grid.times
    rows = ([fmt(t)] + [fmt(v) for v in state] for t, state in zip(times, traj.states))
    _write(path, header, rows)


def write_energy_csv(record: EnergyRecord, path, wide=False):
    header = ["t", "E"]
    if wide:
        header += [f"H_{n}" for n in range(1, record.local.shape[1] + 1)]
    rows = []
    for i, (t, e) in enumerate(zip(record.times, record.total)):
        row = [fmt(t), fmt(e)]
        if wide:
            row += [fmt(h) for h in record.local[i]]
        rows.append(row)
    _write(path, header, rows)


SWEEP_HEADER = ["omega", "amplitude", "gamma", "E_T", "converged", "max_node_amplitude"]


def write_sweep_csv(result: SweepResult, path):
    rows = (
        [fmt(p.omega), fmt(p.amplitude), fmt(p.gamma), fmt(p.energy),
         "true" if p.converged else "false", fmt(p.max_node_amplitude)]
        for p in result.points
    )
    _write(path, SWEEP_HEADER, rows)


def write_thresholds_csv(result: SweepResult, path):
    """One row per (omega, gamma); the threshold column is empty when none was found."""
    rows = (
        [fmt(t.omega), fmt(t.gamma), "" if t.amplitude is None else fmt(t.amplitude)]
        for t in result.thresholds
    )
    _write(path, ["omega", "gamma", "threshold"], rows)


def read_table(path):
    """Header and float matrix of a numeric CSV written by this module."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    return header, np.array(data, dtype=float).reshape(len(data), len(header))


def read_sweep_csv(path) -> list[SweepPoint]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            SweepPoint(float(r["omega"]), float(r["amplitude"]), float(r["gamma"]),
                       float(r["E_T"]), r["converged"] == "true", float(r["max_node_amplitude"]))
            for r in reader
        ]


def read_thresholds_csv(path) -> list[Threshold]:
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            Threshold(float(r["omega"]), float(r["gamma"]),
                      float(r["threshold"]) if r["threshold"] else None)
            for r in csv.DictReader(fh)
        ]


PLOT_TEMPLATE = '''"""Plot {csv_name} with matplotlib (generated by dsgchain)."""
import csv

import matplotlib.pyplot as plt

with open({csv_name!r}, encoding="utf-8") as fh:
    rows = list(csv.DictReader(fh))
x = [float(r[{x!r}]) for r in rows]
y = [float(r[{y!r}]) for r in rows]
plt.plot(x, y)
plt.xlabel({x!r})
plt.ylabel({y!r})
plt.savefig({png!r}, dpi=150)
'''


def write_plot_script(csv_path, x, y):
    """Emit a small standalone matplotlib script next to ``csv_path``."""
    csv_path = Path(csv_path)
    script = csv_path.with_name(f"plot_{csv_path.stem}.py")
    script.write_text(
        PLOT_TEMPLATE.format(csv_name=csv_path.name, x=x, y=y, png=f"{csv_path.stem}.png"),
        encoding="utf-8",
    )
    return script
