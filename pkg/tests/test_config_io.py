import numpy as np
import pytest

from dsgchain import csvio
from dsgchain.config import DEFAULTS, build_config, expand_range, load_config
from dsgchain.energy import energy_record
from dsgchain.errors import ParseError, ValidationError
from dsgchain.experiments import SweepPoint, SweepResult, Threshold
from dsgchain.integrator import run_simulation
from dsgchain.model import ChainParams, Driving, PotentialKind, TimeGrid

PAPER_DEFAULTS = {
    "coupling": 4.0,
    "n_nodes": 200,
    "dt": 0.05,
    "horizon": 200.0,
    "ramp_time": 50.0,
    "newton_tol": 1e-4,
}


def test_defaults_table():
    for key, value in PAPER_DEFAULTS.items():
        assert DEFAULTS[key] == value
    cfg = build_config()
    assert cfg.params == ChainParams(200, 4.0, 0.0, PotentialKind.DOUBLE_SINE_GORDON)
    assert cfg.grid.dt == 0.05 and cfg.grid.horizon == 200.0 and cfg.grid.n_steps == 4000
    assert cfg.driving.ramp_time == 50.0
    assert cfg.newton_tol == 1e-4
    assert cfg.max_newton_iters == 50


def test_minimal_file(tmp_path):
    path = tmp_path / "fig3.yaml"
    path.write_text("potential: double-sine-gordon\namplitude: 1.04\nfrequency: 0.9\n")
    cfg = load_config(path)
    assert cfg.driving == Driving(1.04, 0.9, 50.0)
    assert cfg.params.coupling == 4.0 and cfg.params.n_nodes == 200
    assert cfg.grid == TimeGrid(0.05, 200.0)


def test_negative_dt_names_key(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("dt: -1\n")
    with pytest.raises(ValidationError) as info:
        load_config(path)
    assert info.value.key == "dt"


@pytest.mark.parametrize(
    "text, key",
    [
        ("n_nodes: 1\n", "n_nodes"),
        ("potential: quartic\n", "potential"),
        ("n_nodes: 3.5\n", "n_nodes"),
        ("coupling: abc\n", "coupling"),
        ("bogus: 1\n", "bogus"),
        ("sweep:\n  amplitudes: [1.0, 0.9]\n", "sweep.amplitudes"),
        ("sweep:\n  dampings: []\n", "sweep.dampings"),
        ("workers: 0\n", "workers"),
    ],
)
def test_validation_errors(tmp_path, text, key):
    path = tmp_path / "c.yaml"
    path.write_text(text)
    with pytest.raises(ValidationError) as info:
        load_config(path)
    assert info.value.key == key


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_config(tmp_path / "nope.yaml")


def test_malformed_file_reports_line(tmp_path):
    path = tmp_path / "m.yaml"
    path.write_text("amplitude: 1.0\nfrequency: [0.9\n")
    with pytest.raises(ParseError) as info:
        load_config(path)
    assert info.value.line is not None and info.value.line >= 2


def test_non_mapping(tmp_path):
    path = tmp_path / "l.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ParseError):
        load_config(path)


def test_sweep_lists(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(
        "sweep:\n"
        "  amplitudes: {start: 0.95, stop: 1.15, step: 0.01}\n"
        "  frequencies: [0.5, 0.7, 0.9]\n"
        "sweep.dampings: [0, 0.01]\n"
    )
    cfg = load_config(path)
    assert cfg.amplitudes.size == 21
    assert cfg.amplitudes[0] == 0.95 and cfg.amplitudes[-1] == 1.15
    assert cfg.amplitudes[9] == 1.04
    assert cfg.frequencies.tolist() == [0.5, 0.7, 0.9]
    assert cfg.dampings.tolist() == [0.0, 0.01]
    spec = cfg.sweep_spec("surface")
    assert spec.frequencies.tolist() == [0.5, 0.7, 0.9] and spec.dampings.tolist() == [0.0]
    spec = cfg.sweep_spec("damping")
    assert spec.frequencies.tolist() == [0.9] and spec.dampings.tolist() == [0.0, 0.01]


def test_expand_range():
    np.testing.assert_allclose(expand_range("k", {"start": 0.2, "stop": 1.0, "step": 0.05}),
                               np.linspace(0.2, 1.0, 17))
    assert expand_range("k", 2.5).tolist() == [2.5]
    with pytest.raises(ValidationError):
        expand_range("k", {"start": 1.0, "stop": 2.0})


@pytest.fixture
def tiny_traj():
    return run_simulation(ChainParams(3, 4.0, 0.0), Driving(0.0), TimeGrid(0.5, 1.0))


def test_zero_trajectory_csv(tmp_path, tiny_traj):
    path = tmp_path / "traj.csv"
    csvio.write_trajectory_csv(tiny_traj, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,u_0,u_1,u_2,u_3"
    assert len(lines) == 4
    header, data = csvio.read_table(path)
    np.testing.assert_array_equal(data[:, 1:], 0.0)
    np.testing.assert_array_equal(data[:, 0], [0.0, 0.5, 1.0])


def test_trajectory_round_trip_exact(tmp_path):
    traj = run_simulation(ChainParams(12), Driving(1.3, 0.9, 1.0), TimeGrid(0.05, 3.0))
    path = tmp_path / "t.csv"
    csvio.write_trajectory_csv(traj, path)
    _, data = csvio.read_table(path)
    np.testing.assert_array_equal(data[:, 1:], traj.states)
    assert path.read_bytes().count(b"\r") == 0


def test_energy_csv_modes(tmp_path):
    traj = run_simulation(ChainParams(6), Driving(1.3, 0.9, 1.0), TimeGrid(0.05, 1.0))
    rec = energy_record(traj)
    csvio.write_energy_csv(rec, tmp_path / "n.csv")
    csvio.write_energy_csv(rec, tmp_path / "w.csv", wide=True)
    hn, dn = csvio.read_table(tmp_path / "n.csv")
    hw, dw = csvio.read_table(tmp_path / "w.csv")
    assert hn == ["t", "E"]
    assert hw == ["t", "E"] + [f"H_{i}" for i in range(1, 6)]
    np.testing.assert_array_equal(dn[:, 1], rec.total)
    np.testing.assert_array_equal(dw[:, 2:], rec.local)
    assert dn.shape[0] == traj.grid.n_steps - 1


def test_sweep_csv_round_trip(tmp_path):
    pts = [
        SweepPoint(0.9, 1.03, 0.0, 669.978230432518, True, 0.0554444),
        SweepPoint(0.9, 1.04, 0.0, float("nan"), False, float("nan")),
    ]
    res = SweepResult(pts, [Threshold(0.9, 0.0, 1.035), Threshold(0.8, 0.0, None)])
    csvio.write_sweep_csv(res, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "omega,amplitude,gamma,E_T,converged,max_node_amplitude"
    assert len(lines) == 3
    back = csvio.read_sweep_csv(tmp_path / "s.csv")
    assert back[0] == pts[0]
    assert not back[1].converged and np.isnan(back[1].energy)
    csvio.write_thresholds_csv(res, tmp_path / "th.csv")
    assert csvio.read_thresholds_csv(tmp_path / "th.csv") == res.thresholds


def test_seventeen_digits():
    assert csvio.fmt(0.1) == "0.10000000000000001"
    assert float(csvio.fmt(np.pi)) == np.pi
