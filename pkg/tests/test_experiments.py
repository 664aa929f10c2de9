import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsgchain.errors import NoThreshold, ValidationError
from dsgchain.experiments import (
    SweepPoint,
    SweepSpec,
    amplitude_sweep,
    bifurcation_surface,
    damping_study,
    detect_threshold,
    run_grid,
)
from dsgchain.model import ChainParams, TimeGrid

from conftest import DSG

SMALL = dict(base=ChainParams(30, 4.0, 0.0, DSG), grid=TimeGrid(0.05, 10.0), ramp_time=2.0, probe_node=10)


def test_detect_threshold_flat():
    with pytest.raises(NoThreshold):
        detect_threshold([(1, 5), (2, 5), (3, 5)])


def test_detect_threshold_unique_jump():
    assert detect_threshold([(1.0, 1), (1.1, 1.2), (1.2, 50)]) == pytest.approx(1.15)


def test_detect_threshold_preconditions():
    with pytest.raises(ValueError):
        detect_threshold([(1.0, 1), (2.0, 10)])
    with pytest.raises(ValueError):
        detect_threshold([(1.0, 1), (0.5, 1), (2.0, 10)])
    failed = SweepPoint(0.9, 1.1, 0.0, float("nan"), False, float("nan"))
    ok = [SweepPoint(0.9, a, 0.0, e, True, 0.0) for a, e in ((1.0, 1.0), (1.2, 9.0))]
    with pytest.raises(ValueError):
        detect_threshold([ok[0], failed, ok[1]])


def test_detect_threshold_zero_energy_floor():
    # a zero energy is floored, not divided by
    assert detect_threshold([(0.0, 0.0), (0.1, 0.0), (0.2, 1e-6)]) == pytest.approx(0.15)


def test_jump_factor_is_configurable():
    pts = [(1.0, 1.0), (1.1, 1.5), (1.2, 3.5)]
    with pytest.raises(NoThreshold):
        detect_threshold(pts)
    assert detect_threshold(pts, jump_factor=2.0) == pytest.approx(1.15)


@given(st.lists(st.floats(1e-6, 1e6), min_size=3, max_size=30), st.floats(0.01, 1.0))
def test_threshold_brackets(energies, step):
    amps = np.arange(len(energies)) * step + 0.5
    try:
        a_s = detect_threshold(list(zip(amps, energies)))
    except NoThreshold:
        return
    i = np.searchsorted(amps, a_s)
    assert 0 < i < len(amps)
    assert amps[i - 1] < a_s < amps[i]


def test_spec_validation():
    with pytest.raises(ValidationError):
        SweepSpec([], [0.9], [0.0])
    with pytest.raises(ValidationError):
        SweepSpec([1.0, 1.0], [0.9], [0.0])
    with pytest.raises(ValidationError):
        SweepSpec([1.0], [0.9], [-0.1])
    with pytest.raises(ValidationError):
        SweepSpec([1.0], [0.9], [0.0], probe_node=500)
    spec = SweepSpec([1.0], [0.5, 0.9, 1.2], [0.0])
    assert spec.in_gap.tolist() == [True, True, False]


def test_amplitude_sweep_single_zero_amplitude():
    res = amplitude_sweep(SweepSpec([0.0], [0.9], [0.0], **SMALL))
    assert len(res.points) == 1
    p = res.points[0]
    assert p.converged and p.energy == 0.0 and p.max_node_amplitude == 0.0


def test_amplitude_sweep_requires_single_frequency():
    with pytest.raises(ValidationError):
        amplitude_sweep(SweepSpec([1.0], [0.8, 0.9], [0.0], **SMALL))


def test_points_in_spec_order_and_deterministic():
    spec = SweepSpec([0.5, 1.0, 1.5], [0.7, 0.9], [0.0, 0.02], **SMALL)
    serial = run_grid(spec, workers=1)
    parallel = run_grid(spec, workers=2)
    assert serial == parallel
    assert [(p.omega, p.gamma, p.amplitude) for p in serial] == [
        (om, g, a) for om in (0.7, 0.9) for g in (0.0, 0.02) for a in (0.5, 1.0, 1.5)
    ]


def test_failed_points_are_recorded():
    spec = SweepSpec([0.5, 3.0], [0.9], [0.0], max_newton_iters=1, newton_tol=1e-300, **SMALL)
    res = amplitude_sweep(spec)
    assert len(res.points) == 2
    assert not any(p.converged for p in res.points)
    assert np.isnan(res.points[0].energy)
    assert res.thresholds[0].amplitude is None


def test_surface_records_each_frequency():
    spec = SweepSpec([0.2, 0.4, 0.6], [0.5, 0.9], [0.0], **SMALL)
    res = bifurcation_surface(spec)
    assert len(res.points) == 6
    assert [t.omega for t in res.thresholds] == [0.5, 0.9]
    assert all(a is not None for _, a in res.threshold_curve)


def test_damping_study_single_gamma_reduces_to_sweep():
    spec = SweepSpec([0.5, 1.0, 1.5], [0.9], [0.0], **SMALL)
    assert damping_study(spec).points == amplitude_sweep(spec).points


def test_energy_nonnegative_recorded():
    res = amplitude_sweep(SweepSpec([0.5, 1.5], [0.9], [0.0], **SMALL))
    assert all(p.min_energy >= 0 for p in res.points)


@pytest.mark.slow
def test_damping_study_at_caption_frequency():
    """Fig. 9's caption frequency (0.9): energy falls with damping at every supratransmitting amplitude."""
    amps = np.round(np.arange(1.0, 2.0 + 1e-9, 0.01), 2)
    res = damping_study(SweepSpec(amps, [0.9], [0.0, 0.01, 0.02, 0.03]))
    thresholds = [t.amplitude for t in res.thresholds]
    assert all(a is not None for a in thresholds)
    assert all(x <= y for x, y in zip(thresholds, thresholds[1:]))
    energy = np.array([[p.energy for p in res.select(gamma=g)] for g in (0.0, 0.01, 0.02, 0.03)])
    above = amps > thresholds[0]
    assert np.all(np.diff(energy[:, above], axis=0) < 0)
