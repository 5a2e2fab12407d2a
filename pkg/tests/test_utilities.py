"""
Tests for the shared velocity spectrum, sweep runner, writers and run logger
"""
import json

import numpy as np
import pytest

from cli.outputs import write_report, write_table
from utilities import SimulationLogger, VelocitySpectrum, default_workers, run_cells
from utilities.errors import DomainError
from utilities.sweep_runner import WORKERS_ENV


def test_velocity_nodes():
    spec = VelocitySpectrum()
    v, w = spec.nodes()
    assert len(v) == 9
    assert np.all((v > spec.v_min) & (v < spec.v_max))
    assert np.all(np.diff(v) > 0)
    assert w.sum() == pytest.approx(1.0)
    assert np.dot(v, w) == pytest.approx(4.0, abs=0.1)


def test_flux_weighting_shifts_mean_up():
    v, density = VelocitySpectrum().nodes()
    _, flux = VelocitySpectrum(weighting="flux").nodes()
    assert np.dot(v, flux) > np.dot(v, density)


def test_single_velocity():
    v, w = VelocitySpectrum.single(4.0).nodes()
    np.testing.assert_allclose(v, [4.0])
    np.testing.assert_allclose(w, [1.0])


@pytest.mark.parametrize("kwargs", [{"sigma": 0.0}, {"v_min": 5.0, "v_max": 4.0}, {"weighting": "x"}])
def test_invalid_velocity_spectrum(kwargs):
    with pytest.raises(DomainError):
        VelocitySpectrum(**kwargs)


def test_run_cells_keeps_order():
    cells = list(range(50))
    assert run_cells(lambda c: c * c, cells, workers=8) == [c * c for c in cells]
    assert run_cells(lambda c: c + 1, [], workers=4) == []


def test_default_workers_from_environment(monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert default_workers() == 3
    monkeypatch.setenv(WORKERS_ENV, "many")
    assert default_workers() >= 1


def test_table_uses_significant_digits(tmp_path):
    path = write_table([{"a": 1.0 / 3.0, "b": 2}], ["b", "a"], tmp_path, "t")
    assert path.read_text() == "b,a\n2,0.333333333\n"


def test_report_maps_nan_to_null(tmp_path):
    path = write_report({"x": float("nan"), "y": [np.float64(2.0 / 3.0)]}, tmp_path, "r")
    data = json.loads(path.read_text())
    assert data == {"x": None, "y": [0.666666667]}


def test_logger_records_events(tmp_path):
    logger = SimulationLogger({"enabled": False})
    logger.log_study_start("eigen", {"n_states": 4})
    logger.log_sweep("eigen", 10, 2, 0.5)
    logger.log_output("eigen", "out/eigen.csv")
    summary = logger.get_summary()
    assert summary["total_events"] == 3
    assert summary["event_counts"]["sweep"] == 1
    saved = logger.save_logs(str(tmp_path / "run_log.json"))
    with open(saved) as f:
        assert len(json.load(f)["events"]) == 3
