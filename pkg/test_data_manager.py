import json

import pandas as pd
import pytest

from core.data_manager import DataManager
from core.errors import ParameterError
from core.model import ModelParams, get_unit_system


@pytest.fixture
def manager():
    return DataManager()


@pytest.fixture
def frame():
    return pd.DataFrame({"energy": [-1.0, 0.5], "n": [0, 1]})


def test_load_dimensionless_params(tmp_path, manager):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"variant": "R", "kappa": 1.0, "b": -0.5}))
    params, physical = manager.load_params(path)
    assert params == ModelParams("R", 1.0, -0.5, 0.0)
    assert physical is None


def test_physical_params_block(manager):
    si = get_unit_system("si")
    data = {"variant": "D", "physical": {"effective_mass": si.electron_mass, "g_factor": 2.0,
                                         "field": si.flux_quantum() / (2 * 3.141592653589793)}}
    params, physical = manager.params_from_dict(data)
    assert params.variant.value == "D"
    assert params.b == pytest.approx(1.0, rel=1e-12)
    assert params.gamma == pytest.approx(-1.0, rel=1e-12)
    assert physical["physical"]["units"] == "si"
    assert physical["energy_scale"] > 0


@pytest.mark.parametrize("data", [
    {"kappa": 1.0},
    {"variant": "R"},
    {"variant": "R", "kappa": 1.0, "mass": 2.0},
    {"variant": "R", "kappa": 1.0, "physical": {}},
    {"variant": "R", "physical": {"colour": "red"}},
    [1, 2],
])
def test_invalid_param_objects(manager, data):
    with pytest.raises(ParameterError):
        manager.params_from_dict(data)


def test_unreadable_param_files(tmp_path, manager):
    with pytest.raises(ParameterError):
        manager.load_params(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ParameterError):
        manager.load_params(broken)


def test_duplicate_result_names(tmp_path, manager, frame):
    assert manager.add_result("spectrum", frame, {"kappa": 1.0}) == "spectrum"
    assert manager.add_result("spectrum", frame.head(1), {"kappa": 2.0}) == "spectrum_1"
    first = json.loads(manager.export_result("spectrum", tmp_path / "a.json").read_text())
    second = json.loads(manager.export_result("spectrum_1", tmp_path / "b.json").read_text())
    assert (first["parameters"], len(first["records"])) == ({"kappa": 1.0}, 2)
    assert (second["parameters"], len(second["records"])) == ({"kappa": 2.0}, 1)


def test_export_csv_has_header_lines(tmp_path, manager, frame):
    name = manager.add_result("spectrum", frame, {"variant": "R", "kappa": 1.0}, {"path": "operator"})
    out = manager.export_result(name, tmp_path / "nested" / "levels.csv")
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# conventions: ")
    assert lines[1] == '# parameters: {"kappa": 1.0, "variant": "R"}'
    assert lines[2] == '# path: "operator"'
    assert lines[3] == "energy,n"
    pd.testing.assert_frame_equal(pd.read_csv(out, comment="#"), frame)


def test_export_json_envelope(tmp_path, manager, frame):
    name = manager.add_result("spectrum", frame, {"kappa": 1.0})
    out = manager.export_result(name, tmp_path / "levels.out", format="json")
    payload = json.loads(out.read_text())
    assert payload["parameters"] == {"kappa": 1.0}
    assert payload["records"] == [{"energy": -1.0, "n": 0}, {"energy": 0.5, "n": 1}]
    assert "conventions" in payload


def test_export_errors(tmp_path, manager, frame):
    with pytest.raises(ParameterError):
        manager.export_result("nothing", tmp_path / "x.csv")
    name = manager.add_result("spectrum", frame, {})
    with pytest.raises(ParameterError):
        manager.export_result(name, tmp_path / "x.xlsx")


def test_manifest_is_deterministic(tmp_path, manager):
    job = {"command": "spectrum", "n_max": 3}
    first = manager.write_manifest(tmp_path / "a.csv", job).read_bytes()
    second = manager.write_manifest(tmp_path / "a.csv", job).read_bytes()
    assert first == second
    assert json.loads(first)["job"] == job
