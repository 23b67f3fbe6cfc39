"""
Unit tests for PLY clouds, OBJ meshes, model files and trial reports.
"""
import csv
import json

import numpy as np
import pytest

from src.errors import CloudFormatError, MeshFormatError, ModelFileError
from src.geometry import screw_from_point_dir
from src.io.model_file import MAGIC, load_model, save_model
from src.io.obj import load_mesh, write_obj
from src.io.ply import load_cloud, save_cloud, score_colors
from src.io.reports import (TRIAL_HEADER, plot_histogram, write_histogram_csv,
                            write_object_table_csv, write_report_json, write_trial_csv)
from src.models.geometry import PointCloud
from src.models.results import TrialReport
from src.scoring import TrialScorer, histogram
from src.surrogate import MlpModel
from src.synthetic import box_mesh


@pytest.fixture
def cloud():
    pts = np.array([[0.0, 0.0, 0.0], [0.1, 0.0, 0.0], [0.0, 0.2, 0.05]])
    normals = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    return PointCloud(pts, normals)


@pytest.fixture
def reports():
    screw = screw_from_point_dir([0.1, 0.0, 0.0], [0, 0, 1])
    return [
        TrialReport("box", screw, 0.95, [0.3, 0.2], 10, 100, precision=0.8, spearman=None,
                    screw_kind="edge", trial_index=0, wall_time=1.5),
        TrialReport("box", screw, float("nan"), [], 10, 100, screw_kind="axis", trial_index=1,
                    error="object exceeds gripper opening"),
    ]


class TestPly:
    """Tests for ASCII PLY clouds."""

    def test_round_trip_with_scores(self, cloud, tmp_path):
        path = save_cloud(cloud, tmp_path / "c.ply", scores=[0.0, 0.5, 1.0])
        loaded, scores = load_cloud(path)
        assert np.allclose(loaded.points, cloud.points, atol=1e-6)
        assert np.allclose(loaded.normals, cloud.normals, atol=1e-6)
        assert np.allclose(scores, [0.0, 0.5, 1.0])

    def test_no_quality_column_without_scores(self, tmp_path):
        path = save_cloud(PointCloud(np.zeros((2, 3))), tmp_path / "c.ply")
        text = path.read_text()
        assert "quality" not in text
        assert "nx" not in text
        loaded, scores = load_cloud(path)
        assert scores is None
        assert loaded.normals is None

    def test_score_colors(self):
        assert score_colors([0.5]).tolist() == [[127, 0, 128]]
        assert score_colors([0.0, 1.0]).tolist() == [[0, 0, 255], [255, 0, 0]]

    def test_header_layout(self, cloud, tmp_path):
        lines = save_cloud(cloud, tmp_path / "c.ply", scores=[0, 0, 1]).read_text().splitlines()
        assert lines[:3] == ["ply", "format ascii 1.0", "element vertex 3"]
        assert "property float quality" in lines
        assert lines[-1].endswith("255 0 0")

    def test_missing_magic(self, tmp_path):
        path = tmp_path / "bad.ply"
        path.write_text("format ascii 1.0\nend_header\n")
        with pytest.raises(CloudFormatError, match="magic"):
            load_cloud(path)

    def test_binary_rejected(self, tmp_path):
        path = tmp_path / "bad.ply"
        path.write_text("ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n")
        with pytest.raises(CloudFormatError, match="ASCII"):
            load_cloud(path)

    def test_count_mismatch(self, tmp_path):
        path = tmp_path / "bad.ply"
        path.write_text("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\n"
                        "property float y\nproperty float z\nend_header\n0 0 0\n")
        with pytest.raises(CloudFormatError, match="declares 2 vertices"):
            load_cloud(path)

    def test_zero_normal(self, tmp_path):
        path = tmp_path / "bad.ply"
        path.write_text("ply\nformat ascii 1.0\nelement vertex 1\n"
                        + "".join(f"property float {n}\n" for n in ("x", "y", "z", "nx", "ny", "nz"))
                        + "end_header\n0 0 0 0 0 0\n")
        with pytest.raises(CloudFormatError, match="zero-length"):
            load_cloud(path)


class TestObj:
    """Tests for Wavefront OBJ meshes."""

    def test_cube_round_trip(self, tmp_path):
        path = write_obj(box_mesh((0.1, 0.2, 0.3), name="cube"), tmp_path / "cube.obj")
        mesh = load_mesh(path)
        assert len(mesh) == 12
        assert mesh.name == "cube"
        assert np.allclose(mesh.bounds[1], [0.05, 0.1, 0.3])

    def test_quads_are_fan_split(self, tmp_path):
        path = tmp_path / "quad.obj"
        path.write_text("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 2 0\n"
                        "f 1/1 2/2 3/3 4/4\nf -3 -2 -1\n")
        mesh = load_mesh(path)
        assert len(mesh) == 3
        assert mesh.triangles[:2].tolist() == [[0, 1, 2], [0, 2, 3]]
        assert mesh.triangles[2].tolist() == [2, 3, 4]

    def test_degenerate_triangles_dropped(self, tmp_path):
        path = tmp_path / "d.obj"
        path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\nf 1 2 3\nf 1 2 4\n")
        assert len(load_mesh(path)) == 1

    def test_no_faces(self, tmp_path):
        path = tmp_path / "empty.obj"
        path.write_text("v 0 0 0\n")
        with pytest.raises(MeshFormatError, match="no faces"):
            load_mesh(path)

    def test_zero_index(self, tmp_path):
        path = tmp_path / "zero.obj"
        path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n")
        with pytest.raises(MeshFormatError, match="start at 1"):
            load_mesh(path)


class TestModelFile:
    """Tests for binary model weights."""

    @pytest.fixture
    def model(self):
        model = MlpModel(input_dim=12, hidden_width=8, n_hidden=3, seed=4)
        model.buffers["running_mean1"] += 0.25
        return model

    def test_round_trip_is_bit_identical(self, model, tmp_path):
        loaded = load_model(save_model(model, tmp_path / "m.bin"))
        assert loaded.describe() == model.describe()
        for store, other in ((model.params, loaded.params), (model.buffers, loaded.buffers)):
            for name in store:
                assert np.array_equal(store[name], other[name])
        X = np.random.default_rng(0).normal(size=(5, 12))
        assert np.array_equal(model.predict(X), loaded.predict(X))

    def test_flags_survive(self, tmp_path):
        model = MlpModel(input_dim=15, hidden_width=8, n_hidden=2, norm="layer", skip=False)
        loaded = load_model(save_model(model, tmp_path / "m.bin"))
        assert loaded.norm == "layer"
        assert loaded.skip is False
        assert loaded.input_dim == 15

    def test_wrong_magic(self, model, tmp_path):
        path = save_model(model, tmp_path / "m.bin")
        blob = bytearray(path.read_bytes())
        blob[:4] = b"XXXX"
        path.write_bytes(bytes(blob))
        with pytest.raises(ModelFileError, match="magic"):
            load_model(path)

    def test_truncated(self, model, tmp_path):
        path = save_model(model, tmp_path / "m.bin")
        path.write_bytes(path.read_bytes()[:-1])
        with pytest.raises(ModelFileError, match="truncated while reading"):
            load_model(path)

    def test_trailing_bytes(self, model, tmp_path):
        path = save_model(model, tmp_path / "m.bin")
        path.write_bytes(path.read_bytes() + b"\0")
        with pytest.raises(ModelFileError, match="trailing"):
            load_model(path)

    def test_header_starts_with_magic(self, model, tmp_path):
        assert save_model(model, tmp_path / "m.bin").read_bytes()[:4] == MAGIC


class TestReports:
    """Tests for trial report files."""

    def test_trial_csv(self, reports, tmp_path):
        path = write_trial_csv(reports, tmp_path / "trials.csv")
        rows = list(csv.reader(path.open()))
        assert rows[0] == TRIAL_HEADER
        assert rows[1][9] == "0.950000"
        assert rows[1][13] == "n/a"
        assert rows[2][-1] == "object exceeds gripper opening"

    def test_trial_csv_is_stable(self, reports, tmp_path):
        first = write_trial_csv(reports, tmp_path / "a.csv").read_bytes()
        reports[0].wall_time = 99.0
        assert write_trial_csv(reports, tmp_path / "b.csv").read_bytes() == first

    def test_report_json(self, reports, tmp_path):
        scored = TrialScorer().score(reports)
        path = write_report_json(reports, scored, tmp_path / "trials.json")
        payload = json.loads(path.read_text())
        assert payload["summary"]["failed_trials"] == 1
        assert payload["trials"][0]["wall_time"] == 1.5
        assert len(payload["trials"]) == 2

    def test_histogram_csv(self, tmp_path):
        path = write_histogram_csv(histogram([0.97]), tmp_path / "h.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "bin_lo,bin_hi,count"
        assert lines[1] == "0.00,0.05,0"
        assert lines[-1] == "0.95,1.00,1"

    def test_object_table(self, reports, tmp_path):
        table = TrialScorer().score(reports)["per_object"]
        lines = write_object_table_csv(table, tmp_path / "o.csv").read_text().splitlines()
        assert lines[1] == "box,1,0.950000,0.950000"

    def test_plot_histogram(self, tmp_path):
        pytest.importorskip("matplotlib")
        path = plot_histogram(histogram([0.2, 0.9, 0.95]), tmp_path / "h.png")
        assert path.read_bytes()[:4] == b"\x89PNG"
