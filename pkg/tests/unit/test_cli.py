"""
Unit tests for the command-line interface

Runs subcommands through main() and checks exit codes, printed output
and written files.
"""
import json
import re

import numpy as np
import pytest
import yaml

from src.cli import main
from src.config import CONFIG_ENV_VAR
from src.dataset import pivot_edge
from src.io.dataset_csv import read_dataset_csv, write_dataset_csv
from src.io.model_file import load_model, save_model
from src.io.ply import load_cloud, save_cloud
from src.models.dataset import MetricSample
from src.models.geometry import AntipodalPair, PointCloud
from src.surrogate import MlpModel

COUPLE = ["metric", "--ci", "-0.5,0,0", "--cj", "0.5,0,0", "--screw", "0,0,0,0,0,1",
          "--mu", "0.3", "--fmax", "1"]


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    """Keep a developer's $SCREWGRASP_CONFIG out of the tests."""
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


@pytest.fixture
def write_config(tmp_path):
    def _write(data, name="config.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data))
        return str(path)
    return _write


@pytest.fixture
def block_cloud(tmp_path):
    """PLY of a 0.20 x 0.05 x 0.10 block resting on the table."""
    xs = np.linspace(-0.10, 0.10, 11)
    ys = np.linspace(-0.025, 0.025, 4)
    zs = np.linspace(0.0, 0.10, 6)
    pts = np.array([[x, y, z] for x in xs for y in ys for z in zs])
    return str(save_cloud(PointCloud(pts), tmp_path / "block.ply"))


@pytest.fixture
def model_file(tmp_path):
    return str(save_model(MlpModel(input_dim=12, hidden_width=8, n_hidden=2, seed=0),
                          tmp_path / "model.bin"))


class TestMain:
    """Tests for argument handling and exit codes."""

    def test_no_command_prints_help(self, capsys):
        """Test running without a subcommand."""
        assert main([]) == 0
        assert "gen-data" in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        """Test unknown subcommands are usage errors."""
        assert main(["launch"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_required_argument(self):
        """Test a missing required option is a usage error."""
        assert main(["metric", "--ci", "0,0,0"]) == 1

    def test_bad_vector(self):
        """Test malformed coordinates are usage errors."""
        assert main(["metric", "--ci", "0,0", "--cj", "1,0,0", "--screw", "0,0,0,0,0,1"]) == 1

    def test_bad_jobs(self):
        """Test --jobs must be positive."""
        assert main(["config", "--jobs", "0"]) == 1


class TestMetricCommand:
    """Tests for the metric subcommand."""

    def test_pure_couple(self, capsys):
        """Test a pure couple about the closing midpoint."""
        assert main(COUPLE + ["--no-gravity"]) == 0
        out = capsys.readouterr().out
        eta = float(re.search(r"eta = ([0-9.]+)", out).group(1))
        assert eta == pytest.approx(0.3, abs=1e-4)
        assert "Feasible draws: 1/1" in out

    def test_weight_too_heavy(self, capsys):
        """Test an unliftable object exits with the numerical code."""
        assert main(COUPLE) == 3
        assert "no feasible grasp" in capsys.readouterr().err

    def test_bad_screw(self):
        """Test a zero screw direction is a data error."""
        assert main(["metric", "--ci", "-0.5,0,0", "--cj", "0.5,0,0",
                     "--screw", "0,0,0,0,0,0", "--no-gravity"]) == 2


class TestConfigCommand:
    """Tests for the config subcommand."""

    def test_defaults_valid(self, capsys):
        """Test the built-in defaults validate."""
        assert main(["config"]) == 0
        out = capsys.readouterr().out
        assert "✓ <defaults> (0 errors, 0 warnings)" in out

    def test_dump(self, capsys):
        """Test --dump prints the effective YAML."""
        assert main(["config", "--dump"]) == 0
        dumped = capsys.readouterr().out.split("\n", 1)[1]
        assert "friction:" in dumped
        assert yaml.safe_load(dumped)["friction"]["mu_mean"] == 0.3

    def test_semantic_issue(self, write_config, capsys):
        """Test a config with an ERROR issue exits 1 with the issue listed."""
        path = write_config({"evaluation": {"top_k": 20, "top_m": 10}})
        assert main(["config", "--config", path]) == 1
        out = capsys.readouterr().out
        assert "✗" in out
        assert "ERROR" in out

    def test_unknown_key(self, write_config):
        """Test schema errors exit 1."""
        assert main(["config", "--config", write_config({"friction": {"mu": 0.3}})]) == 1


class TestScanCommand:
    """Tests for the scan subcommand."""

    def test_scan_builtin_shape(self, write_config, tmp_path, capsys):
        """Test a small scan is written as PLY."""
        cfg = write_config({"scan": {"width": 32, "height": 24}})
        out = tmp_path / "scan.ply"
        assert main(["scan", "--shape", "box", "--out", str(out), "--config", cfg]) == 0
        cloud, scores = load_cloud(out)
        assert len(cloud) > 0
        assert scores is None
        assert "Points:" in capsys.readouterr().out

    def test_scan_needs_a_source(self, tmp_path):
        """Test --mesh or --shape is required."""
        assert main(["scan", "--out", str(tmp_path / "s.ply")]) == 1


class TestTrainCommand:
    """Tests for the train subcommand."""

    def test_train_small_model(self, write_config, tmp_path):
        """Test a tiny model trains and loads back."""
        screw = pivot_edge(0.16, 0.17, 0.06)
        samples = [MetricSample(AntipodalPair.from_points([0.05, 0.0, z], [0.05, 0.06, z]),
                                screw, z, i / 7, 0)
                   for i, z in enumerate(np.linspace(0.0, 0.06, 8))]
        data = write_dataset_csv(samples, tmp_path / "train.csv")
        cfg = write_config({"train": {"hidden_width": 8, "n_hidden": 2, "batch_size": 4}})
        out = tmp_path / "model.bin"
        assert main(["train", "--data", str(data), "--out", str(out), "--epochs", "2",
                     "--config", cfg]) == 0
        model = load_model(out)
        assert model.hidden_width == 8
        assert model.n_hidden == 2

    def test_missing_data(self, tmp_path):
        """Test a missing dataset file is a data error."""
        assert main(["train", "--data", str(tmp_path / "none.csv"),
                     "--out", str(tmp_path / "m.bin")]) == 2


class TestRegionCommand:
    """Tests for the region subcommand."""

    def test_threshold_out_of_range(self, block_cloud, model_file):
        """Test --y-th outside [0, 1] is a usage error."""
        assert main(["region", "--cloud", block_cloud, "--screw", "0,0,0,0,0,1",
                     "--model", model_file, "--y-th", "1.1"]) == 1

    def test_region_outputs(self, block_cloud, model_file, tmp_path):
        """Test the region JSON and scored cloud."""
        out_json = tmp_path / "region.json"
        out_ply = tmp_path / "scored.ply"
        assert main(["region", "--cloud", block_cloud, "--screw", "0.1,0,0,0,0,1",
                     "--model", model_file, "--out-json", str(out_json),
                     "--out-ply", str(out_ply)]) == 0
        payload = json.loads(out_json.read_text())
        assert payload["y_th"] == 0.6
        assert len(payload["indices"]) == len(payload["scores"])
        assert all(s >= 0.6 for s in payload["scores"])
        cloud, scores = load_cloud(out_ply)
        assert len(scores) == len(cloud) == 264
        assert np.all((scores >= 0.0) & (scores <= 1.0))


class TestReproducibility:
    """Tests that fixed seeds give byte-identical command output."""

    @pytest.fixture
    def tiny_config(self, write_config):
        return write_config({
            "friction": {"n_samples": 2},
            "dataset": {"steps": 2, "res_u": 3, "res_v": 2},
            "train": {"hidden_width": 8, "n_hidden": 2, "batch_size": 4},
            "evaluation": {"res_u": 4, "res_v": 3, "top_k": 2, "top_m": 5},
            "scan": {"width": 32, "height": 24},
        })

    def test_pipeline_outputs_repeat(self, tiny_config, tmp_path):
        """Test gen-data, train and trials reproduce their files exactly."""
        for run in ("a", "b"):
            out = tmp_path / run
            assert main(["gen-data", "--out", str(out / "data"), "--config", tiny_config]) == 0
            assert main(["train", "--data", str(out / "data" / "train.csv"),
                         "--out", str(out / "model.bin"), "--epochs", "2",
                         "--config", tiny_config]) == 0
            assert main(["trials", "--model", str(out / "model.bin"), "--objects", "1",
                         "--screws", "2", "--out", str(out / "trials"),
                         "--config", tiny_config]) == 0

        for name in ("data/dataset.csv", "data/train.csv", "data/val.csv", "model.bin",
                     "trials/trials.csv", "trials/histogram.csv", "trials/objects.csv"):
            first = (tmp_path / "a" / name).read_bytes()
            assert first
            assert first == (tmp_path / "b" / name).read_bytes(), name
        assert len(read_dataset_csv(tmp_path / "a" / "data" / "dataset.csv")) == 4 * 6
