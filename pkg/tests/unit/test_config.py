"""
Unit tests for configuration loading and ConfigValidator

Tests defaults, schema enforcement, the environment override and the
cross-field rules reported as validation issues.
"""
import numpy as np
import pytest
import yaml

from src.config import (CONFIG_ENV_VAR, RunConfig, from_dict, load_config, resolve_config_path,
                        schema_errors)
from src.errors import ConfigError
from src.models.results import Severity
from src.validators import ConfigValidator


@pytest.fixture
def validator():
    """Create a config validator instance."""
    return ConfigValidator()


@pytest.fixture
def write_config(tmp_path):
    """Write a mapping as YAML and return its path."""
    def _write(data, name="config.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data))
        return path
    return _write


class TestDefaults:
    """Tests for the built-in recipe constants."""

    def test_recipe_defaults(self):
        """Test the defaults match the documented recipe."""
        cfg = RunConfig()
        assert cfg.friction.mu_mean == 0.3
        assert cfg.friction.n_samples == 50
        assert cfg.pipeline.y_th == 0.6
        assert cfg.grid_res == (34, 19)
        assert cfg.train.epochs == 150
        assert cfg.train.batch_size == 150
        assert cfg.evaluation.top_k == 10
        assert cfg.evaluation.top_m == 100

    def test_builders(self):
        """Test model objects built from the sections."""
        cfg = RunConfig()
        assert cfg.gripper_geometry().max_opening == 0.08
        assert np.allclose(cfg.physics_model().gravity, [0, 0, -9.81])
        assert cfg.friction_model().rng_seed == cfg.seeds.data
        assert cfg.fge_config().top_m == 100

    def test_defaults_are_valid(self, validator):
        """Test the default config passes validation without issues."""
        result = validator.validate(RunConfig())
        assert result.valid
        assert set(result.counts.values()) == {0}

    def test_as_dict_round_trip(self):
        """Test a dumped config loads back unchanged."""
        cfg = RunConfig()
        assert from_dict(cfg.as_dict()).as_dict() == cfg.as_dict()


class TestLoading:
    """Tests for load_config and the schema."""

    def test_no_file_gives_defaults(self, monkeypatch):
        """Test loading without a path or environment variable."""
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        cfg = load_config()
        assert cfg.source == "<defaults>"

    def test_partial_override(self, write_config):
        """Test a file overrides only the keys it names."""
        path = write_config({"friction": {"mu_mean": 0.5}, "jobs": 4})
        cfg = load_config(str(path))
        assert cfg.friction.mu_mean == 0.5
        assert cfg.friction.mu_std == 0.05
        assert cfg.jobs == 4
        assert cfg.source == str(path)

    def test_environment_variable(self, write_config, monkeypatch):
        """Test $SCREWGRASP_CONFIG is used when no path is given."""
        path = write_config({"pipeline": {"y_th": 0.7}})
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        assert resolve_config_path(None) == path
        assert load_config().pipeline.y_th == 0.7

    def test_seed_override(self, monkeypatch):
        """Test --seed replaces every seed."""
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        cfg = load_config(seed=11)
        assert (cfg.seeds.data, cfg.seeds.train, cfg.seeds.eval) == (11, 11, 11)

    def test_unknown_key_rejected(self, write_config):
        """Test unknown keys are schema errors."""
        path = write_config({"friction": {"mu": 0.3}})
        with pytest.raises(ConfigError, match="friction"):
            load_config(str(path))

    def test_out_of_range_rejected(self):
        """Test schema ranges."""
        errors = schema_errors({"pipeline": {"y_th": 1.5}, "train": {"epochs": 0}})
        assert len(errors) == 2
        assert errors[0].startswith("pipeline.y_th")

    def test_missing_file(self, tmp_path):
        """Test a missing file is a config error."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "nope.yaml"))

    def test_non_mapping(self, tmp_path):
        """Test the top level must be a mapping."""
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError, match="mapping"):
            load_config(str(path))

    def test_json_accepted(self, tmp_path):
        """Test JSON files load through the YAML parser."""
        path = tmp_path / "config.json"
        path.write_text('{"seeds": {"eval": 3}}')
        assert load_config(str(path)).seeds.eval == 3

    def test_semantic_error_raised(self, write_config):
        """Test ERROR issues abort loading."""
        path = write_config({"evaluation": {"top_k": 20, "top_m": 10}})
        with pytest.raises(ConfigError) as excinfo:
            load_config(str(path))
        assert excinfo.value.issues

    def test_validation_can_be_skipped(self, write_config):
        """Test validate=False returns the config as written."""
        path = write_config({"evaluation": {"top_k": 20, "top_m": 10}})
        assert load_config(str(path), validate=False).evaluation.top_k == 20


class TestConfigValidator:
    """Tests for cross-field rules."""

    def test_finger_thicker_than_opening(self, validator):
        """Test finger thickness must be below the opening."""
        cfg = from_dict({"gripper": {"finger_thickness": 0.1}})
        result = validator.validate(cfg)
        assert not result.valid
        assert result.errors[0].key_path == "gripper.finger_thickness"
        assert result.errors[0].suggestion

    def test_top_m_exceeds_grid(self, validator):
        """Test top_m cannot exceed the grid size."""
        cfg = from_dict({"evaluation": {"res_u": 4, "res_v": 4, "top_k": 2, "top_m": 20}})
        result = validator.validate(cfg)
        assert any("grid size" in i.message for i in result.errors)

    def test_delta_longer_than_length(self, validator):
        """Test offsets must leave every face a positive length."""
        cfg = from_dict({"dataset": {"delta_max": 0.2}})
        result = validator.validate(cfg)
        assert any(i.key_path == "dataset.delta_max" for i in result.errors)

    def test_wide_cuboid_warns(self, validator):
        """Test a training cuboid wider than the gripper only warns."""
        cfg = from_dict({"dataset": {"width": 0.1}})
        result = validator.validate(cfg)
        assert result.valid
        assert result.warnings[0].key_path == "dataset.width"

    def test_support_normal(self, validator):
        """Test zero and non-unit support normals."""
        zero = validator.validate(from_dict({"pipeline": {"support_normal": [0, 0, 0]}}))
        assert not zero.valid
        scaled = validator.validate(from_dict({"pipeline": {"support_normal": [0, 0, 2]}}))
        assert scaled.valid
        assert scaled.warnings[0].severity == Severity.WARNING

    def test_single_draw_info(self, validator):
        """Test a single friction draw with spread is reported as info."""
        result = validator.validate(from_dict({"friction": {"n_samples": 1}}))
        assert result.valid
        assert result.info[0].key_path == "friction.n_samples"
