"""
Run configuration.

Every constant of the grasp-synthesis recipe is a default here, so a bare
run needs no file. A config file (YAML or JSON) overrides defaults key by
key. Loading validates the raw mapping against a JSON schema, then runs
ConfigValidator for cross-field rules.
"""
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema
import numpy as np
import yaml

from src.errors import ConfigError
from src.models.grasp import GripperGeometry
from src.models.metric import ENV_FORCE_CAP, FrictionModel, PhysicsModel
from src.models.results import FgeConfig

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "SCREWGRASP_CONFIG"


@dataclass
class FrictionSection:
    mu_mean: float = 0.3
    mu_std: float = 0.05
    mu_env: float = 0.4
    n_samples: int = 50


@dataclass
class PhysicsSection:
    mass: float = 1.0
    gravity: List[float] = field(default_factory=lambda: [0.0, 0.0, -9.81])
    f_normal_max: float = 10.0
    f_env_max: float = ENV_FORCE_CAP


@dataclass
class GripperSection:
    g_w: float = 0.08
    finger_depth: float = 0.045
    finger_thickness: float = 0.01
    palm_clearance: float = 0.005


@dataclass
class PipelineSection:
    y_th: float = 0.6
    res_u: int = 34
    res_v: int = 19
    face_policy: str = "aligned"
    support_normal: List[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])


@dataclass
class TrainSection:
    lr: float = 0.001
    epochs: int = 150
    batch_size: int = 150
    hidden_width: int = 256
    n_hidden: int = 8
    train_fraction: float = 0.9
    feature_variant: str = "plucker12"


@dataclass
class SeedsSection:
    data: int = 0
    train: int = 0
    eval: int = 0


@dataclass
class EvaluationSection:
    top_k: int = 10
    top_m: int = 100
    res_u: int = 34
    res_v: int = 19
    screws_per_object: int = 10
    poses_per_object: int = 1


@dataclass
class DatasetSection:
    width: float = 0.06
    height: float = 0.10
    length_min: float = 0.14
    length_max: float = 0.25
    delta_min: float = 0.005
    delta_max: float = 0.06
    steps: int = 12
    variation: str = "full"
    res_u: int = 34
    res_v: int = 19


@dataclass
class ScanSection:
    width: int = 160
    height: int = 120
    fov_deg: float = 60.0
    noise_std: float = 0.001
    normal_k: int = 16
    distance: float = 0.5


_SECTIONS = {
    "friction": FrictionSection,
    "physics": PhysicsSection,
    "gripper": GripperSection,
    "pipeline": PipelineSection,
    "train": TrainSection,
    "seeds": SeedsSection,
    "evaluation": EvaluationSection,
    "dataset": DatasetSection,
    "scan": ScanSection,
}


@dataclass
class RunConfig:
    friction: FrictionSection = field(default_factory=FrictionSection)
    physics: PhysicsSection = field(default_factory=PhysicsSection)
    gripper: GripperSection = field(default_factory=GripperSection)
    pipeline: PipelineSection = field(default_factory=PipelineSection)
    train: TrainSection = field(default_factory=TrainSection)
    seeds: SeedsSection = field(default_factory=SeedsSection)
    evaluation: EvaluationSection = field(default_factory=EvaluationSection)
    dataset: DatasetSection = field(default_factory=DatasetSection)
    scan: ScanSection = field(default_factory=ScanSection)
    jobs: int = 1
    source: str = "<defaults>"

    # ------------------------------------------------------------ builders

    def friction_model(self) -> FrictionModel:
        f = self.friction
        return FrictionModel(mu_mean=f.mu_mean, mu_std=f.mu_std, n_samples=f.n_samples,
                             mu_env=f.mu_env, rng_seed=self.seeds.data)

    def physics_model(self) -> PhysicsModel:
        p = self.physics
        return PhysicsModel(p.mass, np.array(p.gravity, dtype=float), p.f_normal_max, p.f_env_max)

    def gripper_geometry(self) -> GripperGeometry:
        g = self.gripper
        return GripperGeometry(g.g_w, g.finger_depth, g.finger_thickness, g.palm_clearance)

    def fge_config(self) -> FgeConfig:
        return FgeConfig(self.evaluation.top_k, self.evaluation.top_m, self.seeds.eval)

    @property
    def grid_res(self):
        return (self.pipeline.res_u, self.pipeline.res_v)

    def with_seed(self, seed: int) -> "RunConfig":
        """Copy with every seed replaced."""
        data = self.as_dict()
        data["seeds"] = {"data": seed, "train": seed, "eval": seed}
        return from_dict(data, self.source)

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop("source")
        return data


# ------------------------------------------------------------------ schema

def _number(minimum=None, exclusive_minimum=None, maximum=None):
    spec: Dict[str, Any] = {"type": "number"}
    if minimum is not None:
        spec["minimum"] = minimum
    if exclusive_minimum is not None:
        spec["exclusiveMinimum"] = exclusive_minimum
    if maximum is not None:
        spec["maximum"] = maximum
    return spec


def _integer(minimum):
    return {"type": "integer", "minimum": minimum}


_POS = _number(exclusive_minimum=0)
_VEC3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}


def _section(properties: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "properties": properties, "additionalProperties": False}


CONFIG_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "friction": _section({
            "mu_mean": _POS, "mu_std": _number(minimum=0), "mu_env": _number(minimum=0),
            "n_samples": _integer(1),
        }),
        "physics": _section({
            "mass": _POS, "gravity": _VEC3, "f_normal_max": _POS, "f_env_max": _POS,
        }),
        "gripper": _section({
            "g_w": _POS, "finger_depth": _POS, "finger_thickness": _POS, "palm_clearance": _POS,
        }),
        "pipeline": _section({
            "y_th": _number(minimum=0, maximum=1), "res_u": _integer(2), "res_v": _integer(2),
            "face_policy": {"enum": ["perpendicular", "aligned"]}, "support_normal": _VEC3,
        }),
        "train": _section({
            "lr": _POS, "epochs": _integer(1), "batch_size": _integer(2),
            "hidden_width": _integer(1), "n_hidden": _integer(1),
            "train_fraction": _number(exclusive_minimum=0, maximum=1),
            "feature_variant": {"enum": ["plucker12", "pointdir12", "combined15", "arms18"]},
        }),
        "seeds": _section({"data": _integer(0), "train": _integer(0), "eval": _integer(0)}),
        "evaluation": _section({
            "top_k": _integer(1), "top_m": _integer(2), "res_u": _integer(2), "res_v": _integer(2),
            "screws_per_object": _integer(1), "poses_per_object": _integer(1),
        }),
        "dataset": _section({
            "width": _POS, "height": _POS, "length_min": _POS, "length_max": _POS,
            "delta_min": _POS, "delta_max": _POS,
            "steps": _integer(1), "variation": {"enum": ["full", "first"]},
            "res_u": _integer(2), "res_v": _integer(2),
        }),
        "scan": _section({
            "width": _integer(8), "height": _integer(8),
            "fov_deg": _number(exclusive_minimum=0, maximum=179),
            "noise_std": _number(minimum=0), "normal_k": _integer(3), "distance": _POS,
        }),
        "jobs": _integer(1),
    },
}


def schema_errors(data: Dict[str, Any]) -> List[str]:
    """Structural problems in a raw config mapping, as 'key.path: message'."""
    validator = jsonschema.Draft7Validator(CONFIG_SCHEMA)
    messages = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        key = ".".join(str(p) for p in error.absolute_path) or "<root>"
        messages.append(f"{key}: {error.message}")
    return messages


# ------------------------------------------------------------------ loading

def from_dict(data: Dict[str, Any], source: str = "<dict>") -> RunConfig:
    """Defaults overridden by `data`; structure is checked, semantics are not."""
    errors = schema_errors(data)
    if errors:
        raise ConfigError(f"invalid configuration in {source}: " + "; ".join(errors), errors)
    cfg = RunConfig(source=source)
    for name, section_cls in _SECTIONS.items():
        overrides = data.get(name, {})
        defaults = asdict(getattr(cfg, name))
        defaults.update(overrides)
        known = {f.name for f in fields(section_cls)}
        setattr(cfg, name, section_cls(**{k: v for k, v in defaults.items() if k in known}))
    if "jobs" in data:
        cfg.jobs = data["jobs"]
    return cfg


def resolve_config_path(path: Optional[str]) -> Optional[Path]:
    if path:
        return Path(path)
    env = os.environ.get(CONFIG_ENV_VAR)
    return Path(env) if env else None


def load_config(path: Optional[str] = None, seed: Optional[int] = None,
                validate: bool = True) -> RunConfig:
    """
    Load and validate a RunConfig.

    Args:
        path: YAML or JSON file; falls back to $SCREWGRASP_CONFIG, then defaults
        seed: when given, replaces every seed
        validate: run the cross-field ConfigValidator

    Raises:
        ConfigError: unreadable file, schema violation or an ERROR-level issue
    """
    # imported here: the validator module depends on RunConfig
    from src.validators.config_validator import ConfigValidator

    source = resolve_config_path(path)
    if source is None:
        cfg = RunConfig()
    else:
        if not source.exists():
            raise ConfigError(f"config file not found: {source}")
        try:
            raw = yaml.safe_load(source.read_text()) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {source}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{source}: top level must be a mapping")
        cfg = from_dict(raw, str(source))
        logger.info("loaded configuration from %s", source)

    if seed is not None:
        cfg = cfg.with_seed(seed)
    if validate:
        result = ConfigValidator().validate(cfg)
        for issue in result.warnings:
            logger.warning("%s: %s", issue.key_path, issue.message)
        if not result.valid:
            messages = [f"{i.key_path}: {i.message}" for i in result.errors]
            raise ConfigError(f"invalid configuration in {cfg.source}: " + "; ".join(messages),
                              result.errors)
    return cfg
