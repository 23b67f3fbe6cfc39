"""
Data models for the task-dependent grasp metric.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from src.errors import GeometryError
from src.models.geometry import Screw, _vec3

ENV_FORCE_CAP = 1e4   # stands in for an unbounded environment normal force (N)
DEFAULT_GRAVITY = (0.0, 0.0, -9.81)


class ContactKind(Enum):
    """Who applies a contact force."""
    ROBOT = "robot"
    ENVIRONMENT = "environment"


class SolveStatus(Enum):
    """Conic solver outcome."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    MAX_ITER = "max_iter"


@dataclass
class ContactSpec:
    """Point contact with Coulomb friction."""
    position: np.ndarray
    inward_normal: np.ndarray
    mu: float
    f_normal_max: float
    kind: ContactKind = ContactKind.ROBOT

    def __post_init__(self):
        self.position = _vec3(self.position, "position")
        self.inward_normal = _vec3(self.inward_normal, "inward_normal")
        if abs(np.linalg.norm(self.inward_normal) - 1.0) > 1e-9:
            raise GeometryError("contact normal must be a unit vector")
        if self.mu < 0:
            raise GeometryError("friction coefficient must be nonnegative")
        if not self.f_normal_max > 0:
            raise GeometryError("normal force bound must be positive")


@dataclass
class TaskInstance:
    """One metric problem: two robot contacts, optional environment contacts, gravity."""
    screw: Screw
    robot_contacts: List[ContactSpec]
    env_contacts: List[ContactSpec] = field(default_factory=list)
    mass: float = 1.0
    com: np.ndarray = field(default_factory=lambda: np.zeros(3))
    gravity: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_GRAVITY))

    def __post_init__(self):
        self.com = _vec3(self.com, "com")
        self.gravity = _vec3(self.gravity, "gravity")
        if len(self.robot_contacts) != 2:
            raise GeometryError("a task instance needs exactly two robot contacts")
        n_i = self.robot_contacts[0].inward_normal
        n_j = self.robot_contacts[1].inward_normal
        if np.linalg.norm(n_i + n_j) > 1e-9:
            raise GeometryError("robot contacts must have opposing normals")
        if self.mass < 0:
            raise GeometryError("mass must be nonnegative")

    @property
    def contacts(self) -> List[ContactSpec]:
        return list(self.robot_contacts) + list(self.env_contacts)

    @property
    def weight(self) -> np.ndarray:
        return self.mass * self.gravity

    def gravity_axial_moment(self) -> float:
        """Moment of the weight about the screw axis."""
        arm = self.com - self.screw.anchor
        return float(self.screw.l @ np.cross(arm, self.weight))


@dataclass
class MetricSolution:
    """Solver output for one task instance."""
    eta: float                       # optimal axial moment λ about the screw (N·m)
    contact_forces: List[np.ndarray]
    status: SolveStatus
    kkt_residual: float
    gravity_moment: float = 0.0      # share of λ due to the weight
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


@dataclass
class FrictionModel:
    """Distribution of robot-contact friction plus the fixed environment friction."""
    mu_mean: float = 0.3
    mu_std: float = 0.05
    n_samples: int = 50
    mu_env: float = 0.4
    rng_seed: int = 0
    mu_min: float = 0.01
    mu_max: float = 1.0

    def __post_init__(self):
        if self.n_samples < 1:
            raise GeometryError("friction model needs at least one sample")
        if self.mu_std < 0:
            raise GeometryError("friction standard deviation must be nonnegative")

    def sample(self) -> np.ndarray:
        """Seeded friction draws, clamped to [mu_min, mu_max]."""
        rng = np.random.default_rng(self.rng_seed)
        draws = rng.normal(self.mu_mean, self.mu_std, self.n_samples)
        return np.clip(draws, self.mu_min, self.mu_max)

    @classmethod
    def fixed(cls, mu: float, mu_env: float = 0.4) -> "FrictionModel":
        return cls(mu_mean=mu, mu_std=0.0, n_samples=1, mu_env=mu_env)


@dataclass
class PhysicsModel:
    """Object and force-limit parameters shared by every instance."""
    mass: float = 1.0
    gravity: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_GRAVITY))
    f_normal_max: float = 10.0
    f_env_max: float = ENV_FORCE_CAP

    def __post_init__(self):
        self.gravity = _vec3(self.gravity, "gravity")

    def without_gravity(self) -> "PhysicsModel":
        return PhysicsModel(self.mass, np.zeros(3), self.f_normal_max, self.f_env_max)


@dataclass
class MetricEstimate:
    """Friction-averaged metric with bookkeeping about excluded draws."""
    eta_mean: float
    n_feasible: int
    n_draws: int
    etas: Optional[np.ndarray] = None

    @property
    def n_excluded(self) -> int:
        return self.n_draws - self.n_feasible
