"""
Data models for validation issues and evaluation reports.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from src.errors import UsageError
from src.models.geometry import Screw


class Severity(Enum):
    """How a config problem affects a run."""
    ERROR = "error"          # the run would fail or produce meaningless output
    WARNING = "warning"
    INFO = "info"


@dataclass
class ValidationIssue:
    """One cross-field problem found in a run configuration."""
    severity: Severity
    category: str                    # config section, e.g. "dataset"
    message: str
    key_path: str                    # e.g. "evaluation.top_m"
    suggestion: Optional[str] = None


@dataclass
class ValidationResult:
    """
    Issues found in one configuration source, split by severity.

    `valid` is False as soon as there is an ERROR issue.
    """
    source: str                      # config file path, or "<defaults>"
    valid: bool
    errors: List[ValidationIssue] = field(default_factory=list)
    warnings: List[ValidationIssue] = field(default_factory=list)
    info: List[ValidationIssue] = field(default_factory=list)

    @property
    def all_issues(self) -> List[ValidationIssue]:
        return self.errors + self.warnings + self.info

    @property
    def counts(self) -> Dict[Severity, int]:
        return {Severity.ERROR: len(self.errors), Severity.WARNING: len(self.warnings),
                Severity.INFO: len(self.info)}


@dataclass
class FgeConfig:
    """Top-k surrogate picks versus top-m exact picks."""
    top_k: int = 10
    top_m: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.top_k < 1 or self.top_m <= self.top_k:
            raise UsageError(f"FGE needs top_m > top_k >= 1 (got k={self.top_k}, m={self.top_m})")


@dataclass
class TrialReport:
    """Outcome of one final-grasp-evaluation trial."""
    object_id: str
    screw: Screw
    y_max: float
    etas: List[float]
    top_k: int
    top_m: int
    precision: Optional[float] = None
    spearman: Optional[float] = None
    screw_kind: str = "given"
    trial_index: int = 0
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def as_dict(self) -> dict:
        return {
            "object_id": self.object_id,
            "trial": self.trial_index,
            "screw_kind": self.screw_kind,
            "screw_p": np.asarray(self.screw.anchor).tolist(),
            "screw_l": np.asarray(self.screw.l).tolist(),
            "y_max": self.y_max,
            "top_k": self.top_k,
            "top_m": self.top_m,
            "precision": self.precision,
            "spearman": self.spearman,
            "etas": [float(e) for e in self.etas],
            "wall_time": self.wall_time,
            "error": self.error,
        }
