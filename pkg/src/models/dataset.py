"""
Data models for the cuboid pivoting dataset.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.errors import DatasetFormatError, GeometryError
from src.models.geometry import AntipodalPair, Screw


class FeatureVariant(Enum):
    """Input feature layouts for the surrogate."""
    PLUCKER12 = "plucker12"
    POINTDIR12 = "pointdir12"
    COMBINED15 = "combined15"
    ARMS18 = "arms18"

    @property
    def length(self) -> int:
        return {"plucker12": 12, "pointdir12": 12, "combined15": 15, "arms18": 18}[self.value]


@dataclass
class CuboidSpec:
    """
    Training solid: face F^i (y = 0) has length `length_i`, the parallel face
    F^j (y = width) has length `length_j`; both start at x = 0.
    """
    length_i: float
    length_j: float
    width: float
    height: float
    pivot_edge: Screw
    cuboid_id: int = 0

    def __post_init__(self):
        if min(self.length_i, self.length_j, self.width, self.height) <= 0:
            raise GeometryError("cuboid dimensions must be positive")
        if self.pivot_edge.p is None:
            raise GeometryError("pivot edge needs an anchor at the edge center")

    @property
    def grasp_length(self) -> float:
        return min(self.length_i, self.length_j)

    @property
    def center_of_mass(self) -> np.ndarray:
        """Centroid of the prism with a trapezoidal footprint."""
        a, b, w = self.length_i, self.length_j, self.width
        x_bar = (a * a + a * b + b * b) / (3.0 * (a + b))
        y_bar = w * (a + 2.0 * b) / (3.0 * (a + b))
        return np.array([x_bar, y_bar, 0.5 * self.height])


@dataclass
class MetricSample:
    """One labeled antipodal pair."""
    pair: AntipodalPair
    screw: Screw
    eta_raw: float
    y: float
    cuboid_id: int

    def __post_init__(self):
        if not (0.0 <= self.y <= 1.0):
            raise DatasetFormatError(f"normalized metric {self.y} outside [0, 1]")
