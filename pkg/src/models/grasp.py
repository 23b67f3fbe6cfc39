"""
Data models for grasp regions and end-effector poses.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.errors import GeometryError
from src.models.geometry import AntipodalPair, Face, PointCloud


@dataclass
class GripperGeometry:
    """Parallel-jaw gripper dimensions (m)."""
    max_opening: float = 0.08
    finger_depth: float = 0.045
    finger_thickness: float = 0.01
    palm_clearance: float = 0.005

    def __post_init__(self):
        if min(self.max_opening, self.finger_depth,
               self.finger_thickness, self.palm_clearance) <= 0:
            raise GeometryError("gripper dimensions must be positive")
        if self.max_opening <= self.finger_thickness:
            raise GeometryError("gripper opening must exceed finger thickness")

    @property
    def reach(self) -> float:
        """Deepest grasp-center distance from the approach face."""
        return self.finger_depth - self.palm_clearance


@dataclass
class BoxMetricField:
    """
    Metric values over an antipodal grid on a face pair.

    `vertex_y` has shape (res_v, res_u), row-major with u fastest, matching the
    order of `pairs`. `cell_y` has shape (res_v - 1, res_u - 1).
    """
    face_i: Face
    face_j: Face
    res_u: int
    res_v: int
    pairs: List[AntipodalPair]
    vertex_y: np.ndarray
    cell_y: np.ndarray = None
    vertex_eta: Optional[np.ndarray] = None    # raw exact values, when known

    def __post_init__(self):
        self.vertex_y = np.asarray(self.vertex_y, dtype=float).reshape(self.res_v, self.res_u)
        if self.cell_y is None:
            self.cell_y = cell_averages(self.vertex_y)
        if len(self.pairs) != self.res_u * self.res_v:
            raise GeometryError("pair count does not match the grid resolution")

    @property
    def n_vertices(self) -> int:
        return self.res_u * self.res_v

    @property
    def n_cells(self) -> int:
        return (self.res_u - 1) * (self.res_v - 1)

    def flat_y(self) -> np.ndarray:
        return self.vertex_y.reshape(-1)


def cell_averages(vertex_y: np.ndarray) -> np.ndarray:
    """Mean of the four vertex values of every grid cell."""
    v = vertex_y
    return (v[:-1, :-1] + v[:-1, 1:] + v[1:, :-1] + v[1:, 1:]) / 4.0


@dataclass
class ScoredCloud:
    """Cloud with one metric score per point, plus the grid cell each point fell in."""
    cloud: PointCloud
    scores: np.ndarray
    cells: Optional[np.ndarray] = None    # (N, 2) cell (iu, iv), -1 when outside

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=float).reshape(-1)
        if len(self.scores) != len(self.cloud):
            raise GeometryError("score count does not match point count")


@dataclass
class GraspRegion:
    """Ideal grasping region I_O as indices into the source cloud."""
    indices: np.ndarray
    scores: np.ndarray
    y_th: float

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=int).reshape(-1)
        self.scores = np.asarray(self.scores, dtype=float).reshape(-1)
        if len(np.unique(self.indices)) != len(self.indices):
            raise GeometryError("region indices must be unique")
        if np.any(self.scores < self.y_th):
            raise GeometryError("every region score must reach the threshold")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def empty(self) -> bool:
        return len(self.indices) == 0


@dataclass
class GraspPose:
    """
    End-effector pose. Columns of `rotation`: x = closing axis, z = approach
    direction into the box, y = z × x.
    """
    rotation: np.ndarray
    translation: np.ndarray
    opening: float
    approach_axis: int
    approach_sign: int
    contacts: Tuple[np.ndarray, np.ndarray] = field(default=None)

    def as_dict(self) -> dict:
        data = {
            "rotation": np.asarray(self.rotation).tolist(),
            "translation": np.asarray(self.translation).tolist(),
            "opening": float(self.opening),
            "approach_axis": int(self.approach_axis),
            "approach_sign": int(self.approach_sign),
        }
        if self.contacts is not None:
            data["contacts"] = [np.asarray(c).tolist() for c in self.contacts]
        return data
