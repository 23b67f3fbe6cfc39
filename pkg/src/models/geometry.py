"""
Data models for screws, point clouds, boxes and antipodal contacts.

All positions are in meters. Arrays are float64 numpy arrays; constructors
accept any array-like and normalise it.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from src.errors import GeometryError

BOX_EPS = 1e-4        # floor for degenerate box half-extents (m)
GRID_INSET = 0.05     # grid margin as a fraction of the face dimension


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise GeometryError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} contains non-finite values")
    return arr


@dataclass
class Screw:
    """A zero-pitch line in Plücker coordinates, with an optional anchor point."""
    l: np.ndarray                     # unit direction
    m: np.ndarray                     # moment p x l (m)
    p: Optional[np.ndarray] = None    # anchor on the line (m)

    def __post_init__(self):
        self.l = _vec3(self.l, "l")
        self.m = _vec3(self.m, "m")
        if abs(np.linalg.norm(self.l) - 1.0) > 1e-9:
            raise GeometryError("screw direction must be a unit vector")
        if abs(float(self.l @ self.m)) > 1e-9:
            raise GeometryError("Plücker condition l·m = 0 violated")
        if self.p is not None:
            self.p = _vec3(self.p, "p")
            if np.linalg.norm(np.cross(self.p, self.l) - self.m) > 1e-9:
                raise GeometryError("anchor p does not lie on the line")

    @property
    def anchor(self) -> np.ndarray:
        """Stored anchor, or the point of the line closest to the origin."""
        if self.p is not None:
            return self.p
        return np.cross(self.l, self.m)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.l, self.m])


@dataclass
class RigidTransform:
    """x' = rotation @ x + translation."""
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        self.translation = _vec3(self.translation, "translation")

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls()

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def apply_vectors(self, vectors) -> np.ndarray:
        return np.asarray(vectors, dtype=float) @ self.rotation.T

    def inverse(self) -> "RigidTransform":
        rt = self.rotation.T
        return RigidTransform(rt, -rt @ self.translation)

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """self ∘ other: apply other first."""
        return RigidTransform(self.rotation @ other.rotation,
                              self.rotation @ other.translation + self.translation)

    def apply_screw(self, screw: Screw) -> Screw:
        l_new = self.rotation @ screw.l
        l_new = l_new / np.linalg.norm(l_new)
        p_new = self.apply(screw.anchor)
        return Screw(l_new, np.cross(p_new, l_new), p_new)

    def as_matrix(self) -> np.ndarray:
        mat = np.eye(4)
        mat[:3, :3] = self.rotation
        mat[:3, 3] = self.translation
        return mat


@dataclass
class PointCloud:
    """Object cloud O with optional per-point unit normals."""
    points: np.ndarray
    normals: Optional[np.ndarray] = None
    frame_tag: str = "world"

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(self.points) < 1:
            raise GeometryError("point cloud is empty")
        if not np.all(np.isfinite(self.points)):
            raise GeometryError("point cloud contains non-finite coordinates")
        if self.normals is not None:
            self.normals = np.asarray(self.normals, dtype=float).reshape(-1, 3)
            if len(self.normals) != len(self.points):
                raise GeometryError("normal count does not match point count")
            norms = np.linalg.norm(self.normals, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-6):
                raise GeometryError("normals must have unit length")

    def __len__(self) -> int:
        return len(self.points)

    def transformed(self, transform: RigidTransform, frame_tag: str) -> "PointCloud":
        normals = None if self.normals is None else transform.apply_vectors(self.normals)
        return PointCloud(transform.apply(self.points), normals, frame_tag)


@dataclass
class OrientedBox:
    """Box with columns of `rotation` as its axes and positive half extents."""
    center: np.ndarray
    rotation: np.ndarray
    half_extents: np.ndarray
    fallback: bool = False    # PCA degenerated and an axis-aligned box was used

    def __post_init__(self):
        self.center = _vec3(self.center, "center")
        self.rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        self.half_extents = _vec3(self.half_extents, "half_extents")
        if np.abs(self.rotation.T @ self.rotation - np.eye(3)).max() > 1e-9:
            raise GeometryError("box rotation is not orthonormal")
        if np.linalg.det(self.rotation) < 0:
            raise GeometryError("box rotation must be right-handed")
        if np.any(self.half_extents < BOX_EPS * (1 - 1e-9)):
            raise GeometryError("box half extents must be at least the floor")

    @property
    def extents(self) -> np.ndarray:
        return 2.0 * self.half_extents

    @property
    def volume(self) -> float:
        return float(np.prod(self.extents))

    def vertices(self) -> np.ndarray:
        signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
                         dtype=float)
        return self.center + (signs * self.half_extents) @ self.rotation.T

    def to_local(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.center) @ self.rotation

    def from_local(self, local) -> np.ndarray:
        return np.asarray(local, dtype=float) @ self.rotation.T + self.center

    def contains(self, points, slack: float = 1e-9) -> np.ndarray:
        local = self.to_local(points)
        return np.all(np.abs(local) <= self.half_extents + slack, axis=-1)


@dataclass(frozen=True, eq=False)
class Face:
    """One face of a box: outward normal = sign * rotation[:, axis_index]."""
    box: OrientedBox
    axis_index: int
    sign: int

    def __post_init__(self):
        if self.axis_index not in (0, 1, 2):
            raise GeometryError(f"axis_index must be 0, 1 or 2, got {self.axis_index}")
        if self.sign not in (-1, 1):
            raise GeometryError(f"face sign must be +1 or -1, got {self.sign}")

    @property
    def outward_normal(self) -> np.ndarray:
        return self.sign * self.box.rotation[:, self.axis_index]

    @property
    def inward_normal(self) -> np.ndarray:
        return -self.outward_normal

    @property
    def center(self) -> np.ndarray:
        return self.box.center + self.outward_normal * self.box.half_extents[self.axis_index]

    @property
    def in_plane_axes(self) -> Tuple[int, int]:
        """Box axis indices spanning the face as (u, v), lower index first."""
        others = [k for k in range(3) if k != self.axis_index]
        return others[0], others[1]

    def opposite(self) -> "Face":
        return Face(self.box, self.axis_index, -self.sign)

    def is_opposite(self, other: "Face") -> bool:
        same_box = self.box is other.box or (
            np.allclose(self.box.center, other.box.center, atol=1e-12)
            and np.allclose(self.box.rotation, other.box.rotation, atol=1e-12)
            and np.allclose(self.box.half_extents, other.box.half_extents, atol=1e-12))
        return same_box and self.axis_index == other.axis_index and self.sign == -other.sign

    @property
    def separation(self) -> float:
        return float(self.box.extents[self.axis_index])


@dataclass
class AntipodalPair:
    """Contacts c_i, c_j on opposite parallel faces with inward normals."""
    c_i: np.ndarray
    c_j: np.ndarray
    n_i: np.ndarray
    n_j: np.ndarray

    def __post_init__(self):
        self.c_i = _vec3(self.c_i, "c_i")
        self.c_j = _vec3(self.c_j, "c_j")
        self.n_i = _vec3(self.n_i, "n_i")
        self.n_j = _vec3(self.n_j, "n_j")
        if np.linalg.norm(self.n_i + self.n_j) > 1e-9:
            raise GeometryError("antipodal normals must be opposite")
        gap = self.c_j - self.c_i
        dist = np.linalg.norm(gap)
        if dist > 0:
            cos_angle = np.clip(gap @ self.n_i / dist, -1.0, 1.0)
            if np.arccos(cos_angle) > 1e-6:
                raise GeometryError("contact separation is not along the normal")

    @classmethod
    def from_points(cls, c_i, c_j) -> "AntipodalPair":
        c_i = _vec3(c_i, "c_i")
        c_j = _vec3(c_j, "c_j")
        gap = c_j - c_i
        dist = np.linalg.norm(gap)
        if dist == 0:
            raise GeometryError("antipodal contacts coincide")
        n_i = gap / dist
        return cls(c_i, c_j, n_i, -n_i)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.c_i + self.c_j)

    @property
    def width(self) -> float:
        return float(np.linalg.norm(self.c_j - self.c_i))
