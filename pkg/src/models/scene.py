"""
Data models for synthetic scans: triangle meshes and a pinhole camera.
"""
from dataclasses import dataclass, field

import numpy as np

from src.errors import GeometryError, MeshFormatError
from src.models.geometry import RigidTransform

MIN_TRIANGLE_AREA = 1e-14


@dataclass
class TriMesh:
    """Vertices (m) and triangle index triples."""
    vertices: np.ndarray
    triangles: np.ndarray
    name: str = "mesh"

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=int).reshape(-1, 3)
        if len(self.triangles) == 0:
            raise MeshFormatError(f"{self.name}: mesh has no faces")
        if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
            raise MeshFormatError(f"{self.name}: triangle index out of range")

    def triangle_areas(self) -> np.ndarray:
        v = self.vertices[self.triangles]
        return 0.5 * np.linalg.norm(np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0]), axis=1)

    def cleaned(self) -> "TriMesh":
        """Copy without zero-area triangles."""
        keep = self.triangle_areas() > MIN_TRIANGLE_AREA
        if not keep.any():
            raise MeshFormatError(f"{self.name}: every triangle is degenerate")
        return TriMesh(self.vertices, self.triangles[keep], self.name)

    def transformed(self, transform: RigidTransform) -> "TriMesh":
        return TriMesh(transform.apply(self.vertices), self.triangles.copy(), self.name)

    @property
    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def __len__(self) -> int:
        return len(self.triangles)


@dataclass
class VirtualCamera:
    """
    Pinhole camera. `pose` maps camera coordinates to world; the camera
    looks along its +z axis with x right and y down.
    """
    pose: RigidTransform = field(default_factory=RigidTransform)
    width: int = 160
    height: int = 120
    fov: float = np.deg2rad(60.0)    # horizontal field of view (rad)
    noise_std: float = 0.001         # depth noise (m)

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise GeometryError("camera resolution must be at least 8x8")
        if not 0.0 < self.fov < np.pi:
            raise GeometryError("field of view must lie in (0, pi)")
        if self.noise_std < 0:
            raise GeometryError("depth noise must be nonnegative")

    @property
    def focal(self) -> float:
        return 0.5 * self.width / np.tan(0.5 * self.fov)

    @property
    def position(self) -> np.ndarray:
        return self.pose.translation

    def ray_directions(self) -> np.ndarray:
        """Camera-frame ray per pixel, row-major, scaled to unit depth."""
        cols, rows = np.meshgrid(np.arange(self.width), np.arange(self.height))
        dirs = np.empty((self.height * self.width, 3))
        dirs[:, 0] = (cols.reshape(-1) + 0.5 - 0.5 * self.width) / self.focal
        dirs[:, 1] = (rows.reshape(-1) + 0.5 - 0.5 * self.height) / self.focal
        dirs[:, 2] = 1.0
        return dirs

    @classmethod
    def look_at(cls, eye, target, up=(0.0, 0.0, 1.0), **kwargs) -> "VirtualCamera":
        eye = np.asarray(eye, dtype=float)
        forward = np.asarray(target, dtype=float) - eye
        norm = np.linalg.norm(forward)
        if not norm > 0:
            raise GeometryError("camera eye and target coincide")
        forward /= norm
        up = np.asarray(up, dtype=float)
        if np.linalg.norm(np.cross(forward, up)) < 1e-9:
            up = np.array([0.0, 1.0, 0.0])
        right = np.cross(forward, up)
        right /= np.linalg.norm(right)
        down = np.cross(forward, right)
        rotation = np.column_stack([right, down, forward])
        return cls(RigidTransform(rotation, eye), **kwargs)
