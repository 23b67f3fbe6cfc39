"""
Primitive meshes resting on the plane z = 0, and the default object catalogue.
"""
from typing import Dict, List

import numpy as np

from src.models.scene import TriMesh, VirtualCamera

ORBIT_DISTANCE = 0.5                               # m
ORBIT_ELEVATION = (np.deg2rad(30.0), np.deg2rad(50.0))

# outward-facing triangles of the unit cube [0, 1]^3
_CUBE_VERTICES = np.array([[x, y, z] for z in (0, 1) for y in (0, 1) for x in (0, 1)], dtype=float)
_CUBE_TRIANGLES = np.array([
    [0, 2, 1], [1, 2, 3],      # z = 0
    [4, 5, 6], [5, 7, 6],      # z = 1
    [0, 1, 4], [1, 5, 4],      # y = 0
    [2, 6, 3], [3, 6, 7],      # y = 1
    [0, 4, 2], [2, 4, 6],      # x = 0
    [1, 3, 5], [3, 7, 5],      # x = 1
])


def box_mesh(size, base_center=(0.0, 0.0, 0.0), name: str = "box") -> TriMesh:
    """Box of the given (x, y, z) size whose bottom face is centered on `base_center`."""
    size = np.asarray(size, dtype=float)
    origin = np.asarray(base_center, dtype=float) - np.array([0.5, 0.5, 0.0]) * size
    return TriMesh(origin + _CUBE_VERTICES * size, _CUBE_TRIANGLES.copy(), name)


def cylinder_mesh(radius: float, height: float, segments: int = 32,
                  base_center=(0.0, 0.0, 0.0), name: str = "cylinder") -> TriMesh:
    """Closed cylinder along z."""
    base = np.asarray(base_center, dtype=float)
    theta = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.column_stack([radius * np.cos(theta), radius * np.sin(theta), np.zeros(segments)])
    vertices = np.vstack([ring, ring + [0.0, 0.0, height],
                          [[0.0, 0.0, 0.0], [0.0, 0.0, height]]]) + base
    bottom, top = 2 * segments, 2 * segments + 1
    triangles = []
    for i in range(segments):
        j = (i + 1) % segments
        triangles += [[i, j, segments + i], [j, segments + j, segments + i],
                      [bottom, j, i], [top, segments + i, segments + j]]
    return TriMesh(vertices, triangles, name)


def t_handle_mesh(bar=(0.16, 0.03, 0.03), stem=(0.03, 0.03, 0.12),
                  name: str = "t_handle") -> TriMesh:
    """Vertical stem with a horizontal bar on top."""
    stem_mesh = box_mesh(stem)
    bar_mesh = box_mesh(bar, base_center=(0.0, 0.0, stem[2]))
    vertices = np.vstack([stem_mesh.vertices, bar_mesh.vertices])
    triangles = np.vstack([stem_mesh.triangles, bar_mesh.triangles + len(stem_mesh.vertices)])
    return TriMesh(vertices, triangles, name)


def default_catalog() -> Dict[str, TriMesh]:
    """Five household-scale objects, each with one side narrower than a parallel gripper."""
    return {
        "box": box_mesh((0.05, 0.14, 0.20), name="box"),
        "cylinder": cylinder_mesh(0.03, 0.15, name="cylinder"),
        "t_handle": t_handle_mesh(),
        "flat_box": box_mesh((0.12, 0.07, 0.04), name="flat_box"),
        "tall_box": box_mesh((0.05, 0.06, 0.18), name="tall_box"),
    }


def orbit_cameras(mesh: TriMesh, count: int, rng: np.random.Generator,
                  distance: float = ORBIT_DISTANCE, **camera_kwargs) -> List[VirtualCamera]:
    """
    `count` cameras on a sphere around the mesh center, at evenly spread
    azimuths with a random offset and a random elevation above the table.
    """
    lo, hi = mesh.bounds
    target = 0.5 * (lo + hi)
    offset = rng.uniform(0.0, 2.0 * np.pi)
    cameras = []
    for k in range(count):
        azimuth = offset + 2.0 * np.pi * k / count
        elevation = rng.uniform(*ORBIT_ELEVATION)
        eye = target + distance * np.array([np.cos(elevation) * np.cos(azimuth),
                                            np.cos(elevation) * np.sin(azimuth),
                                            np.sin(elevation)])
        cameras.append(VirtualCamera.look_at(eye, target, **camera_kwargs))
    return cameras
