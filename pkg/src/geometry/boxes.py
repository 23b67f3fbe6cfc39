"""
Bounding boxes and the object frame {O}.

The oriented box is built the tabletop way: project the cloud on the support
plane, take the 2D principal axes of the projection, and measure the height
along the support normal.
"""
import logging
from typing import List

import numpy as np

from src.errors import GeometryError
from src.models.geometry import BOX_EPS, Face, OrientedBox, PointCloud, RigidTransform

logger = logging.getLogger(__name__)

_WORLD_AXES = np.eye(3)


def axis_aligned_box(cloud: PointCloud) -> OrientedBox:
    """Tight world-axis box; degenerate extents are clamped to the floor."""
    pts = _points(cloud)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    half = np.maximum(0.5 * (hi - lo), BOX_EPS)
    return OrientedBox(0.5 * (lo + hi), np.eye(3), half)


def oriented_box_pca(cloud: PointCloud, support_normal=(0.0, 0.0, 1.0)) -> OrientedBox:
    """
    Box whose z-axis is the support normal and whose x/y axes are the 2D
    principal axes of the cloud projected onto the support plane.

    The x-axis sign is chosen so the projected coordinates have nonnegative
    skewness (ties toward +world-x); y = z × x keeps the frame right-handed.
    Falls back to the axis-aligned box, flagged, when the projection is
    collinear.
    """
    pts = _points(cloud)
    normal = np.asarray(support_normal, dtype=float).reshape(3)
    norm = np.linalg.norm(normal)
    if not norm > 0:
        raise GeometryError("degenerate direction")
    normal = normal / norm

    centroid = pts.mean(axis=0)
    rel = pts - centroid
    e1, e2 = _plane_basis(normal)
    planar = np.column_stack([rel @ e1, rel @ e2])
    cov = planar.T @ planar / len(planar)
    vals, vecs = np.linalg.eigh(cov)
    if vals[1] <= 1e-20 or vals[0] <= 1e-12 * vals[1]:
        logger.warning("cloud is collinear in the support plane; using the axis-aligned box")
        box = axis_aligned_box(cloud)
        return OrientedBox(box.center, box.rotation, box.half_extents, fallback=True)

    major = vecs[:, 1]
    x_axis = major[0] * e1 + major[1] * e2
    x_axis /= np.linalg.norm(x_axis)
    x_axis = _canonical_sign(x_axis, rel @ x_axis)
    y_axis = np.cross(normal, x_axis)
    rotation = np.column_stack([x_axis, y_axis, normal])

    local = pts @ rotation
    lo, hi = local.min(axis=0), local.max(axis=0)
    center = rotation @ (0.5 * (lo + hi))
    half = np.maximum(0.5 * (hi - lo), BOX_EPS)
    return OrientedBox(center, rotation, half)


def object_frame_from_box(box: OrientedBox) -> RigidTransform:
    """
    World → {O}. The origin is the box vertex with the lexicographically
    smallest local coordinates, i.e. center − R·h, and the axes are the box
    axes, so every vertex has nonnegative {O} coordinates.
    """
    origin = box.center - box.rotation @ box.half_extents
    rot = box.rotation.T
    return RigidTransform(rot, -rot @ origin)


def box_in_frame(box: OrientedBox, transform: RigidTransform) -> OrientedBox:
    """The same box expressed in another frame."""
    rotation = transform.rotation @ box.rotation
    # re-orthonormalise to keep the rotation invariant tight after products
    u, _, vt = np.linalg.svd(rotation)
    rotation = u @ vt
    return OrientedBox(transform.apply(box.center), rotation, box.half_extents, box.fallback)


def box_faces(box: OrientedBox) -> List[Face]:
    """The six faces ordered by axis, negative side first."""
    return [Face(box, axis, sign) for axis in range(3) for sign in (-1, 1)]


def _points(cloud: PointCloud) -> np.ndarray:
    pts = np.asarray(cloud.points if isinstance(cloud, PointCloud) else cloud, dtype=float)
    pts = pts.reshape(-1, 3)
    if len(pts) == 0:
        raise GeometryError("point cloud is empty")
    return pts


def _plane_basis(normal: np.ndarray):
    seed = _WORLD_AXES[0] if abs(normal[0]) < 0.9 else _WORLD_AXES[1]
    e1 = seed - (seed @ normal) * normal
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(normal, e1)


def _canonical_sign(axis: np.ndarray, coords: np.ndarray) -> np.ndarray:
    second = np.mean(coords ** 2)
    skew = np.mean(coords ** 3)
    tol = 1e-9 * second ** 1.5 + 1e-30
    if skew < -tol:
        return -axis
    if skew > tol:
        return axis
    for ref in _WORLD_AXES:
        dot = axis @ ref
        if abs(dot) > 1e-12:
            return axis if dot > 0 else -axis
    return axis
