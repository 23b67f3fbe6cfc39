"""
Ray-cast partial point clouds of triangle meshes.
"""
import logging

import numpy as np

from src.errors import GeometryError
from src.models.geometry import PointCloud
from src.models.scene import TriMesh, VirtualCamera

logger = logging.getLogger(__name__)

_EPS = 1e-12


def intersect_rays(origin: np.ndarray, directions: np.ndarray, mesh: TriMesh) -> np.ndarray:
    """
    Nearest hit parameter t along each ray (inf on a miss), Möller-Trumbore,
    both triangle sides. Rays share one origin.
    """
    t_best = np.full(len(directions), np.inf)
    tris = mesh.vertices[mesh.triangles]
    for v0, v1, v2 in tris:
        e1 = v1 - v0
        e2 = v2 - v0
        pvec = np.cross(directions, e2)
        det = pvec @ e1
        ok = np.abs(det) > _EPS
        inv = np.zeros_like(det)
        inv[ok] = 1.0 / det[ok]
        tvec = origin - v0
        u = (pvec @ tvec) * inv
        qvec = np.cross(tvec, e1)
        v = (directions @ qvec) * inv
        t = (e2 @ qvec) * inv
        hit = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > _EPS)
        closer = hit & (t < t_best)
        t_best[closer] = t[closer]
    return t_best


def render_partial_cloud(mesh: TriMesh, cam: VirtualCamera, seed: int = 0) -> PointCloud:
    """
    One point per pixel whose ray hits the mesh, at the nearest hit (z-buffer),
    with Gaussian noise on depth. Points are in the world frame, pixel order.
    """
    dirs_cam = cam.ray_directions()
    dirs = cam.pose.apply_vectors(dirs_cam)
    origin = cam.position
    depth = intersect_rays(origin, dirs, mesh)
    hit = np.isfinite(depth)
    if not hit.any():
        raise GeometryError("object not visible")
    depth = depth[hit]
    if cam.noise_std > 0:
        depth = depth + np.random.default_rng(seed).normal(0.0, cam.noise_std, len(depth))
    points = origin + depth[:, None] * dirs[hit]
    logger.debug("rendered %d points of %s from %s", len(points), mesh.name, origin)
    return PointCloud(points, frame_tag="world")
