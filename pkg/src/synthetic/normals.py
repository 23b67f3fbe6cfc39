"""
Normal estimation by local plane fits.
"""
import numpy as np
from scipy.spatial import cKDTree

from src.errors import GeometryError
from src.models.geometry import PointCloud


def estimate_normals(cloud: PointCloud, k: int = 16, viewpoint=(0.0, 0.0, 0.0)) -> PointCloud:
    """
    Normal of each point = direction of least variance among its k nearest
    neighbours (itself included), flipped to face `viewpoint`.
    """
    points = cloud.points
    if len(points) < k:
        raise GeometryError(f"normal estimation needs at least {k} points, got {len(points)}")
    _, idx = cKDTree(points).query(points, k=k)
    neighbours = points[idx]                                  # (N, k, 3)
    centered = neighbours - neighbours.mean(axis=1, keepdims=True)
    cov = np.einsum("nki,nkj->nij", centered, centered) / k
    _, vecs = np.linalg.eigh(cov)
    normals = vecs[:, :, 0]
    to_view = np.asarray(viewpoint, dtype=float) - points
    flip = np.einsum("ij,ij->i", normals, to_view) < 0
    normals[flip] = -normals[flip]
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return PointCloud(points, normals, cloud.frame_tag)
