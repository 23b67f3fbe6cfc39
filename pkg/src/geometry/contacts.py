"""
Antipodal contact grids on parallel box faces.
"""
from typing import List, Tuple

import numpy as np

from src.errors import GeometryError
from src.models.geometry import GRID_INSET, AntipodalPair, Face


def inset_linspace(lo: float, hi: float, count: int, inset: float = GRID_INSET) -> np.ndarray:
    """`count` evenly spaced values over [lo, hi] shrunk by `inset` of the span at both ends."""
    if count < 2:
        raise GeometryError(f"grid resolution must be at least 2, got {count}")
    margin = inset * (hi - lo)
    return np.linspace(lo + margin, hi - margin, count)


def face_grid(face: Face, res_u: int, res_v: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Grid coordinates over a face in box-local units.

    Returns (u_values, v_values) along the face's in-plane axes (u is the
    lower axis index).
    """
    axis_u, axis_v = face.in_plane_axes
    h = face.box.half_extents
    return (inset_linspace(-h[axis_u], h[axis_u], res_u),
            inset_linspace(-h[axis_v], h[axis_v], res_v))


def sample_antipodal_grid(f_i: Face, f_j: Face, res_u: int, res_v: int) -> List[AntipodalPair]:
    """
    Regular grid of antipodal pairs across two opposite faces.

    c_i sweeps the inset grid on F^i and c_j is its orthogonal projection on
    F^j. Pairs are row-major with u fastest.
    """
    if not f_i.is_opposite(f_j):
        raise GeometryError("faces are not opposite")
    u_values, v_values = face_grid(f_i, res_u, res_v)
    box = f_i.box
    axis = f_i.axis_index
    axis_u, axis_v = f_i.in_plane_axes
    h = box.half_extents[axis]

    vv, uu = np.meshgrid(v_values, u_values, indexing="ij")
    local = np.zeros((res_v * res_u, 3))
    local[:, axis_u] = uu.reshape(-1)
    local[:, axis_v] = vv.reshape(-1)
    local_i = local.copy()
    local_i[:, axis] = f_i.sign * h
    local_j = local
    local_j[:, axis] = f_j.sign * h

    c_i = box.from_local(local_i)
    c_j = box.from_local(local_j)
    n_i = f_i.inward_normal
    return [AntipodalPair(a, b, n_i, -n_i) for a, b in zip(c_i, c_j)]
