"""
6-DOF end-effector poses from a grasp region.

Gripper frame convention: x is the closing axis (from e^i toward e^j), z is
the approach direction pointing into the box, y = z × x.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from src.errors import EmptyRegionError, GeometryError, GripperFitError
from src.geometry.contacts import face_grid
from src.models.geometry import OrientedBox, PointCloud, RigidTransform
from src.models.grasp import BoxMetricField, GraspPose, GraspRegion, GripperGeometry, ScoredCloud

logger = logging.getLogger(__name__)

Approach = Tuple[int, int]    # (box axis, sign of the face the gripper comes through)


def filter_approach(g_c, box: OrientedBox, gripper: GripperGeometry,
                    closing_axis: int) -> List[Approach]:
    """
    Faces orthogonal to the closing axis that the fingers can reach through:
    the distance from g_c to the face must not exceed
    finger_depth - palm_clearance.
    """
    local = box.to_local(np.asarray(g_c, dtype=float).reshape(1, 3))[0]
    approaches = []
    for axis in range(3):
        if axis == closing_axis:
            continue
        for sign in (-1, 1):
            distance = box.half_extents[axis] - sign * local[axis]
            if distance <= gripper.reach + 1e-12:
                approaches.append((axis, sign))
    return approaches


def make_pose(e_i, e_j, box: OrientedBox, approach: Approach,
              gripper: GripperGeometry) -> GraspPose:
    e_i = np.asarray(e_i, dtype=float)
    e_j = np.asarray(e_j, dtype=float)
    gap = e_j - e_i
    opening = float(np.linalg.norm(gap))
    if opening <= 0:
        raise GeometryError("pose contacts coincide")
    if opening > gripper.max_opening + 1e-12:
        raise GripperFitError("object exceeds gripper opening")
    axis, sign = approach
    x_axis = gap / opening
    z_axis = -sign * box.rotation[:, axis]
    y_axis = np.cross(z_axis, x_axis)
    rotation = np.column_stack([x_axis, y_axis, z_axis])
    return GraspPose(rotation, 0.5 * (e_i + e_j), opening, axis, sign, (e_i, e_j))


def poses_from_grid(field: BoxMetricField, scored: ScoredCloud, box: OrientedBox,
                    gripper: GripperGeometry, y_th: float) -> List[GraspPose]:
    """
    One pose per (occupied cell with y_avg ≥ y_th, reachable approach). The
    contacts are the cell center on F^i and its projection on F^j; cells are
    visited row-major.
    """
    if scored.cells is None:
        raise GeometryError("scored cloud carries no cell assignment")
    f_i, f_j = field.face_i, field.face_j
    axis = f_i.axis_index
    axis_u, axis_v = f_i.in_plane_axes
    u_grid, v_grid = face_grid(f_i, field.res_u, field.res_v)
    half = box.half_extents[axis]

    occupied = {(int(iv), int(iu)) for iu, iv in scored.cells if iu >= 0 and iv >= 0}
    poses = []
    for iv, iu in sorted(occupied):
        if field.cell_y[iv, iu] < y_th:
            continue
        local = np.zeros(3)
        local[axis_u] = 0.5 * (u_grid[iu] + u_grid[iu + 1])
        local[axis_v] = 0.5 * (v_grid[iv] + v_grid[iv + 1])
        local_i, local_j = local.copy(), local.copy()
        local_i[axis] = f_i.sign * half
        local_j[axis] = f_j.sign * half
        e_i, e_j = box.from_local(local_i), box.from_local(local_j)
        g_c = 0.5 * (e_i + e_j)
        for approach in filter_approach(g_c, box, gripper, axis):
            poses.append(make_pose(e_i, e_j, box, approach, gripper))
    return poses


def snap_axis(normal, box: OrientedBox) -> int:
    """Box axis most parallel to `normal`."""
    return int(np.argmax(np.abs(box.rotation.T @ np.asarray(normal, dtype=float))))


def poses_from_point(region: GraspRegion, cloud: PointCloud, box: OrientedBox,
                     gripper: GripperGeometry, seed: int = 0,
                     closing_axis: Optional[int] = None) -> GraspPose:
    """
    Pose seeded on a region point.

    Region points are visited in a seeded random order; e^i is the point,
    e^j lies on the opposite box face along the closing axis (the face-pair
    axis when given, else the axis nearest the point normal). The first
    point with a reachable approach wins.
    """
    if region.empty:
        raise EmptyRegionError("grasp region is empty")
    if closing_axis is None and cloud.normals is None:
        raise GeometryError("cloud normals are required to choose the closing axis")
    order = np.random.default_rng(seed).permutation(len(region.indices))
    for pick in order:
        index = int(region.indices[pick])
        e_i = cloud.points[index]
        axis = closing_axis if closing_axis is not None else snap_axis(cloud.normals[index], box)
        if box.extents[axis] > gripper.max_opening:
            continue
        local = box.to_local(e_i.reshape(1, 3))[0]
        target = box.half_extents[axis] if local[axis] < 0 else -box.half_extents[axis]
        e_j = e_i + (target - local[axis]) * box.rotation[:, axis]
        if np.linalg.norm(e_j - e_i) <= 1e-12:
            continue
        g_c = 0.5 * (e_i + e_j)
        approaches = filter_approach(g_c, box, gripper, axis)
        if approaches:
            return make_pose(e_i, e_j, box, approaches[0], gripper)
    raise EmptyRegionError("no region point admits a reachable approach")


def pose_to_frame(pose: GraspPose, transform: RigidTransform) -> GraspPose:
    """Express a pose in another frame (e.g. {O} back to world)."""
    contacts = None
    if pose.contacts is not None:
        contacts = tuple(transform.apply(c) for c in pose.contacts)
    return GraspPose(transform.rotation @ pose.rotation, transform.apply(pose.translation),
                     pose.opening, pose.approach_axis, pose.approach_sign, contacts)
