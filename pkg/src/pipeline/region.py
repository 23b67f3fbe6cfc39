"""
Ideal grasping region of an object cloud for a task screw.

The steps are: bound the cloud, move everything into the object frame {O},
pick the parallel face pair, score an antipodal grid on it, carry the cell
averages back onto the cloud, and threshold.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.errors import EmptyRegionError, GeometryError, GripperFitError
from src.geometry.boxes import box_in_frame, object_frame_from_box, oriented_box_pca
from src.geometry.contacts import face_grid, sample_antipodal_grid
from src.models.geometry import Face, OrientedBox, PointCloud, RigidTransform, Screw
from src.models.grasp import BoxMetricField, GraspRegion, GripperGeometry, ScoredCloud
from src.pipeline.scorers import BaseScorer, SurrogateScorer

logger = logging.getLogger(__name__)

DEFAULT_RES = (34, 19)
DEFAULT_Y_TH = 0.6
FACE_POLICIES = ("perpendicular", "aligned")
DEFAULT_FACE_POLICY = "aligned"
_TIE = 1e-9


def select_face_pair(box: OrientedBox, screw: Screw, gripper: GripperGeometry,
                     policy: str = DEFAULT_FACE_POLICY) -> Tuple[Face, Face]:
    """
    Pick the parallel faces to grasp among those that fit the gripper.

    "aligned" prefers the closing direction most parallel to the screw
    (max |n·l|), "perpendicular" the most perpendicular one. Ties go to the smaller
    separation, then the smaller axis index. F^i is the negative face.
    """
    if policy not in FACE_POLICIES:
        raise GeometryError(f"unknown face policy {policy!r}")
    candidates = []
    for axis in range(3):
        separation = float(box.extents[axis])
        if separation <= gripper.max_opening:
            alignment = abs(float(box.rotation[:, axis] @ screw.l))
            key = alignment if policy == "perpendicular" else -alignment
            candidates.append((key, separation, axis))
    if not candidates:
        raise GripperFitError("object exceeds gripper opening")

    best = min(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] <= best + _TIE]
    _, _, axis = min(tied, key=lambda c: (c[1], c[2]))
    return Face(box, axis, -1), Face(box, axis, 1)


def _as_scorer(model) -> BaseScorer:
    return model if isinstance(model, BaseScorer) else SurrogateScorer(model)


def build_box_field(box: OrientedBox, screw: Screw, faces: Tuple[Face, Face],
                    res: Tuple[int, int], model) -> BoxMetricField:
    """
    Score the antipodal grid on `faces`. `model` is a trained MlpModel or any
    BaseScorer; box, screw and faces must share one frame.
    """
    f_i, f_j = faces
    if f_i.box is not box and not f_i.is_opposite(Face(box, f_i.axis_index, -f_i.sign)):
        raise GeometryError("faces do not belong to the given box")
    res_u, res_v = res
    pairs = sample_antipodal_grid(f_i, f_j, res_u, res_v)
    scores, etas = _as_scorer(model).score(pairs, screw)
    return BoxMetricField(f_i, f_j, res_u, res_v, pairs, scores, vertex_eta=etas)


def cell_lookup(coords: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """
    Cell index of each coordinate on a 1D vertex grid; -1 outside.

    A coordinate on an interior grid line belongs to the lower cell.
    """
    lo, hi = grid[0], grid[-1]
    step = grid[1] - grid[0]
    idx = np.ceil((coords - lo) / step).astype(int) - 1
    idx = np.clip(idx, 0, len(grid) - 2)
    outside = (coords < lo) | (coords > hi)
    idx[outside] = -1
    return idx


def transfer_to_cloud(field: BoxMetricField, cloud: PointCloud) -> ScoredCloud:
    """
    Project every point orthogonally onto F^i and give it the average of the
    cell it lands in; points outside the grid score 0. The cloud must be in
    the frame of the field's box.
    """
    if len(cloud) == 0:
        raise GeometryError("point cloud is empty")
    face = field.face_i
    axis_u, axis_v = face.in_plane_axes
    u_grid, v_grid = face_grid(face, field.res_u, field.res_v)
    local = face.box.to_local(cloud.points)
    iu = cell_lookup(local[:, axis_u], u_grid)
    iv = cell_lookup(local[:, axis_v], v_grid)
    inside = (iu >= 0) & (iv >= 0)
    scores = np.zeros(len(cloud))
    scores[inside] = field.cell_y[iv[inside], iu[inside]]
    cells = np.column_stack([np.where(inside, iu, -1), np.where(inside, iv, -1)])
    return ScoredCloud(cloud, scores, cells)


def threshold_region(scored: ScoredCloud, y_th: float = DEFAULT_Y_TH) -> GraspRegion:
    """Indices with score ≥ y_th, in input order. An empty result is only warned about."""
    indices = np.nonzero(scored.scores >= y_th)[0]
    if len(indices) == 0:
        logger.warning("grasp region is empty at y_th=%.3f; consider lowering the threshold",
                       y_th)
    return GraspRegion(indices, scored.scores[indices], y_th)


@dataclass
class RegionResult:
    """Everything computed on the way to I_O, kept for poses and reports."""
    box: OrientedBox                  # world frame
    frame: RigidTransform             # world -> {O}
    object_box: OrientedBox           # box in {O}
    object_cloud: PointCloud
    object_screw: Screw
    faces: Tuple[Face, Face]
    field: BoxMetricField
    scored: ScoredCloud
    region: GraspRegion
    notes: List[str] = field(default_factory=list)

    @property
    def closing_axis(self) -> int:
        return self.faces[0].axis_index


def prepare_object(cloud: PointCloud, screw: Screw, support_normal=(0.0, 0.0, 1.0)):
    """Box the cloud and express cloud, box and screw in {O}."""
    box = oriented_box_pca(cloud, support_normal)
    frame = object_frame_from_box(box)
    return (box, frame, box_in_frame(box, frame), cloud.transformed(frame, "object"),
            frame.apply_screw(screw))


def compute_region(cloud: PointCloud, screw: Screw, model, gripper: Optional[GripperGeometry] = None,
                   support_normal=(0.0, 0.0, 1.0), res: Tuple[int, int] = DEFAULT_RES,
                   y_th: float = DEFAULT_Y_TH, policy: str = DEFAULT_FACE_POLICY) -> RegionResult:
    """Run the whole region computation for one screw."""
    gripper = gripper or GripperGeometry()
    box, frame, object_box, object_cloud, object_screw = prepare_object(cloud, screw,
                                                                         support_normal)
    notes = []
    if box.fallback:
        notes.append("axis-aligned box fallback")
    faces = select_face_pair(object_box, object_screw, gripper, policy)
    box_field = build_box_field(object_box, object_screw, faces, res, model)
    scored = transfer_to_cloud(box_field, object_cloud)
    region = threshold_region(scored, y_th)
    logger.info("region: %d of %d points at y_th=%.2f (closing axis %d)",
                len(region), len(cloud), y_th, faces[0].axis_index)
    return RegionResult(box, frame, object_box, object_cloud, object_screw, faces, box_field,
                        scored, region, notes)


def compute_region_sequence(cloud: PointCloud, screws: Sequence[Screw], model,
                            gripper: Optional[GripperGeometry] = None,
                            support_normal=(0.0, 0.0, 1.0), res: Tuple[int, int] = DEFAULT_RES,
                            y_th: float = DEFAULT_Y_TH, policy: str = DEFAULT_FACE_POLICY
                            ) -> Tuple[GraspRegion, List[RegionResult]]:
    """
    Region for a task made of several constant screw motions: a point
    qualifies only if it qualifies for every screw, scored by its minimum.
    """
    if not screws:
        raise EmptyRegionError("a screw sequence needs at least one screw")
    results = [compute_region(cloud, s, model, gripper, support_normal, res, y_th, policy)
               for s in screws]
    common = set(results[0].region.indices.tolist())
    for result in results[1:]:
        common &= set(result.region.indices.tolist())
    indices = np.array(sorted(common), dtype=int)
    scores = np.min([r.scored.scores[indices] for r in results], axis=0) if len(indices) \
        else np.zeros(0)
    if len(indices) == 0:
        logger.warning("no point qualifies for all %d screws", len(screws))
    return GraspRegion(indices, scores, y_th), results
