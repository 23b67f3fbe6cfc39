"""
Final grasp evaluation (FGE) and the exact-region oracle.

The surrogate's top-k grid vertices and the exact optimizer's top-m vertices
are evaluated with the conic program, normalised together, and y_max is the
best normalised value among the surrogate picks.
"""
import logging
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import spearmanr

from src.dataset.cuboids import min_max_normalize
from src.errors import DimensionError, EmptyRegionError
from src.evaluation.screws import transform_contacts
from src.models.geometry import Face, PointCloud, Screw
from src.models.grasp import BoxMetricField, GripperGeometry
from src.models.metric import ContactSpec, FrictionModel, PhysicsModel
from src.models.results import FgeConfig, TrialReport
from src.pipeline.region import (DEFAULT_FACE_POLICY, DEFAULT_RES, DEFAULT_Y_TH, build_box_field,
                                 prepare_object, select_face_pair)
from src.pipeline.scorers import ExactScorer

logger = logging.getLogger(__name__)


def compute_region_exact(cloud: PointCloud, screw: Screw, faces: Tuple[Face, Face],
                         res: Tuple[int, int] = DEFAULT_RES,
                         env: Sequence[ContactSpec] = (), fm: Optional[FrictionModel] = None,
                         physics: Optional[PhysicsModel] = None) -> BoxMetricField:
    """
    Box field with exact η at every vertex, min-max normalised over the grid.
    The cloud (same frame as the faces) supplies the center of mass.
    """
    scorer = ExactScorer(list(env), fm, physics, com=cloud.points.mean(axis=0))
    box = faces[0].box
    return build_box_field(box, screw, faces, res, scorer)


def top_indices(values: np.ndarray, count: int) -> np.ndarray:
    """Indices of the `count` largest values; ties keep the lower index first."""
    order = np.argsort(-np.asarray(values, dtype=float), kind="stable")
    return order[:count]


def precision_at_threshold(predicted, exact, y_th: float = DEFAULT_Y_TH) -> Optional[float]:
    """
    Fraction of predicted positives (y ≥ y_th) that are exact positives.
    None when nothing is predicted positive.
    """
    pred = _vertex_values(predicted)
    true = _vertex_values(exact)
    if pred.shape != true.shape:
        raise DimensionError(f"grid mismatch: {pred.shape} vs {true.shape}")
    positive = pred >= y_th
    if not positive.any():
        return None
    return float(np.mean(true[positive] >= y_th))


def rank_correlation(predicted, exact) -> Optional[float]:
    """Spearman ρ between two vertex fields; None when either is constant."""
    pred = _vertex_values(predicted)
    true = _vertex_values(exact)
    if pred.shape != true.shape:
        raise DimensionError(f"grid mismatch: {pred.shape} vs {true.shape}")
    if np.ptp(pred) == 0 or np.ptp(true) == 0:
        return None
    rho = spearmanr(pred, true).correlation
    return None if not np.isfinite(rho) else float(rho)


def _vertex_values(field) -> np.ndarray:
    if isinstance(field, BoxMetricField):
        return field.flat_y()
    return np.asarray(field, dtype=float).reshape(-1)


def fge_from_fields(surrogate: BoxMetricField, exact: BoxMetricField,
                    cfg: FgeConfig) -> Tuple[float, List[float]]:
    """
    y_max and the raw η of the surrogate picks, given both fields on one grid.
    """
    if surrogate.n_vertices != exact.n_vertices:
        raise DimensionError("surrogate and exact fields use different grids")
    if exact.vertex_eta is None:
        raise DimensionError("exact field carries no raw metric values")
    k = min(cfg.top_k, surrogate.n_vertices)
    m = min(cfg.top_m, exact.n_vertices)
    picks_k = top_indices(surrogate.flat_y(), k)
    picks_m = top_indices(exact.vertex_eta, m)
    if len(picks_k) == 0 or len(picks_m) == 0:
        raise EmptyRegionError("FGE needs non-empty surrogate and exact picks")

    evaluated = np.unique(np.concatenate([picks_k, picks_m]))
    joint = min_max_normalize(exact.vertex_eta[evaluated])
    normalized = dict(zip(evaluated.tolist(), joint))
    y_max = max(normalized[i] for i in picks_k.tolist())
    return float(y_max), [float(exact.vertex_eta[i]) for i in picks_k]


def fge(cloud: PointCloud, screw: Screw, model, cfg: Optional[FgeConfig] = None,
        env: Sequence[ContactSpec] = (), fm: Optional[FrictionModel] = None,
        physics: Optional[PhysicsModel] = None, gripper: Optional[GripperGeometry] = None,
        res: Tuple[int, int] = DEFAULT_RES, y_th: float = DEFAULT_Y_TH,
        support_normal=(0.0, 0.0, 1.0), policy: str = DEFAULT_FACE_POLICY,
        object_id: str = "object") -> TrialReport:
    """
    Evaluate the surrogate's picks for one cloud and screw (both in the world
    frame; environment contacts too).
    """
    cfg = cfg or FgeConfig()
    gripper = gripper or GripperGeometry()
    started = time.perf_counter()

    box, frame, object_box, object_cloud, object_screw = prepare_object(cloud, screw,
                                                                         support_normal)
    faces = select_face_pair(object_box, object_screw, gripper, policy)
    object_env = transform_contacts(list(env), frame)
    surrogate = build_box_field(object_box, object_screw, faces, res, model)
    exact = compute_region_exact(object_cloud, object_screw, faces, res, object_env, fm, physics)
    y_max, etas = fge_from_fields(surrogate, exact, cfg)

    report = TrialReport(
        object_id=object_id, screw=screw, y_max=y_max, etas=etas,
        top_k=cfg.top_k, top_m=cfg.top_m,
        precision=precision_at_threshold(surrogate, exact, y_th),
        spearman=rank_correlation(surrogate, exact),
        wall_time=time.perf_counter() - started)
    logger.info("FGE %s: y_max=%.3f (k=%d, m=%d)", object_id, y_max, cfg.top_k, cfg.top_m)
    return report
