"""
Cuboid pivoting dataset: solid family, antipodal grids and η labels.

Each training solid is a prism with a trapezoidal footprint. Face F^i lies in
the plane y = 0 with length L, the parallel face F^j lies in y = width with
length L ± δ, and both start at x = 0. The task screw is the bottom edge
joining the far ends of the two faces; the object pivots about it while two
floor contacts on that edge support it.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import GeometryError
from src.geometry.contacts import inset_linspace
from src.geometry.screw import screw_from_point_dir
from src.metric.grasp_metric import environment_contacts, fill_unsupportable, metric_or_nan
from src.models.dataset import CuboidSpec, MetricSample
from src.models.geometry import AntipodalPair
from src.models.metric import FrictionModel, PhysicsModel

logger = logging.getLogger(__name__)

DEFAULT_WIDTH = 0.06
DEFAULT_HEIGHT = 0.10
DEFAULT_LENGTHS = tuple(np.linspace(0.14, 0.25, 12))
DEFAULT_DELTAS = tuple(np.linspace(0.005, 0.06, 12))
DEFAULT_RES = (34, 19)
ENV_FRACTIONS = (0.25, 0.75)
SUPPORT_NORMAL = np.array([0.0, 0.0, 1.0])


def pivot_edge(length_i: float, length_j: float, width: float):
    """Screw along the bottom far edge, anchored at the edge center."""
    start = np.array([length_i, 0.0, 0.0])
    end = np.array([length_j, width, 0.0])
    return screw_from_point_dir(0.5 * (start + end), end - start)


def generate_cuboid_family(lengths: Sequence[float] = DEFAULT_LENGTHS,
                           deltas: Sequence[float] = DEFAULT_DELTAS,
                           width: float = DEFAULT_WIDTH, height: float = DEFAULT_HEIGHT,
                           variation: str = "full") -> List[CuboidSpec]:
    """
    Cross product of base lengths and length offsets.

    Offsets alternate in sign along the δ list (even index +δ, odd index −δ),
    so the full family splits evenly into L+δ and L−δ solids. The "first"
    variation keeps only the L+δ half.
    """
    if variation not in ("first", "full"):
        raise GeometryError(f"unknown dataset variation {variation!r}")
    if min(width, height) <= 0 or any(v <= 0 for v in lengths):
        raise GeometryError("cuboid dimensions must be positive")
    if any(d <= 0 for d in deltas):
        raise GeometryError("length offsets must be positive")

    family = []
    cuboid_id = 0
    for length in lengths:
        for idx, delta in enumerate(deltas):
            sign = 1.0 if idx % 2 == 0 else -1.0
            length_j = float(length + sign * delta)
            if length_j <= 0:
                raise GeometryError(f"offset {delta} leaves no face for base length {length}")
            if variation == "full" or sign > 0:
                edge = pivot_edge(float(length), length_j, width)
                family.append(CuboidSpec(float(length), length_j, width, height, edge, cuboid_id))
            cuboid_id += 1
    return family


def cuboid_pairs(cuboid: CuboidSpec, res: Tuple[int, int] = DEFAULT_RES) -> List[AntipodalPair]:
    """Grid over the common part of F^i and F^j, u along x (fastest), v along z."""
    res_u, res_v = res
    u_values = inset_linspace(0.0, cuboid.grasp_length, res_u)
    v_values = inset_linspace(0.0, cuboid.height, res_v)
    n_i = np.array([0.0, 1.0, 0.0])
    pairs = []
    for v in v_values:
        for u in u_values:
            pairs.append(AntipodalPair([u, 0.0, v], [u, cuboid.width, v], n_i, -n_i))
    return pairs


def cuboid_environment(cuboid: CuboidSpec, fm: FrictionModel, physics: PhysicsModel):
    """Two floor contacts on the pivot edge."""
    start = np.array([cuboid.length_i, 0.0, 0.0])
    end = np.array([cuboid.length_j, cuboid.width, 0.0])
    points = [start + t * (end - start) for t in ENV_FRACTIONS]
    return environment_contacts(points, SUPPORT_NORMAL, fm.mu_env, physics.f_env_max)


def min_max_normalize(values) -> np.ndarray:
    """Map onto [0, 1]; a constant input maps to 0.5 everywhere."""
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        return values
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= 1e-15 * max(1.0, abs(hi)):
        return np.full_like(values, 0.5)
    return (values - lo) / (hi - lo)


def normalize_labels(etas) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Min-max normalise η values where NaN marks a pair with no feasible draw.

    Such pairs take the lowest feasible η and y = 0. Returns the filled η,
    the labels and the number of unsupportable pairs.
    """
    filled, missing = fill_unsupportable(etas)
    ys = min_max_normalize(filled)
    ys[missing] = 0.0
    return filled, ys, int(missing.sum())


def _label_pair(args) -> float:
    pair, cuboid, env, fm, physics = args
    return metric_or_nan(pair, cuboid.pivot_edge, env, fm, physics.mass,
                         cuboid.center_of_mass, physics)


def label_cuboid(cuboid: CuboidSpec, res: Tuple[int, int] = DEFAULT_RES,
                 fm: Optional[FrictionModel] = None, physics: Optional[PhysicsModel] = None,
                 jobs: int = 1) -> List[MetricSample]:
    """
    Label every grid pair of one solid with the friction-averaged η and
    normalise within the solid. Pairs that cannot carry the solid at any
    friction draw are labeled y = 0 and counted in a warning.
    """
    fm = fm or FrictionModel()
    physics = physics or PhysicsModel()
    pairs = cuboid_pairs(cuboid, res)
    env = cuboid_environment(cuboid, fm, physics)
    tasks = [(pair, cuboid, env, fm, physics) for pair in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            etas = list(pool.map(_label_pair, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        etas = [_label_pair(task) for task in tasks]

    etas, ys, n_unsupportable = normalize_labels(etas)
    if n_unsupportable:
        logger.warning("cuboid %d: %d of %d pairs unsupportable, labeled y = 0",
                       cuboid.cuboid_id, n_unsupportable, len(pairs))
    return [MetricSample(pair, cuboid.pivot_edge, float(eta), float(y), cuboid.cuboid_id)
            for pair, eta, y in zip(pairs, etas, ys)]


def _label_cuboid_task(args) -> List[MetricSample]:
    cuboid, res, fm, physics = args
    return label_cuboid(cuboid, res, fm, physics)


def label_family(cuboids: Sequence[CuboidSpec], res: Tuple[int, int] = DEFAULT_RES,
                 fm: Optional[FrictionModel] = None, physics: Optional[PhysicsModel] = None,
                 jobs: int = 1,
                 progress_callback: Optional[Callable[[int, int, str], None]] = None
                 ) -> List[MetricSample]:
    """
    Label a list of solids. Work is spread over `jobs` processes, one solid
    per task; the output keeps the input order.
    """
    fm = fm or FrictionModel()
    physics = physics or PhysicsModel()
    tasks = [(cuboid, res, fm, physics) for cuboid in cuboids]
    total = len(tasks)
    samples: List[MetricSample] = []

    def collect(index, labeled):
        samples.extend(labeled)
        name = f"cuboid {cuboids[index].cuboid_id}"
        logger.info("labeled %s (%d/%d)", name, index + 1, total)
        if progress_callback:
            progress_callback(index + 1, total, name)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for index, labeled in enumerate(pool.map(_label_cuboid_task, tasks)):
                collect(index, labeled)
    else:
        for index, task in enumerate(tasks):
            collect(index, _label_cuboid_task(task))
    return samples


def reduced_subset(cuboids: Sequence[CuboidSpec], count: int = 12) -> List[CuboidSpec]:
    """Evenly strided deterministic subset of a family."""
    if count >= len(cuboids):
        return list(cuboids)
    stride = len(cuboids) / count
    return [cuboids[int(i * stride)] for i in range(count)]
