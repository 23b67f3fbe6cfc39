"""
Friction-averaged task-dependent grasp metric.
"""
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.errors import InfeasibleGraspError
from src.metric.program import build_program
from src.metric.socp import solve
from src.models.geometry import AntipodalPair, Screw
from src.models.metric import (ContactKind, ContactSpec, FrictionModel, MetricEstimate,
                               MetricSolution, PhysicsModel, TaskInstance)

logger = logging.getLogger(__name__)

EXCLUDED_WARN_FRACTION = 0.10


def robot_contacts(pair: AntipodalPair, mu: float, f_normal_max: float) -> List[ContactSpec]:
    """The two finger contacts of an antipodal pair; both share one friction value."""
    return [ContactSpec(pair.c_i, pair.n_i, mu, f_normal_max, ContactKind.ROBOT),
            ContactSpec(pair.c_j, pair.n_j, mu, f_normal_max, ContactKind.ROBOT)]


def environment_contacts(points: Iterable, normal, mu_env: float,
                         f_max: float) -> List[ContactSpec]:
    """Object-environment contacts sharing one inward normal."""
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    return [ContactSpec(pt, normal, mu_env, f_max, ContactKind.ENVIRONMENT) for pt in points]


def solve_instance(task: TaskInstance, tol: float = 1e-7, max_iter: int = 200) -> MetricSolution:
    return solve(build_program(task), tol=tol, max_iter=max_iter)


def estimate_metric(pair: AntipodalPair, screw: Screw, env: Sequence[ContactSpec],
                    fm: FrictionModel, mass: Optional[float] = None, com=None,
                    physics: Optional[PhysicsModel] = None,
                    tol: float = 1e-7) -> MetricEstimate:
    """
    Solve one instance per friction draw and average η over the optimal ones.

    Environment contacts keep their own friction; only the two robot contacts
    follow the draws.
    """
    physics = physics or PhysicsModel()
    mass = physics.mass if mass is None else mass
    com = np.zeros(3) if com is None else np.asarray(com, dtype=float)
    etas = []
    draws = fm.sample()
    for mu in draws:
        task = TaskInstance(screw, robot_contacts(pair, float(mu), physics.f_normal_max),
                            list(env), mass, com, physics.gravity)
        solution = solve_instance(task, tol=tol)
        if solution.optimal:
            etas.append(solution.eta)
    etas = np.asarray(etas, dtype=float)
    n_feasible = len(etas)
    mean = float(etas.mean()) if n_feasible else float("nan")
    return MetricEstimate(mean, n_feasible, len(draws), etas)


def grasp_metric(pair: AntipodalPair, screw: Screw, env: Sequence[ContactSpec],
                 fm: FrictionModel, mass: Optional[float] = None, com=None,
                 physics: Optional[PhysicsModel] = None, tol: float = 1e-7) -> float:
    """
    Mean η over the friction draws with an optimal solve.

    Raises InfeasibleGraspError when no draw is feasible; warns when more than
    a tenth of the draws had to be excluded.
    """
    estimate = estimate_metric(pair, screw, env, fm, mass, com, physics, tol)
    if estimate.n_feasible == 0:
        raise InfeasibleGraspError("no feasible grasp")
    if estimate.n_excluded > EXCLUDED_WARN_FRACTION * estimate.n_draws:
        logger.warning("%d of %d friction draws infeasible and excluded",
                       estimate.n_excluded, estimate.n_draws)
    return estimate.eta_mean


def metric_or_nan(pair: AntipodalPair, screw: Screw, env: Sequence[ContactSpec],
                  fm: FrictionModel, mass: Optional[float] = None, com=None,
                  physics: Optional[PhysicsModel] = None, tol: float = 1e-7) -> float:
    """grasp_metric, with NaN for a pair that cannot support the task at any draw."""
    try:
        return grasp_metric(pair, screw, env, fm, mass, com, physics, tol)
    except InfeasibleGraspError:
        return float("nan")


def fill_unsupportable(etas) -> Tuple[np.ndarray, np.ndarray]:
    """
    Replace NaN entries with the lowest finite η, or 0 when none is finite.

    Returns the filled values and the mask of replaced entries.
    """
    etas = np.asarray(etas, dtype=float)
    missing = np.isnan(etas)
    floor = float(etas[~missing].min()) if (~missing).any() else 0.0
    return np.where(missing, floor, etas), missing
