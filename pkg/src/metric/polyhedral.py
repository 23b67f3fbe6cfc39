"""
Linear-programming oracle with polyhedral friction cones.

Each Coulomb cone is replaced by the cone spanned by `sides` edge generators
g_j = n + ρ (cos θ_j t1 + sin θ_j t2). With ρ = μ the polygon is inscribed in
the friction circle (inner bound); with ρ = μ / cos(π / sides) it is
circumscribed (outer bound). Since nᵀg_j = 1 the normal force bound is a
plain sum of the generator weights.
"""
import logging
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from src.metric.program import skew, tangent_basis
from src.models.metric import TaskInstance

logger = logging.getLogger(__name__)


def cone_generators(normal: np.ndarray, mu: float, sides: int, outer: bool = False) -> np.ndarray:
    """(sides, 3) edge directions of the polyhedral friction cone."""
    t1, t2 = tangent_basis(normal)
    radius = mu / np.cos(np.pi / sides) if outer else mu
    theta = 2.0 * np.pi * np.arange(sides) / sides
    return normal + radius * (np.outer(np.cos(theta), t1) + np.outer(np.sin(theta), t2))


def polyhedral_metric(task: TaskInstance, sides: int = 8, outer: bool = False) -> Optional[float]:
    """
    η of the task with faceted friction cones, or None when the LP is infeasible.

    η is the optimal axial moment λ, the same quantity the conic solver reports.
    """
    if sides < 3:
        raise ValueError("a polyhedral cone needs at least 3 sides")
    contacts = task.contacts
    anchor = task.screw.anchor
    weight = task.weight
    n_weights = sides * len(contacts)

    A_eq = np.zeros((6, n_weights + 1))
    A_ub = np.zeros((len(contacts), n_weights + 1))
    b_ub = np.zeros(len(contacts))
    for k, contact in enumerate(contacts):
        gens = cone_generators(contact.inward_normal, contact.mu, sides, outer)
        cols = slice(k * sides, (k + 1) * sides)
        A_eq[0:3, cols] = gens.T
        A_eq[3:6, cols] = skew(contact.position - anchor) @ gens.T
        A_ub[k, cols] = 1.0
        b_ub[k] = contact.f_normal_max
    A_eq[3:6, -1] = -task.screw.l
    b_eq = np.concatenate([-weight, -np.cross(task.com - anchor, weight)])

    cost = np.zeros(n_weights + 1)
    cost[-1] = -1.0
    bounds = [(0, None)] * n_weights + [(None, None)]
    result = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                     bounds=bounds, method="highs")
    if result.status != 0:
        logger.debug("polyhedral LP ended with status %d: %s", result.status, result.message)
        return None
    return float(result.x[-1])
