"""
Random task screws for simulated trials.

Half of the draws pivot the object about a bottom edge of its box (floor
contacts on, gravity on); the others rotate it about an axis through the box
interior parallel to a box axis (no floor contacts, gravity off).
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.geometry.screw import screw_from_point_dir
from src.metric.grasp_metric import environment_contacts
from src.models.geometry import OrientedBox, RigidTransform, Screw
from src.models.metric import ContactSpec, FrictionModel, PhysicsModel

EDGE_PROBABILITY = 0.5
INTERIOR_FRACTION = 0.8
EDGE_ENV_FRACTIONS = (0.25, 0.75)


@dataclass
class TaskScrew:
    screw: Screw
    kind: str                                     # "edge" or "axis"
    env: List[ContactSpec] = field(default_factory=list)
    gravity: bool = False


def bottom_edges(box: OrientedBox):
    """
    The four edges of the face opposite the box z-axis, as
    (start, end, inward) with `inward` the horizontal unit vector from the
    edge toward the box.
    """
    R, h = box.rotation, box.half_extents
    edges = []
    for along, across in ((0, 1), (1, 0)):
        for sign in (-1, 1):
            offset = sign * h[across] * R[:, across] - h[2] * R[:, 2]
            start = box.center + offset - h[along] * R[:, along]
            end = box.center + offset + h[along] * R[:, along]
            edges.append((start, end, -sign * R[:, across]))
    return edges


def transform_contacts(contacts: List[ContactSpec], transform: RigidTransform) -> List[ContactSpec]:
    return [ContactSpec(transform.apply(c.position), transform.apply_vectors(c.inward_normal),
                        c.mu, c.f_normal_max, c.kind) for c in contacts]


def sample_task_screw(box: OrientedBox, rng: np.random.Generator, fm: FrictionModel,
                      physics: PhysicsModel) -> TaskScrew:
    """Draw one task screw relative to the object's box (box z = support normal)."""
    if rng.random() < EDGE_PROBABILITY:
        edges = bottom_edges(box)
        start, end, inward = edges[int(rng.integers(len(edges)))]
        up = box.rotation[:, 2]
        # rotating about inward × up lifts the box off the floor
        screw = screw_from_point_dir(0.5 * (start + end), np.cross(inward, up))
        points = [start + t * (end - start) for t in EDGE_ENV_FRACTIONS]
        env = environment_contacts(points, up, fm.mu_env, physics.f_env_max)
        return TaskScrew(screw, "edge", env, gravity=True)

    axis = int(rng.integers(3))
    direction = box.rotation[:, axis] * (1.0 if rng.random() < 0.5 else -1.0)
    anchor = box.center.copy()
    for other in range(3):
        if other != axis:
            limit = INTERIOR_FRACTION * box.half_extents[other]
            anchor = anchor + rng.uniform(-limit, limit) * box.rotation[:, other]
    return TaskScrew(screw_from_point_dir(anchor, direction), "axis", [], gravity=False)
