"""
Conic program for the task-dependent grasp metric.

Variables are stacked as x = [f_1, ..., f_K, λ] with f_k ∈ R³. The program is
in the standard form

    minimize    cᵀx
    subject to  A x = b
                G x + s = h,   s ∈ R₊^L × Q³ × ... × Q³

so maximising λ becomes minimising −λ. The L linear rows carry the normal
force bounds and come first; one 3-dimensional second-order cone per contact
follows.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.models.metric import TaskInstance


@dataclass
class ConeDims:
    """Orthant size followed by the second-order cone sizes."""
    linear: int
    soc: List[int] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.linear + sum(self.soc)

    @property
    def degree(self) -> int:
        return self.linear + len(self.soc)

    def soc_slices(self) -> List[slice]:
        slices, start = [], self.linear
        for q in self.soc:
            slices.append(slice(start, start + q))
            start += q
        return slices


@dataclass
class ConicProgram:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    G: np.ndarray
    h: np.ndarray
    dims: ConeDims
    n_contacts: int
    gravity_moment: float = 0.0    # axial moment of the weight about the screw

    @property
    def n_variables(self) -> int:
        return len(self.c)

    @property
    def n_equalities(self) -> int:
        return self.A.shape[0]

    @property
    def n_soc(self) -> int:
        return len(self.dims.soc)

    def forces(self, x: np.ndarray) -> List[np.ndarray]:
        return [x[3 * k:3 * k + 3].copy() for k in range(self.n_contacts)]


def skew(v: np.ndarray) -> np.ndarray:
    """Matrix of the cross product v × (.)."""
    return np.array([[0.0, -v[2], v[1]],
                     [v[2], 0.0, -v[0]],
                     [-v[1], v[0], 0.0]])


def tangent_basis(normal: np.ndarray):
    """Two unit vectors completing `normal` to a right-handed frame."""
    seed = np.eye(3)[int(np.argmin(np.abs(normal)))]
    t1 = np.cross(normal, seed)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(normal, t1)


def build_program(task: TaskInstance) -> ConicProgram:
    """Assemble the metric program of one task instance."""
    contacts = task.contacts
    n_contacts = len(contacts)
    n = 3 * n_contacts + 1
    anchor = task.screw.anchor
    weight = task.weight

    c = np.zeros(n)
    c[-1] = -1.0

    # force balance (3 rows) then moment balance about the screw anchor (3 rows)
    A = np.zeros((6, n))
    for k, contact in enumerate(contacts):
        cols = slice(3 * k, 3 * k + 3)
        A[0:3, cols] = np.eye(3)
        A[3:6, cols] = skew(contact.position - anchor)
    A[3:6, -1] = -task.screw.l
    b = np.concatenate([-weight, -np.cross(task.com - anchor, weight)])

    G = np.zeros((4 * n_contacts, n))
    h = np.zeros(4 * n_contacts)
    for k, contact in enumerate(contacts):
        cols = slice(3 * k, 3 * k + 3)
        normal = contact.inward_normal
        G[k, cols] = normal
        h[k] = contact.f_normal_max
        t1, t2 = tangent_basis(normal)
        rows = slice(n_contacts + 3 * k, n_contacts + 3 * k + 3)
        G[rows, cols] = -np.vstack([contact.mu * normal, t1, t2])

    dims = ConeDims(linear=n_contacts, soc=[3] * n_contacts)
    return ConicProgram(c, A, b, G, h, dims, n_contacts, task.gravity_axial_moment())
