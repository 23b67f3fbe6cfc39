"""
Screw (Plücker line) helpers.
"""
import numpy as np

from src.errors import GeometryError
from src.models.geometry import Screw


def screw_from_point_dir(p, l) -> Screw:
    """Line through `p` along `l`; the direction is normalised."""
    p = np.asarray(p, dtype=float).reshape(3)
    l = np.asarray(l, dtype=float).reshape(3)
    norm = np.linalg.norm(l)
    if not norm > 0 or not np.isfinite(norm):
        raise GeometryError("degenerate direction")
    l = l / norm
    return Screw(l, np.cross(p, l), p)


def moment_about_screw(screw: Screw, force, point) -> float:
    """Moment of `force` applied at `point` about the screw line: l·(c×f) + m·f."""
    f = np.asarray(force, dtype=float).reshape(3)
    c = np.asarray(point, dtype=float).reshape(3)
    return float(screw.l @ np.cross(c, f) + screw.m @ f)


def parse_screw(text: str) -> Screw:
    """Parse 'px,py,pz,lx,ly,lz'."""
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise GeometryError(f"screw must be six comma-separated numbers: {text!r}") from exc
    if len(values) != 6:
        raise GeometryError(f"screw must be six comma-separated numbers: {text!r}")
    return screw_from_point_dir(values[:3], values[3:])
