"""
Wavefront OBJ meshes: `v` and `f` records only, polygons fan-split on load.
"""
import logging
from pathlib import Path

import numpy as np

from src.errors import MeshFormatError
from src.models.scene import TriMesh

logger = logging.getLogger(__name__)


def _vertex_index(token: str, n_vertices: int, where: str) -> int:
    # "7", "7/2", "7//3" and negative (relative) indices
    try:
        raw = int(token.split("/")[0])
    except ValueError as exc:
        raise MeshFormatError(f"{where}: bad face index {token!r}") from exc
    if raw == 0:
        raise MeshFormatError(f"{where}: OBJ indices start at 1")
    return raw - 1 if raw > 0 else n_vertices + raw


def load_mesh(path) -> TriMesh:
    path = Path(path)
    if not path.exists():
        raise MeshFormatError(f"mesh file not found: {path}")
    vertices = []
    triangles = []
    for line_no, line in enumerate(path.read_text().splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        where = f"{path}:{line_no}"
        if parts[0] == "v":
            try:
                vertices.append([float(v) for v in parts[1:4]])
            except ValueError as exc:
                raise MeshFormatError(f"{where}: {exc}") from exc
            if len(vertices[-1]) != 3:
                raise MeshFormatError(f"{where}: vertex needs three coordinates")
        elif parts[0] == "f":
            poly = [_vertex_index(tok, len(vertices), where) for tok in parts[1:]]
            if len(poly) < 3:
                raise MeshFormatError(f"{where}: face needs at least three vertices")
            for k in range(1, len(poly) - 1):
                triangles.append([poly[0], poly[k], poly[k + 1]])
    if not triangles:
        raise MeshFormatError(f"{path}: mesh has no faces")
    mesh = TriMesh(np.array(vertices, dtype=float), np.array(triangles, dtype=int), path.stem)
    cleaned = mesh.cleaned()
    if len(cleaned) < len(mesh):
        logger.info("%s: dropped %d degenerate triangles", path.name, len(mesh) - len(cleaned))
    return cleaned


def write_obj(mesh: TriMesh, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as handle:
        handle.write(f"o {mesh.name}\n")
        for v in mesh.vertices:
            handle.write(f"v {v[0]:.6f} {v[1]:.6f} {v[2]:.6f}\n")
        for t in mesh.triangles + 1:
            handle.write(f"f {t[0]} {t[1]} {t[2]}\n")
    return path
