"""
ASCII PLY point clouds.

    ply
    format ascii 1.0
    element vertex N
    property float x / y / z
    [property float nx / ny / nz]
    [property float quality]
    [property uchar red / green / blue]
    end_header

`quality` carries the metric score of each point; when scores are present
the color channels render them on a linear blue-to-red ramp.
"""
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from src.errors import CloudFormatError, GeometryError
from src.models.geometry import PointCloud

_XYZ = ["x", "y", "z"]
_NORMALS = ["nx", "ny", "nz"]
_COLORS = ["red", "green", "blue"]


def score_colors(scores) -> np.ndarray:
    """Score 0 -> (0, 0, 255), score 1 -> (255, 0, 0)."""
    s = np.clip(np.asarray(scores, dtype=float), 0.0, 1.0)
    red = np.floor(255.0 * s).astype(int)
    return np.column_stack([red, np.zeros_like(red), 255 - red])


def save_cloud(cloud: PointCloud, path, scores=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = [cloud.points]
    props = [f"property float {name}" for name in _XYZ]
    if cloud.normals is not None:
        columns.append(cloud.normals)
        props += [f"property float {name}" for name in _NORMALS]
    if scores is not None:
        scores = np.asarray(scores, dtype=float).reshape(-1)
        if len(scores) != len(cloud):
            raise CloudFormatError("score count does not match point count")
        columns.append(scores[:, None])
        props.append("property float quality")
        props += [f"property uchar {name}" for name in _COLORS]

    header = ["ply", "format ascii 1.0", f"element vertex {len(cloud)}"] + props + ["end_header"]
    floats = np.hstack(columns)
    colors = score_colors(scores) if scores is not None else None
    with open(path, "w") as handle:
        handle.write("\n".join(header) + "\n")
        for i, row in enumerate(floats):
            line = " ".join(f"{v:.6f}" for v in row)
            if colors is not None:
                line += " " + " ".join(str(c) for c in colors[i])
            handle.write(line + "\n")
    return path


def _parse_header(lines, path) -> Tuple[int, list, int]:
    if not lines or lines[0].strip() != "ply":
        raise CloudFormatError(f"{path}: missing 'ply' magic")
    count = None
    props = []
    for idx, line in enumerate(lines[1:], start=1):
        parts = line.split()
        if not parts or parts[0] == "comment":
            continue
        if parts[0] == "format":
            if parts[1:2] != ["ascii"]:
                raise CloudFormatError(f"{path}: only ASCII PLY is supported")
        elif parts[0] == "element":
            if len(parts) != 3 or parts[1] != "vertex":
                raise CloudFormatError(f"{path}: unsupported element {' '.join(parts[1:])}")
            try:
                count = int(parts[2])
            except ValueError as exc:
                raise CloudFormatError(f"{path}: bad vertex count {parts[2]!r}") from exc
        elif parts[0] == "property":
            if len(parts) != 3:
                raise CloudFormatError(f"{path}: malformed property line {line.strip()!r}")
            props.append(parts[2])
        elif parts[0] == "end_header":
            if count is None:
                raise CloudFormatError(f"{path}: header has no vertex element")
            return count, props, idx + 1
        else:
            raise CloudFormatError(f"{path}: unexpected header line {line.strip()!r}")
    raise CloudFormatError(f"{path}: header is not terminated")


def load_cloud(path) -> Tuple[PointCloud, Optional[np.ndarray]]:
    """Return the cloud and its per-point scores (None when absent)."""
    path = Path(path)
    if not path.exists():
        raise CloudFormatError(f"cloud file not found: {path}")
    lines = path.read_text().splitlines()
    count, props, start = _parse_header(lines, path)
    if props[:3] != _XYZ:
        raise CloudFormatError(f"{path}: first properties must be x, y, z")
    body = [line for line in lines[start:] if line.strip()]
    if len(body) != count:
        raise CloudFormatError(f"{path}: header declares {count} vertices, found {len(body)}")
    try:
        data = np.array([[float(v) for v in line.split()] for line in body], dtype=float)
    except ValueError as exc:
        raise CloudFormatError(f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != len(props):
        raise CloudFormatError(f"{path}: rows do not match the {len(props)} declared properties")
    if not np.all(np.isfinite(data)):
        raise CloudFormatError(f"{path}: non-finite values")

    column = {name: i for i, name in enumerate(props)}
    normals = None
    if all(name in column for name in _NORMALS):
        normals = data[:, [column[n] for n in _NORMALS]]
        norms = np.linalg.norm(normals, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise CloudFormatError(f"{path}: zero-length normal")
        normals = normals / norms
    scores = data[:, column["quality"]] if "quality" in column else None
    try:
        cloud = PointCloud(data[:, :3], normals)
    except GeometryError as exc:
        raise CloudFormatError(f"{path}: {exc}") from exc
    return cloud, scores
