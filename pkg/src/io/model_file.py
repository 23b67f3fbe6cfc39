"""
Binary weight files for MlpModel.

    magic    4 bytes  b"SGM1"
    version  u32
    dims     5 x u32  input_dim, hidden_width, n_hidden, norm code, skip
    payload  float64  parameters then running statistics, declaration order

All integers and floats are little-endian.
"""
import struct
from pathlib import Path

import numpy as np

from src.errors import ModelFileError, UsageError
from src.surrogate.mlp import NORM_KINDS, MlpModel

MAGIC = b"SGM1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sI5I")
_FLOAT = np.dtype("<f8")


def save_model(model: MlpModel, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, model.input_dim, model.hidden_width,
                          model.n_hidden, NORM_KINDS.index(model.norm), int(model.skip))
    with open(path, "wb") as handle:
        handle.write(header)
        for store in (model.params, model.buffers):
            for array in store.values():
                handle.write(np.ascontiguousarray(array, dtype=_FLOAT).tobytes())
    return path


def load_model(path) -> MlpModel:
    path = Path(path)
    if not path.exists():
        raise ModelFileError(f"model file not found: {path}")
    blob = path.read_bytes()
    if len(blob) < _HEADER.size:
        raise ModelFileError(f"{path}: truncated header")
    magic, version, input_dim, width, n_hidden, norm_code, skip = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ModelFileError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ModelFileError(f"{path}: unsupported version {version}")
    if norm_code >= len(NORM_KINDS) or skip not in (0, 1):
        raise ModelFileError(f"{path}: corrupt dimension record")
    try:
        model = MlpModel(input_dim, width, n_hidden, NORM_KINDS[norm_code], bool(skip))
    except UsageError as exc:
        raise ModelFileError(f"{path}: {exc}") from exc

    offset = _HEADER.size
    for store in (model.params, model.buffers):
        for name, array in store.items():
            nbytes = array.size * _FLOAT.itemsize
            if offset + nbytes > len(blob):
                raise ModelFileError(f"{path}: truncated while reading {name}")
            values = np.frombuffer(blob, dtype=_FLOAT, count=array.size, offset=offset)
            store[name] = values.astype(float).reshape(array.shape)
            offset += nbytes
    if offset != len(blob):
        raise ModelFileError(f"{path}: {len(blob) - offset} trailing bytes")
    return model
