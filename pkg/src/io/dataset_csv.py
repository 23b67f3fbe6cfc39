"""
Dataset CSV: one labeled antipodal pair per row.

    cuboid_id,cix,ciy,ciz,cjx,cjy,cjz,lx,ly,lz,mx,my,mz,eta_raw,y

Floats are written with shortest round-trip formatting so a reload is exact.
"""
import csv
from pathlib import Path
from typing import List, Sequence

import numpy as np

from src.errors import DatasetFormatError, ScrewGraspError
from src.models.dataset import MetricSample
from src.models.geometry import AntipodalPair, Screw

DATASET_HEADER = ["cuboid_id", "cix", "ciy", "ciz", "cjx", "cjy", "cjz",
                  "lx", "ly", "lz", "mx", "my", "mz", "eta_raw", "y"]


def _row(sample: MetricSample) -> List[str]:
    values = np.concatenate([sample.pair.c_i, sample.pair.c_j, sample.screw.l, sample.screw.m,
                             [sample.eta_raw, sample.y]])
    return [str(int(sample.cuboid_id))] + [repr(float(v)) for v in values]


def write_dataset_csv(samples: Sequence[MetricSample], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DATASET_HEADER)
        for sample in samples:
            writer.writerow(_row(sample))
    return path


def read_dataset_csv(path) -> List[MetricSample]:
    """
    Load samples. The file stores the screw in Plücker form only, so the
    anchor is restored as the line point closest to the frame origin.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetFormatError(f"dataset file not found: {path}")
    samples = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != DATASET_HEADER:
            raise DatasetFormatError(f"{path}: unexpected header {header}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(DATASET_HEADER):
                raise DatasetFormatError(f"{path}:{line_no}: expected {len(DATASET_HEADER)} "
                                         f"fields, got {len(row)}")
            try:
                cuboid_id = int(row[0])
                values = np.array([float(v) for v in row[1:]])
            except ValueError as exc:
                raise DatasetFormatError(f"{path}:{line_no}: {exc}") from exc
            if not np.all(np.isfinite(values)):
                raise DatasetFormatError(f"{path}:{line_no}: non-finite value")
            try:
                l, m = values[6:9], values[9:12]
                screw = Screw(l, m, np.cross(l, m))
                pair = AntipodalPair.from_points(values[0:3], values[3:6])
                samples.append(MetricSample(pair, screw, float(values[12]), float(values[13]),
                                            cuboid_id))
            except ScrewGraspError as exc:
                raise DatasetFormatError(f"{path}:{line_no}: {exc}") from exc
    return samples
