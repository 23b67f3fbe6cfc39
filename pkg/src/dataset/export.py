"""
Seeded train/validation split written as dataset CSV files.
"""
import logging
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from src.errors import DataError, UsageError
from src.io.dataset_csv import write_dataset_csv
from src.models.dataset import MetricSample

logger = logging.getLogger(__name__)

TRAIN_FILE = "train.csv"
VAL_FILE = "val.csv"


def split_samples(samples: Sequence[MetricSample], train_fraction: float = 0.8,
                  seed: int = 0) -> Tuple[list, list]:
    """Shuffle with a seeded generator and cut at round(train_fraction * n)."""
    if not 0.0 < train_fraction <= 1.0:
        raise UsageError(f"train fraction must lie in (0, 1], got {train_fraction}")
    order = np.random.default_rng(seed).permutation(len(samples))
    n_train = int(round(train_fraction * len(samples)))
    train = [samples[i] for i in order[:n_train]]
    val = [samples[i] for i in order[n_train:]]
    return train, val


def export_dataset(samples: Sequence[MetricSample], out_dir, train_fraction: float = 0.8,
                   seed: int = 0) -> Tuple[Path, Path]:
    """Write train.csv and val.csv into `out_dir`."""
    if not samples:
        raise DataError("cannot export an empty dataset")
    out_dir = Path(out_dir)
    train, val = split_samples(samples, train_fraction, seed)
    train_path = write_dataset_csv(train, out_dir / TRAIN_FILE)
    val_path = write_dataset_csv(val, out_dir / VAL_FILE)
    logger.info("wrote %d training and %d validation rows to %s", len(train), len(val), out_dir)
    return train_path, val_path
