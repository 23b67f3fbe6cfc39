"""
Minibatch SGD on the mean squared error.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.errors import DataError, DimensionError, TrainingDivergedError, UsageError
from src.surrogate.mlp import MlpModel

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    lr: float = 0.001
    epochs: int = 150
    batch_size: int = 150
    seed: int = 0
    loss: str = "mse"

    def __post_init__(self):
        if not self.lr > 0:
            raise UsageError(f"learning rate must be positive, got {self.lr}")
        if self.batch_size < 2:
            raise UsageError("batch size must be at least 2")
        if self.epochs < 1:
            raise UsageError("training needs at least one epoch")
        if self.loss != "mse":
            raise UsageError(f"unsupported loss {self.loss!r}")


@dataclass
class TrainResult:
    model: MlpModel
    losses: List[float] = field(default_factory=list)       # mean training loss per epoch
    val_losses: List[float] = field(default_factory=list)

    @property
    def final_loss(self) -> float:
        return self.losses[-1] if self.losses else float("nan")


def batch_indices(n: int, batch_size: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Shuffled minibatches; a trailing batch smaller than 2 rows is dropped."""
    order = rng.permutation(n)
    batches = [order[i:i + batch_size] for i in range(0, n, batch_size)]
    if batches and len(batches[-1]) < 2:
        batches.pop()
    return batches


def evaluate_loss(model: MlpModel, X, y) -> float:
    """Eval-mode MSE."""
    pred = model.predict(X)
    return float(np.mean((pred - np.asarray(y, dtype=float).reshape(-1)) ** 2))


def train(model: MlpModel, X, y, cfg: Optional[TrainConfig] = None,
          X_val=None, y_val=None,
          progress_callback: Optional[Callable[[int, int, float], None]] = None) -> TrainResult:
    """
    Train `model` in place and return it with the per-epoch loss trace.

    Shuffling uses a generator seeded from `cfg.seed`, so two runs from the
    same initial model give identical traces.
    """
    cfg = cfg or TrainConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if len(X) == 0:
        raise DataError("training set is empty")
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise DimensionError(f"expected features of length {model.input_dim}, got shape {X.shape}")
    if len(X) != len(y):
        raise DimensionError(f"{len(X)} feature rows but {len(y)} labels")
    if np.any(y < 0) or np.any(y > 1):
        raise DataError("labels must lie in [0, 1]")
    if len(X) < 2:
        raise DataError("training needs at least two samples")

    rng = np.random.default_rng(cfg.seed)
    result = TrainResult(model)
    for epoch in range(1, cfg.epochs + 1):
        total, count = 0.0, 0
        for step, idx in enumerate(batch_indices(len(X), cfg.batch_size, rng)):
            _, cache = model.forward(X[idx], mode="train")
            loss, grads = model.backward(cache, y[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"loss became {loss} at epoch {epoch}, batch {step} "
                                            f"(lr={cfg.lr}); lower the learning rate")
            model.apply_gradients(grads, cfg.lr)
            total += loss * len(idx)
            count += len(idx)
        epoch_loss = total / count
        result.losses.append(epoch_loss)
        if X_val is not None and len(X_val):
            result.val_losses.append(evaluate_loss(model, X_val, y_val))
        logger.debug("epoch %d/%d loss %.6f", epoch, cfg.epochs, epoch_loss)
        if progress_callback:
            progress_callback(epoch, cfg.epochs, epoch_loss)
    logger.info("trained %s for %d epochs, final loss %.6f",
                model.describe(), cfg.epochs, result.final_loss)
    return result
