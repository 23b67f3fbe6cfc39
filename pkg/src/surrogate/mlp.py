"""
Residual multilayer perceptron for the normalised grasp metric.

Hidden layer k computes ReLU(Norm(h W_k + b_k)). Layers pair into blocks
(1, 2), (3, 4), ...; a block adds its input to its output when the widths
match. A linear head maps the last hidden layer to one scalar, clamped to
[0, 1] in eval mode.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.errors import DimensionError, StaleCacheError, UsageError
from src.surrogate import layers

logger = logging.getLogger(__name__)

NORM_KINDS = ("batch", "layer", "none")
BN_MOMENTUM = 0.1
BN_EPS = 1e-5


@dataclass
class ForwardCache:
    """Activations from one train-mode forward pass."""
    version: int
    layer_caches: List[tuple]
    head_cache: tuple
    output: np.ndarray


class MlpModel:
    """Parameters, running statistics and the passes over them."""

    def __init__(self, input_dim: int = 12, hidden_width: int = 256, n_hidden: int = 8,
                 norm: str = "batch", skip: bool = True, seed: int = 0):
        if input_dim < 1 or hidden_width < 1 or n_hidden < 1:
            raise UsageError("model dimensions must be positive")
        if norm not in NORM_KINDS:
            raise UsageError(f"norm must be one of {NORM_KINDS}, got {norm!r}")
        self.input_dim = int(input_dim)
        self.hidden_width = int(hidden_width)
        self.n_hidden = int(n_hidden)
        self.norm = norm
        self.skip = bool(skip)
        self.version = 0
        self.params: Dict[str, np.ndarray] = {}
        self.buffers: Dict[str, np.ndarray] = {}

        rng = np.random.default_rng(seed)
        fan_in = self.input_dim
        for k in range(1, self.n_hidden + 1):
            bound = np.sqrt(1.0 / fan_in)
            self.params[f"W{k}"] = rng.uniform(-bound, bound, (fan_in, self.hidden_width))
            self.params[f"b{k}"] = np.zeros(self.hidden_width)
            if norm != "none":
                self.params[f"gamma{k}"] = np.ones(self.hidden_width)
                self.params[f"beta{k}"] = np.zeros(self.hidden_width)
            if norm == "batch":
                self.buffers[f"running_mean{k}"] = np.zeros(self.hidden_width)
                self.buffers[f"running_var{k}"] = np.ones(self.hidden_width)
            fan_in = self.hidden_width
        bound = np.sqrt(1.0 / fan_in)
        self.params["W_out"] = rng.uniform(-bound, bound, (fan_in, 1))
        self.params["b_out"] = np.zeros(1)

    # ------------------------------------------------------------ structure

    def blocks(self) -> List[List[int]]:
        """Hidden layer indices grouped two by two; a trailing odd layer stands alone."""
        ids = list(range(1, self.n_hidden + 1))
        return [ids[i:i + 2] for i in range(0, len(ids), 2)]

    def block_has_skip(self, block: List[int]) -> bool:
        in_dim = self.input_dim if block[0] == 1 else self.hidden_width
        return self.skip and in_dim == self.hidden_width

    def param_count(self) -> int:
        return int(sum(p.size for p in self.params.values()))

    def bump_version(self):
        self.version += 1

    # ------------------------------------------------------------ passes

    def _check_input(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise DimensionError(f"expected features of length {self.input_dim}, "
                                 f"got shape {X.shape}")
        return X

    def _hidden(self, k: int, h: np.ndarray, train: bool):
        z, lin_cache = layers.linear_forward(h, self.params[f"W{k}"], self.params[f"b{k}"])
        norm_cache = None
        if self.norm == "batch":
            z, norm_cache, mean, var = layers.batchnorm_forward(
                z, self.params[f"gamma{k}"], self.params[f"beta{k}"],
                self.buffers[f"running_mean{k}"], self.buffers[f"running_var{k}"],
                train, BN_MOMENTUM, BN_EPS)
            if train:
                self.buffers[f"running_mean{k}"] = mean
                self.buffers[f"running_var{k}"] = np.maximum(var, BN_EPS)
        elif self.norm == "layer":
            z, norm_cache = layers.layernorm_forward(
                z, self.params[f"gamma{k}"], self.params[f"beta{k}"], BN_EPS)
        out, relu_cache = layers.relu_forward(z)
        return out, (lin_cache, norm_cache, relu_cache)

    def forward(self, X, mode: str = "train"):
        """
        Run the network. Returns (predictions of shape (N,), cache); the cache
        is None in eval mode.
        """
        if mode not in ("train", "eval"):
            raise UsageError(f"mode must be 'train' or 'eval', got {mode!r}")
        X = self._check_input(X)
        train = mode == "train"
        if train and self.norm == "batch" and X.shape[0] < 2:
            raise UsageError("batch normalisation needs at least 2 rows in train mode")

        h = X
        layer_caches = []
        for block in self.blocks():
            block_in = h
            for k in block:
                h, cache = self._hidden(k, h, train)
                layer_caches.append(cache)
            if self.block_has_skip(block):
                h = h + block_in
        out, head_cache = layers.linear_forward(h, self.params["W_out"], self.params["b_out"])
        out = out.reshape(-1)
        if not train:
            return np.clip(out, 0.0, 1.0), None
        return out, ForwardCache(self.version, layer_caches, head_cache, out)

    def backward(self, cache: ForwardCache, y) -> tuple:
        """Returns (loss, gradients) for the MSE against targets `y`."""
        if cache is None:
            raise UsageError("backward needs a cache from a train-mode forward pass")
        if cache.version != self.version:
            raise StaleCacheError(f"cache from parameter version {cache.version}, "
                                  f"model is at {self.version}")
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.shape != cache.output.shape:
            raise DimensionError(f"expected {cache.output.shape[0]} targets, got {y.shape[0]}")

        loss, dout = layers.mse_loss(cache.output, y)
        grads: Dict[str, np.ndarray] = {}
        dh, grads["W_out"], grads["b_out"] = layers.linear_backward(dout.reshape(-1, 1),
                                                                    cache.head_cache)
        caches = iter(reversed(cache.layer_caches))
        for block in reversed(self.blocks()):
            d_skip = dh if self.block_has_skip(block) else None
            for k in reversed(block):
                lin_cache, norm_cache, relu_cache = next(caches)
                dz = layers.relu_backward(dh, relu_cache)
                if self.norm == "batch":
                    dz, grads[f"gamma{k}"], grads[f"beta{k}"] = layers.batchnorm_backward(
                        dz, norm_cache)
                elif self.norm == "layer":
                    dz, grads[f"gamma{k}"], grads[f"beta{k}"] = layers.layernorm_backward(
                        dz, norm_cache)
                dh, grads[f"W{k}"], grads[f"b{k}"] = layers.linear_backward(dz, lin_cache)
            if d_skip is not None:
                dh = dh + d_skip
        return loss, {name: grads[name] for name in self.params}

    def apply_gradients(self, grads: Dict[str, np.ndarray], lr: float):
        """Plain SGD step; invalidates outstanding caches."""
        for name, grad in grads.items():
            self.params[name] -= lr * grad
        self.bump_version()

    def predict(self, X) -> np.ndarray:
        out, _ = self.forward(X, mode="eval")
        return out

    def describe(self) -> str:
        return (f"MLP(input={self.input_dim}, width={self.hidden_width}, "
                f"hidden={self.n_hidden}, norm={self.norm}, skip={self.skip}, "
                f"params={self.param_count()})")


def init_model(input_dim: int = 12, hidden_width: int = 256, seed: int = 0,
               n_hidden: int = 8, norm: str = "batch", skip: bool = True) -> MlpModel:
    return MlpModel(input_dim, hidden_width, n_hidden, norm, skip, seed)


def predict_batch(model: MlpModel, X) -> np.ndarray:
    """Eval-mode predictions in [0, 1], one per row."""
    return model.predict(X)


def parameter_count(input_dim: int, hidden_width: int, n_hidden: int = 8,
                    norm: str = "batch") -> int:
    """Closed-form trainable parameter count."""
    per_norm = 2 * hidden_width if norm != "none" else 0
    first = input_dim * hidden_width + hidden_width + per_norm
    rest = (n_hidden - 1) * (hidden_width * hidden_width + hidden_width + per_norm)
    return first + rest + hidden_width + 1