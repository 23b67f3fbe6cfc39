"""Neural surrogate of the normalised grasp metric."""
from .mlp import MlpModel, ForwardCache, init_model, predict_batch, parameter_count
from .training import TrainConfig, TrainResult, train, evaluate_loss

__all__ = [
    'MlpModel', 'ForwardCache', 'init_model', 'predict_batch', 'parameter_count',
    'TrainConfig', 'TrainResult', 'train', 'evaluate_loss',
]
