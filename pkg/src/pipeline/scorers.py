"""
Vertex scorers for the box grid: the trained surrogate or the exact metric.

Both return normalised scores per antipodal pair, so the rest of the
pipeline does not care which one produced them.
"""
import logging
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.dataset.cuboids import normalize_labels
from src.dataset.features import encode_batch
from src.metric.grasp_metric import metric_or_nan
from src.models.dataset import FeatureVariant
from src.models.geometry import AntipodalPair, Screw
from src.models.metric import ContactSpec, FrictionModel, PhysicsModel
from src.surrogate.mlp import MlpModel, predict_batch

logger = logging.getLogger(__name__)


class BaseScorer(ABC):
    """Assigns a score in [0, 1] to each antipodal pair for one task screw."""

    name = "base"

    @abstractmethod
    def score(self, pairs: Sequence[AntipodalPair],
              screw: Screw) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """
        Returns (scores, raw_eta). raw_eta is None when the scorer does not
        compute the physical metric.
        """


class SurrogateScorer(BaseScorer):
    """Neural prediction from the encoded features."""

    name = "surrogate"

    def __init__(self, model: MlpModel, variant: FeatureVariant = FeatureVariant.PLUCKER12):
        self.model = model
        self.variant = FeatureVariant(variant)

    def score(self, pairs, screw):
        features = encode_batch(self.variant, list(pairs), screw)
        return predict_batch(self.model, features), None


class ExactScorer(BaseScorer):
    """
    Friction-averaged η from the conic program, min-max normalised over the
    pairs. A pair with no feasible draw scores 0.
    """

    name = "exact"

    def __init__(self, env: Optional[List[ContactSpec]] = None,
                 fm: Optional[FrictionModel] = None,
                 physics: Optional[PhysicsModel] = None, com=None):
        self.env = list(env or [])
        self.fm = fm or FrictionModel()
        self.physics = physics or PhysicsModel()
        self.com = np.zeros(3) if com is None else np.asarray(com, dtype=float)

    def etas(self, pairs, screw) -> np.ndarray:
        """Raw η per pair; NaN where no friction draw is feasible."""
        return np.array([metric_or_nan(pair, screw, self.env, self.fm, self.physics.mass,
                                       self.com, self.physics) for pair in pairs])

    def score(self, pairs, screw):
        etas, scores, n_unsupportable = normalize_labels(self.etas(pairs, screw))
        if n_unsupportable:
            logger.warning("%d of %d pairs unsupportable, scored 0", n_unsupportable, len(etas))
        return scores, etas
