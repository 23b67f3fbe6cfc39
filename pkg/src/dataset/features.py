"""
Feature encodings of (antipodal pair, task screw) for the surrogate.

All quantities are expected in the object frame {O}.
"""
from typing import Sequence

import numpy as np

from src.errors import GeometryError
from src.models.dataset import FeatureVariant
from src.models.geometry import AntipodalPair, Screw


def encode(variant: FeatureVariant, pair: AntipodalPair, screw: Screw) -> np.ndarray:
    """
    plucker12  [c_i, c_j, l, m]
    pointdir12 [c_i, c_j, l, p]
    combined15 [c_i, c_j, l, m, p]
    arms18     combined15 + [|g_c|, |p|, |g_c - p|] with g_c the grasp midpoint
    """
    variant = FeatureVariant(variant)
    head = [pair.c_i, pair.c_j, screw.l]
    if variant is FeatureVariant.PLUCKER12:
        return np.concatenate(head + [screw.m])
    if screw.p is None:
        raise GeometryError(f"{variant.value} features need a screw anchor")
    p = screw.p
    if variant is FeatureVariant.POINTDIR12:
        return np.concatenate(head + [p])
    combined = np.concatenate(head + [screw.m, p])
    if variant is FeatureVariant.COMBINED15:
        return combined
    g_c = pair.center
    arms = np.array([np.linalg.norm(g_c), np.linalg.norm(p), np.linalg.norm(g_c - p)])
    return np.concatenate([combined, arms])


def encode_batch(variant: FeatureVariant, pairs: Sequence[AntipodalPair],
                 screw: Screw) -> np.ndarray:
    """One row per pair, all sharing `screw`."""
    variant = FeatureVariant(variant)
    if not pairs:
        return np.zeros((0, variant.length))
    return np.vstack([encode(variant, pair, screw) for pair in pairs])


def encode_samples(variant: FeatureVariant, samples) -> np.ndarray:
    """Feature matrix of labeled samples, each with its own screw."""
    variant = FeatureVariant(variant)
    if not samples:
        return np.zeros((0, variant.length))
    return np.vstack([encode(variant, s.pair, s.screw) for s in samples])
