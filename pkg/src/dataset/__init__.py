"""Procedural cuboid dataset: solids, labels, features and export."""
from .cuboids import (generate_cuboid_family, label_cuboid, label_family, cuboid_pairs,
                      min_max_normalize, normalize_labels, reduced_subset, pivot_edge)
from .features import encode, encode_batch, encode_samples
from .export import export_dataset, split_samples

__all__ = [
    'generate_cuboid_family', 'label_cuboid', 'label_family', 'cuboid_pairs',
    'min_max_normalize', 'normalize_labels', 'reduced_subset', 'pivot_edge',
    'encode', 'encode_batch', 'encode_samples',
    'export_dataset', 'split_samples',
]
