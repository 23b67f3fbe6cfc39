"""Final grasp evaluation, precision and the random-screw trial protocol."""
from .fge import (compute_region_exact, fge, fge_from_fields, precision_at_threshold,
                  rank_correlation, top_indices)
from .screws import TaskScrew, sample_task_screw, bottom_edges, transform_contacts

__all__ = [
    'compute_region_exact', 'fge', 'fge_from_fields', 'precision_at_threshold',
    'rank_correlation', 'top_indices',
    'TaskScrew', 'sample_task_screw', 'bottom_edges', 'transform_contacts',
]
