"""Region computation on object clouds and gripper pose proposals."""
from .scorers import BaseScorer, SurrogateScorer, ExactScorer
from .region import (select_face_pair, build_box_field, transfer_to_cloud, threshold_region,
                     compute_region, compute_region_sequence, prepare_object, RegionResult)
from .poses import (filter_approach, poses_from_grid, poses_from_point, pose_to_frame,
                    make_pose)

__all__ = [
    'BaseScorer', 'SurrogateScorer', 'ExactScorer',
    'select_face_pair', 'build_box_field', 'transfer_to_cloud', 'threshold_region',
    'compute_region', 'compute_region_sequence', 'prepare_object', 'RegionResult',
    'filter_approach', 'poses_from_grid', 'poses_from_point', 'pose_to_frame', 'make_pose',
]
