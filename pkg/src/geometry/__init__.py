"""Screw algebra, bounding boxes and antipodal contact sampling."""
from .screw import screw_from_point_dir, moment_about_screw, parse_screw
from .boxes import (axis_aligned_box, oriented_box_pca, object_frame_from_box,
                    box_faces, box_in_frame)
from .contacts import sample_antipodal_grid, face_grid, inset_linspace

__all__ = [
    'screw_from_point_dir', 'moment_about_screw', 'parse_screw',
    'axis_aligned_box', 'oriented_box_pca', 'object_frame_from_box',
    'box_faces', 'box_in_frame',
    'sample_antipodal_grid', 'face_grid', 'inset_linspace',
]
