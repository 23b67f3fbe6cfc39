"""Synthetic partial views of primitive objects."""
from .camera import intersect_rays, render_partial_cloud
from .normals import estimate_normals
from .shapes import box_mesh, cylinder_mesh, t_handle_mesh, default_catalog, orbit_cameras

__all__ = [
    'intersect_rays', 'render_partial_cloud', 'estimate_normals',
    'box_mesh', 'cylinder_mesh', 't_handle_mesh', 'default_catalog', 'orbit_cameras',
]
