"""Task-oriented antipodal grasp synthesis from point clouds."""
__version__ = "0.1.0"
