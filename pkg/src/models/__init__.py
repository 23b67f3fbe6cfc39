"""Data models for geometry, metrics, datasets, grasps and reports."""
from .results import ValidationResult, ValidationIssue, Severity, FgeConfig, TrialReport
from .geometry import (Screw, PointCloud, OrientedBox, Face, AntipodalPair,
                       RigidTransform)
from .metric import (ContactSpec, ContactKind, TaskInstance, MetricSolution,
                     SolveStatus, FrictionModel, PhysicsModel, MetricEstimate)
from .dataset import CuboidSpec, MetricSample, FeatureVariant
from .grasp import GripperGeometry, BoxMetricField, ScoredCloud, GraspRegion, GraspPose
from .scene import TriMesh, VirtualCamera

__all__ = [
    'ValidationResult', 'ValidationIssue', 'Severity', 'FgeConfig', 'TrialReport',
    'Screw', 'PointCloud', 'OrientedBox', 'Face', 'AntipodalPair', 'RigidTransform',
    'ContactSpec', 'ContactKind', 'TaskInstance', 'MetricSolution', 'SolveStatus',
    'FrictionModel', 'PhysicsModel', 'MetricEstimate',
    'CuboidSpec', 'MetricSample', 'FeatureVariant',
    'GripperGeometry', 'BoxMetricField', 'ScoredCloud', 'GraspRegion', 'GraspPose',
    'TriMesh', 'VirtualCamera',
]
