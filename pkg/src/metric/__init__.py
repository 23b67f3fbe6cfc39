"""Exact grasp metric: conic program, interior-point solver and LP oracle."""
from .program import ConicProgram, ConeDims, build_program
from .socp import solve, solve_conic
from .grasp_metric import (grasp_metric, estimate_metric, solve_instance, metric_or_nan,
                           fill_unsupportable, robot_contacts, environment_contacts)
from .polyhedral import polyhedral_metric

__all__ = [
    'ConicProgram', 'ConeDims', 'build_program',
    'solve', 'solve_conic',
    'grasp_metric', 'estimate_metric', 'solve_instance', 'metric_or_nan', 'fill_unsupportable',
    'robot_contacts', 'environment_contacts',
    'polyhedral_metric',
]
