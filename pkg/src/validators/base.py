"""
Base validator class with shared utilities.
"""
from abc import ABC, abstractmethod
from typing import List, Sequence

import numpy as np

from src.models.results import Severity, ValidationIssue, ValidationResult


class BaseValidator(ABC):
    """Base class for configuration validators."""

    @abstractmethod
    def validate(self, target) -> ValidationResult:
        """
        Validate a configuration object.

        Returns:
            ValidationResult with errors, warnings and info issues
        """
        pass

    def _check_less_than(self, small: float, large: float, small_key: str, large_key: str,
                         category: str) -> List[ValidationIssue]:
        """small < large, reported against `small_key`."""
        if small < large:
            return []
        return [ValidationIssue(
            severity=Severity.ERROR,
            category=category,
            message=f"{small_key} ({small}) must be smaller than {large_key} ({large})",
            key_path=small_key,
            suggestion=f"Decrease {small_key} or increase {large_key}"
        )]

    def _check_unit_vector(self, vec: Sequence[float], key_path: str,
                           category: str) -> List[ValidationIssue]:
        """Nonzero vectors pass with a warning when they are not unit length."""
        norm = float(np.linalg.norm(np.asarray(vec, dtype=float)))
        if norm < 1e-12:
            return [ValidationIssue(
                severity=Severity.ERROR,
                category=category,
                message=f"{key_path} must be nonzero",
                key_path=key_path
            )]
        if abs(norm - 1.0) > 1e-6:
            return [ValidationIssue(
                severity=Severity.WARNING,
                category=category,
                message=f"{key_path} has length {norm:.4g} and will be normalised",
                key_path=key_path,
                suggestion="Give a unit vector"
            )]
        return []

    @staticmethod
    def _result(source: str, issues: List[ValidationIssue]) -> ValidationResult:
        """Sort issues by severity into a ValidationResult."""
        errors = [i for i in issues if i.severity == Severity.ERROR]
        return ValidationResult(
            source=source,
            valid=not errors,
            errors=errors,
            warnings=[i for i in issues if i.severity == Severity.WARNING],
            info=[i for i in issues if i.severity == Severity.INFO],
        )
