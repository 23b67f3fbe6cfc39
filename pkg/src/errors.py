"""
Exception hierarchy.

Every error raised by the library derives from ScrewGraspError and belongs to
one of three families. The family decides the command-line exit code.
"""


class ScrewGraspError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class UsageError(ScrewGraspError):
    """Bad arguments or options."""

    exit_code = 1


class ConfigError(UsageError):
    """Configuration failed validation."""

    def __init__(self, message: str, issues=None):
        super().__init__(message)
        self.issues = list(issues or [])


class DataError(ScrewGraspError):
    """Input data is malformed or violates a domain invariant."""

    exit_code = 2


class GeometryError(DataError):
    """Degenerate or inconsistent geometry."""


class GripperFitError(DataError):
    """No face pair of the bounding box fits inside the gripper opening."""


class EmptyRegionError(DataError):
    """A grasp region was required but is empty."""


class CloudFormatError(DataError):
    """Malformed PLY point cloud."""


class MeshFormatError(DataError):
    """Malformed OBJ mesh."""


class ModelFileError(DataError):
    """Malformed or truncated model weight file."""


class DatasetFormatError(DataError):
    """Malformed dataset CSV."""


class DimensionError(DataError):
    """Feature length does not match the model input."""


class StaleCacheError(DataError):
    """Backward pass called with a cache from an older parameter state."""


class NumericalError(ScrewGraspError):
    """Numerical failure."""

    exit_code = 3


class InfeasibleGraspError(NumericalError):
    """Every friction draw of a grasp was infeasible."""


class TrainingDivergedError(NumericalError):
    """Training loss became NaN or infinite."""


class SolverError(NumericalError):
    """The conic solver could not produce a usable answer."""
