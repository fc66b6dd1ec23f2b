"""Exception types raised by the apcm library."""

from typing import Optional


class ApcmError(ValueError):
    """Base class for every error raised by the library."""


class DataIngestionError(ApcmError):
    """A data file could not be turned into a DataSet."""

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DegenerateDataError(ApcmError):
    """The data cannot support the requested computation (e.g. all points identical)."""


class ContractViolation(ApcmError):
    """A caller broke an operation precondition."""


class ClusterCollapseError(ApcmError):
    """A cluster lost all of its weight and its representative is undefined."""

    def __init__(self, clusters):
        self.clusters = list(clusters)
        super().__init__(f"Clusters with zero total compatibility: {self.clusters}")


class UndefinedMeasureError(ApcmError):
    """A validation measure is undefined for the given input."""


class DegenerateLocusError(ApcmError):
    """The u_1 = u_2 locus is a hyperplane, not a sphere (equal eta values)."""
