"""Instanton partition-function coefficients by fixed-point sums, contour
quadrature and deformed-Virasoro Shapovalov inversion."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BudgetExceeded,
    CapExceeded,
    DegenerateFactor,
    GridViolation,
    InadmissibleParameters,
    InstantonError,
    PoleHit,
    RegimeViolation,
    SingularKacMatrix,
)
from .nekrasov import ExponentialParams, MultiplicativeParams  # noqa: F401
from .partitions import MultiPartition, Partition  # noqa: F401
