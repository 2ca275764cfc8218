"""Angle / orbital-angular-momentum uncertainty relations on planar wavefunctions."""

from ._kernels import backend
from .errors import (
    DecayGuardViolated,
    DecayGuardWarning,
    EmptySuperposition,
    FeatureExceedsGrid,
    GridMismatch,
    MomentOrderTooLarge,
    NotSelfAdjoint,
    OamurError,
    StateFileError,
    TruncationTooSmall,
    ZeroNorm,
)
from .gridstate import (
    GridSpec,
    GridState,
    LaguerreGauss,
    OffsetGauss,
    RingGauss,
    Superposition,
    default_grid,
    normalize,
    overlap,
    random_state,
    rotate_quarter,
    superpose,
    synthesize,
    two_ring,
)
from .inequality import InequalityReport, check_all
from .operators import CovarianceReport, MomentReport, OamReport

__version__ = "0.1.0"
