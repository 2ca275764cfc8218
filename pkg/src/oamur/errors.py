"""Exception and warning types raised across the package."""


class OamurError(ValueError):
    """Base class for invalid input or guard failures."""


class FeatureExceedsGrid(OamurError):
    pass


class EmptySuperposition(OamurError):
    pass


class ZeroNorm(OamurError):
    pass


class GridMismatch(OamurError):
    pass


class MomentOrderTooLarge(OamurError):
    pass


class DecayGuardViolated(OamurError):
    """The state is not negligible at the grid boundary."""


class NotSelfAdjoint(OamurError):
    pass


class TruncationTooSmall(OamurError):
    pass


class StateFileError(OamurError):
    """A wavefunction file is malformed or truncated."""


class DecayGuardWarning(UserWarning):
    """Non-fatal counterpart of :class:`DecayGuardViolated`."""
