"""Exception hierarchy shared by the library and the command line."""


class GalcohError(Exception):
    """Base class for every error raised by this package."""


class WellDefinednessError(GalcohError):
    """A map does not respect the relations of its source."""


class GroupLawError(GalcohError):
    """A multiplication table, subgroup or action violates the group law."""


class UnsupportedDegreeError(GalcohError):
    """A cohomological degree lies outside the configured window."""


class SizeGuardError(GalcohError):
    """A computation would exceed the configured size limits."""


class CocycleError(GalcohError):
    """A cochain fails the cocycle identity."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RootDatumError(GalcohError):
    """Root-datum input violates its invariants."""


class ScenarioError(GalcohError):
    """Place sets, scenarios or tower data are inconsistent."""


class CrossCheckError(GalcohError):
    """Two independent computations disagree; this indicates a bug."""
