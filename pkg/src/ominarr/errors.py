"""Exception hierarchy shared by all modules."""


class OminarrError(Exception):
    """Base class for all workbench errors."""


class DimensionMismatch(OminarrError):
    pass


class AmbientMismatch(OminarrError):
    pass


class DomainViolation(OminarrError):
    """A certified-numeric atom was queried outside its declared box."""


class NoRealizationOracle(OminarrError):
    pass


class MalformedPiece(OminarrError):
    pass


class NotClosed(OminarrError):
    pass


class RadiusOrder(OminarrError):
    pass


class NonExactMember(OminarrError):
    """Numeric-only members are rejected by the exact engines."""


class NotSquareFree(OminarrError):
    pass


class NotUnionOfCells(OminarrError):
    pass


class UnsupportedTopology(OminarrError):
    """Betti computation requested for a set shape the engine cannot
    handle directly (mixed-dimension, non-locally-nice pieces)."""


class UnsupportedEngine(OminarrError):
    pass


class MissingEntry(OminarrError):
    pass


class InadmissibleLadder(OminarrError):
    pass


class UnsupportedTubes(OminarrError):
    pass


class EpsilonTooLarge(OminarrError):
    pass


class NotBoundedCurve(OminarrError):
    pass


class NotClosedBounded(OminarrError):
    pass


class NoIntersectionPredicate(OminarrError):
    pass


class CuttingFailed(OminarrError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class UnknownCell(OminarrError):
    pass


class InvalidParameters(OminarrError):
    pass


class DegenerateSamples(OminarrError):
    pass


class EngineAssertionFailure(OminarrError):
    """An internal consistency check failed; indicates an engine bug,
    not a property of the input."""


class ParseError(OminarrError):
    pass
