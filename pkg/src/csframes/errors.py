"""Exception hierarchy shared by every module of the package."""


class CSFramesError(Exception):
    """Base class for all errors raised by csframes."""


class SpecMismatch(CSFramesError):
    """Operands live over algebras with different block structure."""


class DimensionMismatch(CSFramesError):
    """Operand shapes do not conform."""


class LengthMismatch(DimensionMismatch):
    """Module vectors of different length."""


class NotPositive(CSFramesError):
    """An element expected to be positive is not."""


class NotInvertible(CSFramesError):
    """An element is not invertible at the working threshold."""

    def __init__(self, smallest, message=None):
        self.smallest = float(smallest)
        super().__init__(message or f"not invertible (smallest spectral value {self.smallest:.6g})")


class NotProjection(CSFramesError):
    """An operator expected to be a projection is not."""


class RangeMismatch(CSFramesError):
    """A frame element does not map into (or out of) the declared submodule."""


class NotAFrame(CSFramesError):
    """The frame operator is not bounded below (or the index set is empty)."""

    def __init__(self, smallest_eigenvalue, message=None):
        self.smallest_eigenvalue = float(smallest_eigenvalue)
        super().__init__(
            message or f"not a frame (smallest eigenvalue {self.smallest_eigenvalue:.6g})"
        )


class NotUnitalVector(CSFramesError):
    """A vector eta with <eta, eta> != I was supplied where a unital one is required."""


class NotSimilar(CSFramesError):
    """Two frames have different frame projections."""

    def __init__(self, projection_gap):
        self.projection_gap = float(projection_gap)
        super().__init__(f"frames are not right-similar (||P_A - P_B|| = {self.projection_gap:.6g})")


class IncomparableFrames(DimensionMismatch):
    """Frames differ in algebra, rank, index set or codomain projection."""


class NotEquivalent(CSFramesError):
    """Two projections are not Murray-von Neumann equivalent."""

    def __init__(self, ranks_p, ranks_q):
        self.ranks_p = tuple(ranks_p)
        self.ranks_q = tuple(ranks_q)
        super().__init__(f"projections not equivalent: block ranks {self.ranks_p} vs {self.ranks_q}")


class NotParseval(CSFramesError):
    pass


class NotCompatiblePartialIsometry(CSFramesError):
    pass


class NotInCorner(CSFramesError):
    pass


class NotInvertibleInCorner(NotInvertible):
    pass


class NotCornerUnitary(CSFramesError):
    pass


class IncompatibleRanges(CSFramesError):
    pass


class InconsistentIndexing(CSFramesError):
    pass


class DegenerateInnerFrame(CSFramesError):
    pass


class NotLeftInvertible(NotInvertible):
    pass


class UnsupportedDomain(CSFramesError):
    """Operation is only defined for frames on the whole module."""


class VerificationError(CSFramesError):
    """A computed object failed its own postcondition check."""
