"""Exception types shared across the package."""


class LsftsError(Exception):
    """Base class for every error raised by this package."""


class GridMismatch(LsftsError):
    """Two curves do not live on the same evaluation grid."""


class NonPositiveBandwidth(LsftsError):
    """A bandwidth must be strictly positive."""


class EmptySupport(LsftsError):
    """All supplied weights are zero; no distribution can be formed."""


class EmptyInput(LsftsError):
    """An operation received an empty value list."""


class QuantileLevelOutOfRange(LsftsError):
    """Quantile levels must lie in (0, 1]."""


class InvalidOrder(LsftsError):
    """Wasserstein order r must satisfy r >= 1."""


class DegenerateNeighborhood(LsftsError):
    """The kernel weight denominator is non-positive or non-finite.

    No observation carries positive mass near the query point: widen the
    bandwidth or keep the rescaled time inside [C1*h, 1 - C1*h].
    """


class SignedWeights(LsftsError):
    """The space kernel produced negative weights; the estimate is a signed
    measure, not a probability distribution."""


class SampleTooSmall(LsftsError):
    """The operation needs more observations than the sample contains."""


class AllCandidatesDegenerate(LsftsError):
    """Every bandwidth candidate produced all-degenerate leave-one-out fits."""


class AllReplicationsDegenerate(LsftsError):
    """Every replication of an experiment hit a degenerate neighborhood."""


class DegenerateDraw(LsftsError):
    """A randomly drawn operator matrix had zero spectral norm twice."""


class SeriesTooShort(LsftsError):
    """The raw series is too short for the requested segmentation."""


class IndexOutOfBlock(LsftsError):
    """The intra-block index lies outside 1..block_len."""
