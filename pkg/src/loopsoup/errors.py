"""Exception types shared across the package."""


class LoopSoupError(Exception):
    """Base class for every error raised by this package."""


class BadGraph(LoopSoupError):
    """Malformed graph data: bad vertices, edges, conductances or killing."""


class NonTransient(LoopSoupError):
    """The energy form is not positive definite, so the chain is not transient."""


class BadForm(LoopSoupError):
    """A one-form argument is not antisymmetric or has the wrong shape."""


class TooLarge(LoopSoupError):
    """Input exceeds the hard size cap of an exact combinatorial kernel."""


class Disconnected(LoopSoupError):
    """The graph is not connected where connectivity is required."""


class EmptyNetwork(LoopSoupError):
    """A network with no jumps was passed where jumps are required."""


class TailTooHeavy(LoopSoupError):
    """The loop-length tail cannot be cut to the requested budget in bounds."""


class NotEulerian(LoopSoupError):
    """Jump counts violate the per-vertex in/out balance."""


class ZeroNetwork(LoopSoupError):
    """The zero network was passed where a nonzero one is required."""


class DisconnectedSupport(LoopSoupError):
    """The support of a network is not connected."""


class SingularTwist(LoopSoupError):
    """A twisted kernel is singular; the generating function is undefined."""


class BudgetExceeded(LoopSoupError):
    """Enumeration would have to pass the hard size cap to meet the budget."""


class BadPartition(LoopSoupError):
    """Source and target sets must be disjoint, nonempty and in range."""


class BadSupport(LoopSoupError):
    """The killing measure is not supported exactly where required."""


class DuplicateIndex(LoopSoupError):
    """Repeated edge or vertex indices where distinct ones are required."""


class BadChi(LoopSoupError):
    """A diagonal weight vector fails the required domination constraint."""


class EmptyBasis(LoopSoupError):
    """The cycle space is trivial; there is nothing to build on."""


class NonIntegral(LoopSoupError):
    """A flow failed to decompose integrally over the cycle basis."""


class GridTooCoarse(LoopSoupError):
    """A Fourier grid is too coarse to capture the required mass."""


class MismatchBeyondTolerance(LoopSoupError):
    """Two supposedly equal internal computations disagree."""
