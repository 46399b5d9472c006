"""Exception taxonomy shared by all modules.

Every structured failure raises a subclass of JacwallError so that callers
(and the CLI exit-code mapping) can distinguish malformed input, degenerate
parameters, graph-shape violations, and formula precondition violations.
"""

from __future__ import annotations


class JacwallError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(JacwallError):
    """Unparseable or schema-violating external input (JSON, CLI flags)."""


class InvalidGraph(JacwallError):
    """A marked graph violating connectedness, stability, or basic typing."""


class InvalidGN(JacwallError):
    """A (genus, markings) pair outside the supported range."""


class InvalidParameter(JacwallError):
    """A stability parameter or polytope label with the wrong coordinate domain."""


class LoopEdge(JacwallError):
    """An operation that requires a non-loop edge was given a loop."""


class NotTreeLike(JacwallError):
    """An operation restricted to loop-free circuit rank 0 was given a graph of positive rank."""


class InadmissiblePair(JacwallError):
    """A pair (i, S) that does not index a boundary divisor for the given (g, n)."""


class DegenerateParameter(JacwallError):
    """A stability parameter lying on a wall, where an off-wall one is required.

    Carries the first wall hit: ``pair`` is the boundary pair and ``d`` the
    integer with the offending coordinate equal to d + 1/2, so the two
    adjacent chambers have labels d and d + 1 at that pair.
    """

    def __init__(self, message: str, pair=None, d=None):
        super().__init__(message)
        self.pair = pair
        self.d = d


class DegreeSumMismatch(JacwallError):
    """A degree vector whose total is not g - 1 (or of the wrong length)."""


class NonAmple(JacwallError):
    """A polarization vector with a nonpositive entry."""


class GraphMismatch(JacwallError):
    """Operands defined over different graphs, or over a graph with the wrong genus or markings."""


class EmptySubset(JacwallError):
    """A vertex subset that must be nonempty was empty."""


class EmptyOrFullSubset(JacwallError):
    """A vertex subset that must be proper and nonempty was empty or everything."""


class NoNegativeDegree(JacwallError):
    """A degree vector without a negative entry, where one is required."""


class BasisMismatch(JacwallError):
    """Divisor classes (or coefficient maps) over different (g, n), or a coefficient on a non-basis element."""
