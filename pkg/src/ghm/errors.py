"""Exception types shared across the package."""


class GhmError(Exception):
    """Base class for all package errors."""


class GraphFormatError(GhmError):
    """Malformed graph file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Disconnected(GhmError):
    """Operation requires a connected graph (or a connected vertex pair)."""


class EmptySourceSet(GhmError):
    """A nonempty vertex set was required."""


class VertexOutOfRange(GhmError):
    """Vertex id outside 0..n-1."""


class KOutOfRange(GhmError):
    """Hop parameter outside its valid range."""


class BadEps(GhmError):
    """Sampling accuracy parameter must lie in (0, 1)."""


class TooLarge(GhmError):
    """Input exceeds the configured desk-scale bound for this oracle."""


class GenerationFailed(GhmError):
    """Rejection sampling exhausted its attempt budget."""


class NotChordal(GhmError):
    """Operation requires a chordal input graph."""


class NotAClique(GhmError):
    """The supplied vertex set does not induce a clique."""


class DegenerateStep(GhmError):
    """Separator step has a single component; no cross pairs exist."""


class PreconditionUnmet(GhmError):
    """A randomized routine could not confirm its own output; re-seeding may help."""


class ClassViolation(GhmError):
    """A structural consequence of the assumed graph class failed at runtime.

    ``witness`` holds a JSON-serializable description of the failed check.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
