"""Exception types shared across the package."""


class MapEvalError(Exception):
    """Base class for failures while evaluating a planar map."""


class SingularityError(MapEvalError):
    """A denominator (or other singular expression) vanished within tolerance."""


class DomainError(MapEvalError):
    """A point lies outside the rectangular domain of a map."""


class NoConvergenceError(Exception):
    """An iterative solver ran out of iterations or hit a singular system."""


class DegenerateRootError(NoConvergenceError):
    """A period-two search converged to a plain fixed point."""


class ConstraintError(ValueError):
    """A built-in system was constructed with parameters violating its constraints."""


class HypothesisError(Exception):
    """A precondition of a curve/classification routine does not hold.

    The message names the failed verdict so callers (and the CLI, which maps
    this to exit code 4) can report it.
    """


class ParseError(ValueError):
    """Syntax error in the expression language.

    Attributes:
        offset: 0-based byte offset of the offending token.
        expected: tuple of token descriptions that would have been accepted.
    """

    def __init__(self, message: str, offset: int, expected: tuple = ()):
        super().__init__(f"{message} at offset {offset}"
                         + (f" (expected {', '.join(expected)})" if expected else ""))
        self.offset = offset
        self.expected = tuple(expected)


class UnboundParameterError(KeyError):
    """An expression references a parameter with no bound value."""
