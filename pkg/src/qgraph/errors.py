"""Exception hierarchy shared by all qgraph modules."""


class QGraphError(Exception):
    """Base class for every error raised by qgraph."""


class InvalidGraphError(QGraphError, ValueError):
    """A graph or potential violates one of its invariants."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems) or "invalid graph")


class SizeCapError(QGraphError):
    """A computation would exceed a configured resource cap."""


class ConsistencyError(QGraphError):
    """An internal cross-check failed (bug or unsupported input)."""


class ClassRefusal(QGraphError):
    """The requested method is not applicable to this regularity class."""


class PreconditionError(QGraphError):
    """An operation's stated assumptions do not hold for this input."""


class SearchWindowError(QGraphError):
    """No root was found inside the search window."""


class InadmissibleCodeError(QGraphError, ValueError):
    """A symbolic code uses a forbidden bond-to-bond transition."""
