"""Shared exception types."""


class QplabError(Exception):
    pass


class CapExceeded(QplabError):
    """A closure, poset, or lattice search grew past its configured budget."""


class InvalidSpec(QplabError):
    """Malformed group specification (bad cycles, bad JSON shape)."""


class DegreeMismatch(QplabError):
    """A point, chain, or formal sum does not match the expected degree."""


class CycleDetected(QplabError):
    """Transitive closure of the input relation produced x < x."""


class NoInfimum(QplabError):
    """A lower-bounded subset has no infimum, so the i-retraction is undefined."""


class TransitivityViolation(QplabError):
    """A replacement-poset order failed its exhaustive transitivity check.

    This should never fire; it indicates an implementation bug and is fatal.
    """


class PreconditionFailed(QplabError):
    """An operation's stated precondition does not hold for the given input."""


class HypothesisFailed(QplabError):
    """A group-theoretic hypothesis (central product, p'-center, cores) fails."""


class NotUpwardClosed(QplabError):
    """The removal set is not upward-closed where it must be."""


class NotOrderPreserving(QplabError):
    """A claimed poset map does not preserve the order relations."""


class ConclusionFailed(QplabError):
    """All hypotheses of a verified theorem held but its conclusion did not.

    Fatal: the theorem is used as a self-test oracle, so this means a bug.
    """


class BadOvergroup(QplabError):
    """The supplied overgroup does not act faithfully (C_A(L) != 1)."""
