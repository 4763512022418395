"""Exception types shared across the package."""


class LinextError(Exception):
    """Base class for all package-specific errors."""


class CycleError(LinextError):
    """The input relation digraph contains a directed cycle."""


class InconsistentRelation(LinextError):
    """Adding x < y would contradict an existing relation y < x."""


class SizeCapExceeded(LinextError):
    """The poset is too large for the requested operation."""


class IdealCapExceeded(LinextError):
    """The ideal lattice would exceed the configured cap; fall back to sampling."""


class EnumCapExceeded(LinextError):
    """More linear extensions than the enumeration cap allows."""


class BudgetExceeded(LinextError):
    """A brute-force search would exceed its evaluation budget."""


class NotAChain(LinextError):
    """The supplied element sequence is not an increasing chain of the poset."""


class InvalidMatching(LinextError):
    """A fractional matching violates a per-element or per-weight constraint."""

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class StatUnavailable(LinextError):
    """A required exact statistic (usually win) was not computed."""


class DomainError(LinextError):
    """A geometric point violates its polytope constraints beyond tolerance."""


class NoFeasibleKL(LinextError):
    """No (k, l) pair satisfies the construction's constraints."""


class ParseError(LinextError):
    """Malformed poset file."""
