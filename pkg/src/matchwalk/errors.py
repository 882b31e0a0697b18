"""Exception types shared across the package."""

from __future__ import annotations


class MatchwalkError(Exception):
    """Base class for all matchwalk errors."""


class ParseError(MatchwalkError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class StateSpaceTooLargeError(MatchwalkError):
    """State-space enumeration exceeded its budget; `count` is how far it got."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class PathBudgetExceededError(MatchwalkError):
    """The flow's path family exceeded the configured path budget."""

    def __init__(self, message: str, worst_pair=None, largest_j: int = 0):
        super().__init__(message)
        self.worst_pair = worst_pair
        self.largest_j = largest_j


class NoAugmentingPathError(MatchwalkError):
    """No augmenting path was found.

    `matching_is_maximum` distinguishes the certified case (the matching
    already has maximum size, so no augmenting path exists at all) from a
    violated length precondition (a path exists but none short enough).
    """

    def __init__(self, message: str, matching_is_maximum: bool,
                 matching_number: int | None = None):
        super().__init__(message)
        self.matching_is_maximum = matching_is_maximum
        self.matching_number = matching_number


class NonErgodicError(MatchwalkError):
    """The chain is not ergodic; `components` is the partition certificate."""

    def __init__(self, message: str, components=()):
        super().__init__(message)
        self.components = tuple(tuple(c) for c in components)


class CertificationError(MatchwalkError):
    """A structural guarantee of a certified construction failed.

    Raised when a canonical path leaves the state space, repeats a state,
    an encoding fails to be a matching of the right size, or the gadget
    slack identity is violated.  These would falsify the constructions the
    library certifies, so they are hard failures rather than report entries.
    """
