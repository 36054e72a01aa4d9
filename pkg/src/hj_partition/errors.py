"""Exception types raised by hj-partition."""

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class Witness:
    """A machine-readable certificate that some pattern occurs in a host.

    Args:
        pattern: The pattern (Graph or Tournament) that was found.
        mapping: mapping[i] is the host vertex playing pattern vertex i.
        note: Short human-readable label (e.g. "H", "J", "class 3").
    """

    pattern: Any
    mapping: tuple[int, ...]
    note: str = ""


class HJPartitionError(Exception):
    """Base class for every error raised by this package."""


class InputError(HJPartitionError, ValueError):
    """Malformed input: bad vertex sets, unknown pattern indices, bad parameters."""


class HypothesisViolation(HJPartitionError):
    """An input breaks a precondition of the construction (e.g. G contains a forbidden pattern)."""

    def __init__(self, message: str, witness: Optional[Witness] = None) -> None:
        super().__init__(message)
        self.witness = witness


class HeroBudgetExceeded(HypothesisViolation):
    """A class of a hero coloring needs more transitive sets than the budget c."""

    def __init__(self, message: str, class_index: int, needed: int, budget: int) -> None:
        super().__init__(message)
        self.class_index = class_index
        self.needed = needed
        self.budget = budget


class BudgetExceeded(HJPartitionError):
    """An exhaustive search refused to run (or stopped) because of its work budget."""

    def __init__(self, message: str, estimate: float, budget: float) -> None:
        super().__init__(f"{message} (estimate {estimate:.3g} > budget {budget:.3g})")
        self.estimate = estimate
        self.budget = budget


class InvariantViolation(HJPartitionError, AssertionError):
    """A construction guarantee checked at runtime failed."""
