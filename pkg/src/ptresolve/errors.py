"""Exception hierarchy.

``PropertyViolation`` subclasses signal that an input lacks a mathematical
property an operation requires (the CLI maps these to exit code 1); all other
``PTError`` subclasses are usage or input errors.
"""
from __future__ import annotations


class PTError(Exception):
    """Base class for every error raised by the package."""


class DuplicateLabel(PTError, ValueError):
    pass


class UniverseTooLarge(PTError, ValueError):
    def __init__(self, size: int, cap: int, what: str = "universe") -> None:
        super().__init__(f"{what} has {size} elements, cap is {cap}")
        self.size = size
        self.cap = cap


class UnknownElement(PTError, KeyError):
    def __init__(self, name: str, universe: str) -> None:
        super().__init__(f"unknown element {name!r} in universe {universe!r}")
        self.name = name
        self.universe = universe

    def __str__(self) -> str:
        return self.args[0]


class UniverseMismatch(PTError, ValueError):
    pass


class FamilyBudgetExceeded(PTError, RuntimeError):
    pass


class BudgetExceeded(PTError, ValueError):
    pass


class NotEndo(PTError, ValueError):
    pass


class KindMismatch(PTError, ValueError):
    pass


class NotAFixpointMember(PTError, ValueError):
    pass


class WrongForm(PTError, ValueError):
    pass


class VerificationFailed(PTError, AssertionError):
    """A constructed object failed its own pointwise check (internal bug guard)."""


class PropertyViolation(PTError):
    """The input lacks a property the operation needs.

    ``witnesses`` holds ``(axiom, inputs)`` pairs, one per failed axiom.
    """

    def __init__(self, message: str, witnesses: tuple = ()) -> None:
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class NotMonotone(PropertyViolation):
    pass


class NotInteriorOrClosure(PropertyViolation):
    pass


class NotInterior(NotInteriorOrClosure):
    pass


class NotClosure(NotInteriorOrClosure):
    pass
