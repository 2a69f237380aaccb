"""Exception hierarchy shared by all truecon modules."""

from __future__ import annotations


class TrueconError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TrueconError):
    """Input text does not conform to the expected grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ValidationError(TrueconError):
    """A configuration family violates one of the stability axioms."""


class TooManyEvents(ValidationError):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"structure has {count} events, limit is {limit}")


class NotRooted(ValidationError):
    def __init__(self) -> None:
        super().__init__("the empty configuration is missing from the family")


class NotConnected(ValidationError):
    def __init__(self, config: frozenset):
        self.config = config
        super().__init__(
            f"configuration {set(config) or '{}'} has no single-event removal inside the family"
        )


class UnionNotClosed(ValidationError):
    def __init__(self, x: frozenset, y: frozenset, z: frozenset):
        self.x, self.y, self.z = x, y, z
        super().__init__(
            f"union of {set(x) or '{}'} and {set(y) or '{}'} is bounded by {set(z)} but missing"
        )


class IntersectionNotClosed(ValidationError):
    def __init__(self, x: frozenset, y: frozenset, z: frozenset):
        self.x, self.y, self.z = x, y, z
        super().__init__(
            f"intersection of {set(x)} and {set(y)} (union bounded by {set(z)}) is missing"
        )


class EventUnused(ValidationError):
    def __init__(self, event: int, name: str | None = None):
        self.event = event
        label = name if name is not None else str(event)
        super().__init__(f"event {label} occurs in no configuration")


class NotAConfiguration(TrueconError):
    def __init__(self, members=None):
        self.members = members
        shown = "" if members is None else f" {sorted(members)}"
        super().__init__(f"set{shown} is not a configuration of this structure")


class NotPermissible(TrueconError):
    """Environment does not cover the formula's free identifiers within the configuration."""


class ElaborationTooLarge(TrueconError):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"term elaborates to {count} events, limit is {limit}")


class StateSpaceTooLarge(TrueconError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"game state space exceeds cap ({count} > {cap})")


class DagTooLarge(TrueconError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"formula dag exceeds node cap ({count} > {cap})")


class BudgetExceeded(TrueconError):
    """Enumeration or search exceeded its configured budget."""


class InternalVerificationFailed(TrueconError):
    """A synthesized artifact failed its own re-verification; this is a bug, not an input error."""


class RenderGuardExceeded(TrueconError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"formula too large to render ({count} nodes > {cap})")
