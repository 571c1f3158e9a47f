"""Exception types shared across the package."""

from __future__ import annotations


class HocolimError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HocolimError):
    """Malformed or inconsistent input data (maps to CLI exit code 2)."""


class SchemaError(InputError):
    pass


class CycleDetected(InputError):
    pass


class NotGraded(InputError):
    pass


class DiamondViolation(HocolimError):
    def __init__(self, lower, upper, count: int):
        super().__init__(
            f"interval ({lower!r}, {upper!r}) has {count} intermediate elements, expected 2"
        )
        self.lower = lower
        self.upper = upper
        self.count = count


class Infeasible(HocolimError):
    pass


class NotAComplex(HocolimError):
    pass


class NotFunctorial(InputError):
    pass


class TruncationExceeded(HocolimError):
    pass


class NotEpimorphism(InputError):
    pass


class NonSalient(InputError):
    pass


class RaysNotPrimitive(InputError):
    pass


class NotCharacteristic(HocolimError):
    pass


class NotEquivariantlyFormal(HocolimError):
    pass


class ExactnessFailure(HocolimError):
    def __init__(self, element, position):
        super().__init__(f"resolution not exact at element {element!r}, position {position}")
        self.element = element
        self.position = position


class OutOfRange(HocolimError):
    pass
