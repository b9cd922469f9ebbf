"""Error taxonomy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to, so error
handling stays in one place.
"""


class SolenoidDimError(Exception):
    exit_code = 1


class SpecParseError(SolenoidDimError):
    """Malformed config text: unknown key/section, bad literal, missing field."""

    exit_code = 2


class InvalidInputError(SolenoidDimError):
    """A function argument violates its contract (non-finite matrix, eps <= 0, ...)."""

    exit_code = 2


class ShapeError(InvalidInputError):
    """Matrix shape incompatible with the requested operation."""


class DomainError(InvalidInputError):
    """A point lies outside the solid torus the map is defined on."""


class InvalidWindowError(InvalidInputError):
    """A regression window with too few or saturated scales."""


class BudgetError(SolenoidDimError):
    """An enumeration would exceed the configured word/point budget."""

    exit_code = 3


class InvalidSpecError(SolenoidDimError):
    """Map parameters violate the model invariants (rates, domains, degeneracies)."""

    exit_code = 4
