"""Exception hierarchy shared across the package."""


class BranchMapError(Exception):
    """Base class for all domain errors raised by this package."""


class CoverageError(BranchMapError):
    """A residue class has zero or more than one rule."""

    def __init__(self, message: str, residue: int | None = None):
        super().__init__(message)
        self.residue = residue


class ExactnessError(BranchMapError):
    """A rule does not divide exactly on some residue class.

    Carries the witness residue so map authors can see which class broke.
    """

    def __init__(self, message: str, residue: int | None = None):
        super().__init__(message)
        self.residue = residue


class DegenerateBranchError(BranchMapError):
    """A branch rule has multiplier zero, collapsing its class to a constant."""


class ConfigError(BranchMapError):
    """A scan or analysis was configured inconsistently."""


class MapSyntaxError(BranchMapError):
    """Map text failed to parse.  Position is 1-based."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ResidueRangeError(MapSyntaxError):
    """A rule names a residue outside [0, modulus)."""


class DuplicateResidueError(MapSyntaxError):
    """The same residue appears in more than one rule line."""


class ScaleError(BranchMapError):
    """Logarithmic plot scale requested for values below 1."""


class EmptySampleError(BranchMapError):
    """A statistical estimate was requested over zero samples."""


class StepLimitError(BranchMapError):
    """A computation that must finish (profile, records) hit its step limit."""

    def __init__(self, message: str, starts: list[int] | None = None):
        super().__init__(message)
        self.starts = starts or []
