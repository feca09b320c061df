"""Exception types shared across the package."""


class PhasecovError(Exception):
    """Base class for all phasecov errors."""


class DimensionError(PhasecovError):
    """Operand dimensions are incompatible with the requested operation."""


class HermiticityError(PhasecovError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class RangeError(PhasecovError):
    """An index or size argument is outside its admissible range."""
