"""
Errors Module — Exception hierarchy shared by every spectral component.

The CLI maps these onto exit codes:
    - input / constraint problems (DomainError, ConstraintViolation,
      UnsupportedFamily) → exit 2
    - everything else raised during a hard check → exit 1
"""


class SpectralError(Exception):
    """Base class for all errors raised by the spectral engine."""


# -----------------------------------------------------------------------------
# Input errors
# -----------------------------------------------------------------------------

class DomainError(SpectralError):
    """A point lies outside a family's domain or too close to a pole."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class UnsupportedFamily(SpectralError):
    """No map or closed form is defined for the requested family."""


class ConstraintViolation(SpectralError):
    """A parameter inequality is violated; the message names the inequality."""

    def __init__(self, message, inequality=None):
        super().__init__(message)
        self.inequality = inequality


class GridMismatch(SpectralError):
    """Two grid functions were combined on different grids."""


class NonFinitePotential(SpectralError):
    """Potential samples handed to the Hamiltonian contain NaN or infinity."""


# -----------------------------------------------------------------------------
# Pipeline errors
# -----------------------------------------------------------------------------

class ShapeInvarianceViolation(SpectralError):
    """The level shift at `level` is not constant within tolerance."""

    def __init__(self, message, level, residual=None):
        super().__init__(message)
        self.level = level
        self.residual = residual


class PoleInChain(SpectralError):
    """The ladder chain needs a superpotential with a pole on the grid."""

    def __init__(self, message, level):
        super().__init__(message)
        self.level = level


class DivergentExponent(SpectralError, OverflowError):
    """exp(-∫W) would exceed the configured exponent cap."""

    def __init__(self, message, exponent=None):
        super().__init__(message)
        self.exponent = exponent


class ZeroNorm(SpectralError):
    """A wavefunction has zero norm on its grid."""


class NonFinite(SpectralError):
    """A wavefunction contains NaN or infinite samples."""


class DegenerateGap(SpectralError):
    """E2 and E1 coincide within tolerance, so the gap ratio is undefined."""


class ConvergenceFailure(SpectralError):
    """The eigensolver did not meet its residual target."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ResourceLimit(SpectralError):
    """Grid refinement would exceed the configured maximum size."""


INPUT_ERRORS = (DomainError, ConstraintViolation, UnsupportedFamily)
