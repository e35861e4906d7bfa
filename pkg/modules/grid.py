"""
Grid Module — Uniform grids, sampled functions, quadrature and stencils.

All wavefunctions and potential samples live on a uniform grid with an odd
number of points, so composite Simpson quadrature applies without a
trapezoid tail.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from modules.errors import DomainError, GridMismatch, NonFinite
from modules.potentials import DomainKind

logger = logging.getLogger(__name__)

# Points at each end whose derivative uses a lower-order stencil.
EDGE_POINTS = 2


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_min = x_0 < ... < x_{n-1} = x_max."""
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"grid requires x_min < x_max, got ({self.x_min}, {self.x_max})")
        if self.n < 3:
            raise DomainError(f"grid needs at least 3 points, got {self.n}")

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.n - 1)

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max, "n": self.n}


def uniform_grid(x_min, x_max, n):
    """
    Build a uniform grid, bumping an even point count to the next odd one.

    Returns:
        Grid
    """
    n = int(n)
    if n % 2 == 0:
        logger.debug("Grid size %d is even; using %d for Simpson quadrature", n, n + 1)
        n += 1
    return Grid(float(x_min), float(x_max), n)


def symmetric_grid(halfwidth, n):
    return uniform_grid(-halfwidth, halfwidth, n)


def grid_for_domain(domain, n, halfwidth=10.0, halfline_delta=1e-2, interval_margin=1e-2):
    """
    Pick a finite grid inside a natural domain.

    Full line → [-L, L]; half line → [δ, L]; interval → ends pulled in by
    `interval_margin`.
    """
    if domain.kind is DomainKind.FULL_LINE:
        return uniform_grid(-halfwidth, halfwidth, n)
    if domain.kind is DomainKind.HALF_LINE:
        return uniform_grid(domain.left + halfline_delta, halfwidth, n)
    return uniform_grid(domain.left + interval_margin, domain.right - interval_margin, n)


# =============================================================================
# Grid Functions
# =============================================================================

class GridFunction:
    """Real samples on a uniform grid."""

    def __init__(self, grid, values, label=""):
        values = np.array(values, dtype=float)
        if values.shape != (grid.n,):
            raise GridMismatch(f"expected {grid.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFinite(f"grid function {label or '<unnamed>'} has non-finite samples")
        self.grid = grid
        self.values = values
        self.label = label

    @classmethod
    def sample(cls, grid, func, label=""):
        return cls(grid, func(grid.x), label)

    @property
    def x(self):
        return self.grid.x

    def with_values(self, values, label=None):
        return GridFunction(self.grid, values, self.label if label is None else label)

    def interior(self, edge=EDGE_POINTS):
        """Samples with `edge` low-confidence points removed from each end."""
        return self.values[edge:self.grid.n - edge]

    def peak(self):
        return float(np.max(np.abs(self.values)))

    def __repr__(self):
        return f"GridFunction({self.label!r}, n={self.grid.n}, [{self.grid.x_min}, {self.grid.x_max}])"


def require_same_grid(f, g):
    """Raise GridMismatch unless both functions share one grid."""
    if f.grid != g.grid:
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


# =============================================================================
# Quadrature
# =============================================================================

def simpson(values, h):
    """Composite Simpson integral of equally spaced samples."""
    return float(integrate.simpson(np.asarray(values, dtype=float), dx=h))


def cumulative_from_midpoint(values, h):
    """
    Antiderivative ∫_{x_mid}^{x} f on every grid point (Simpson on each pair
    of panels, with a trapezoid-corrected half step for odd offsets).
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    mid = n // 2
    right = integrate.cumulative_simpson(values[mid:], dx=h, initial=0.0)
    left = integrate.cumulative_simpson(values[:mid + 1][::-1], dx=h, initial=0.0)
    out = np.empty(n)
    out[mid:] = right
    out[:mid + 1] = -left[::-1]
    return out


# =============================================================================
# Finite-Difference Stencils
# =============================================================================

def derivative(values, h):
    """
    First derivative: 5-point 4th-order central in the interior, 3-point
    central next to the edges, 2nd-order one-sided at the end points.
    """
    f = np.asarray(values, dtype=float)
    n = f.size
    if n < 5:
        raise GridMismatch("derivative stencil needs at least 5 points")
    d = np.empty(n)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[1] = (f[2] - f[0]) / (2.0 * h)
    d[-2] = (f[-1] - f[-3]) / (2.0 * h)
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    d[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return d


def second_difference(values, h):
    """3-point second difference on the interior points (length n - 2)."""
    f = np.asarray(values, dtype=float)
    return (f[:-2] - 2.0 * f[1:-1] + f[2:]) / (h * h)
