"""
Oracle Module — Finite-difference eigensolver for H = −d²/dx² + V.

The 3-point Laplacian with Dirichlet ends gives a symmetric tridiagonal
matrix, diagonalized with LAPACK through scipy.linalg.eigh_tridiagonal. For
even potentials the problem can be split by parity on the half grid [0, L]:
odd states take a Dirichlet node at x = 0, even states a reflecting row
(symmetrized so the matrix stays symmetric). Both reproduce the full-grid
discretization exactly.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy import linalg

from modules.errors import ConvergenceFailure, GridMismatch, NonFinitePotential, ResourceLimit, UnsupportedFamily
from modules.grid import GridFunction, require_same_grid, second_difference, uniform_grid
from modules.ladder import normalize
from modules.potentials import FamilyId, Sign, eval_partner, get_family

logger = logging.getLogger(__name__)

PARITIES = (None, "even", "odd")


# =============================================================================
# Domain Types
# =============================================================================

@dataclass
class DiscretizedHamiltonian:
    """Symmetric tridiagonal H on the unknowns of a grid."""
    grid: object
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    unknowns: slice
    parity: Optional[str] = None

    @property
    def dimension(self):
        return self.diagonal.size

    def dense(self):
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def apply(self, v):
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def norm_bound(self):
        """Gershgorin bound on the spectral norm (max absolute row sum)."""
        rows = np.abs(self.diagonal).copy()
        rows[:-1] += np.abs(self.off_diagonal)
        rows[1:] += np.abs(self.off_diagonal)
        return float(np.max(rows))


@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: List[GridFunction]
    residuals: List[float]
    grid: object
    parity: Optional[str] = None
    extrapolated: Optional[np.ndarray] = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "grid": self.grid.to_dict(),
            "parity": self.parity,
        }
        if self.extrapolated is not None:
            out["extrapolated"] = [float(e) for e in self.extrapolated]
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


@dataclass
class EigenProblem:
    """
    What `refine_until_converged` solves.

    Args:
        potential: Vectorized callable V(x).
        x_min, x_max: Initial extent. With parity set, x_min must be 0.
        k: Number of lowest states.
        parity: None, 'even' or 'odd' (half-grid split of an even V).
        expand_left, expand_right: Whether each end may move outwards when
            the boundary trial shows sensitivity.
    """
    potential: Callable
    x_min: float
    x_max: float
    k: int
    parity: Optional[str] = None
    expand_left: bool = True
    expand_right: bool = True


# =============================================================================
# Construction and Solution
# =============================================================================

def build_hamiltonian(potential, parity=None, min_points=16):
    """
    Discretize −d²/dx² + V from potential samples.

    Args:
        potential: GridFunction of V. With a parity, the grid must start at 0.
        parity: None (Dirichlet at both ends), 'odd' or 'even'.
        min_points: Smallest accepted grid.

    Raises:
        NonFinitePotential: V has NaN or infinite samples.
    """
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES}, got {parity!r}")
    grid = potential.grid
    if grid.n < min_points:
        raise GridMismatch(f"oracle grid needs at least {min_points} points, got {grid.n}")
    values = np.asarray(potential.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFinitePotential("potential samples contain NaN or infinity")
    if parity is not None and not math.isclose(grid.x_min, 0.0, abs_tol=1e-14):
        raise GridMismatch("parity-split Hamiltonians need a half grid starting at x = 0")

    inv_h2 = 1.0 / grid.h ** 2
    if parity == "even":
        unknowns = slice(0, grid.n - 1)
    else:
        unknowns = slice(1, grid.n - 1)
    diagonal = 2.0 * inv_h2 + values[unknowns]
    off_diagonal = np.full(diagonal.size - 1, -inv_h2)
    if parity == "even":
        # reflecting row at x = 0, symmetrized with diag(1/√2, 1, 1, ...)
        off_diagonal[0] = -math.sqrt(2.0) * inv_h2
    return DiscretizedHamiltonian(grid, diagonal, off_diagonal, unknowns, parity)


def lowest_eigenpairs(H, k, residual_target=1e-8):
    """
    The k lowest eigenpairs of a DiscretizedHamiltonian.

    Eigenvectors are returned on the full grid (zeros at Dirichlet nodes),
    Simpson-normalized with the normalize sign convention.

    Raises:
        ConvergenceFailure: a matrix residual ‖Hv − Ev‖ / (max(|E|, ‖H‖)‖v‖)
            exceeds `residual_target`; ‖H‖ is the Gershgorin bound.
    """
    if k < 1 or k > max(1, H.dimension // 4):
        raise ValueError(f"k must lie in [1, dimension/4 = {H.dimension // 4}], got {k}")
    values, vectors = linalg.eigh_tridiagonal(
        H.diagonal, H.off_diagonal, select="i", select_range=(0, k - 1)
    )
    scale = max(H.norm_bound(), 1.0)
    residuals = []
    eigenvectors = []
    for i in range(k):
        v = vectors[:, i]
        r = np.linalg.norm(H.apply(v) - values[i] * v) / (max(abs(values[i]), scale) * np.linalg.norm(v))
        residuals.append(float(r))

        full = np.zeros(H.grid.n)
        if H.parity == "even":
            v = v.copy()
            v[0] *= math.sqrt(2.0)
        full[H.unknowns] = v
        eigenvectors.append(normalize(GridFunction(H.grid, full, label=f"oracle_{i}")))

    worst = max(residuals)
    if worst > residual_target:
        raise ConvergenceFailure(
            f"eigen residual {worst:.3e} exceeds target {residual_target:.1e}",
            diagnostics={"residuals": residuals, "dimension": H.dimension},
        )
    if np.any(np.diff(values) <= 0):
        raise ConvergenceFailure("eigenvalues are not strictly increasing",
                                 diagnostics={"eigenvalues": values.tolist()})
    return EigenResult(np.asarray(values), eigenvectors, residuals, H.grid, H.parity)


def solve(potential_fn, grid, k, parity=None, residual_target=1e-8, min_points=16):
    """Sample V on a grid and return its k lowest eigenpairs."""
    values = np.asarray(potential_fn(grid.x), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFinitePotential(f"potential is not finite on [{grid.x_min}, {grid.x_max}]")
    V = GridFunction(grid, values, label="V")
    return lowest_eigenpairs(build_hamiltonian(V, parity, min_points), k, residual_target)


# =============================================================================
# Diagnostics
# =============================================================================

def count_nodes(psi, noise=1e-9):
    """Strict sign changes among interior samples above `noise` × peak."""
    interior = psi.values[1:-1]
    peak = psi.peak()
    if peak == 0:
        return 0
    kept = interior[np.abs(interior) > noise * peak]
    return int(np.count_nonzero(np.signbit(kept[1:]) != np.signbit(kept[:-1])))


def residual_norm(V, psi, E):
    """
    ‖−ψ″ + Vψ − Eψ‖₂ / (max(|E|, 1)‖ψ‖₂) on interior points, with the
    3-point second difference.
    """
    require_same_grid(V, psi)
    h = psi.grid.h
    inner = psi.values[1:-1]
    r = -second_difference(psi.values, h) + (V.values[1:-1] - E) * inner
    return float(np.linalg.norm(r) / (max(abs(E), 1.0) * np.linalg.norm(inner)))


def richardson(fine, coarse):
    """Second-order Richardson estimate from spacings h and 2h."""
    fine = np.asarray(fine, dtype=float)
    coarse = np.asarray(coarse, dtype=float)
    return fine + (fine - coarse) / 3.0


def reflect(psi_half, parity):
    """Extend a half-grid state on [0, L] to [−L, L] by parity."""
    grid = psi_half.grid
    full_grid = uniform_grid(-grid.x_max, grid.x_max, 2 * grid.n - 1)
    right = psi_half.values
    left = right[:0:-1] if parity == "even" else -right[:0:-1]
    return normalize(GridFunction(full_grid, np.concatenate([left, right]), psi_half.label))


# =============================================================================
# Convergence
# =============================================================================

def refine_until_converged(problem, target_tol=1e-6, config=None):
    """
    Halve the spacing until successive eigenvalues change by less than
    `target_tol`, then try a wider extent by growing the movable ends by
    `boundary_growth`; repeat with the grown extent while that trial shifts
    any eigenvalue by more than `target_tol`.

    Returns:
        EigenResult on the finest grid, with Richardson `extrapolated` values
        and diagnostics (points, extent, refinements, boundary sensitivity).

    Raises:
        ResourceLimit: the grid would exceed `max_points`.
        ConvergenceFailure: the extent could not be stabilized.
    """
    config = config or {}
    if target_tol < 1e-10:
        raise ValueError("target_tol must be >= 1e-10")
    limits = _Limits(
        target_tol=target_tol,
        max_points=config.get("max_points", 2 ** 20),
        residual_target=config.get("residual_target", 1e-8),
        min_points=config.get("min_points", 16),
    )
    growth = config.get("boundary_growth", 1.25)
    max_expansions = config.get("max_halfwidth_expansions", 8)
    move_left = problem.expand_left and problem.parity is None
    move_right = problem.expand_right

    x_min, x_max = problem.x_min, problem.x_max
    n = 2 * config.get("initial_points", 2001) - 1
    current = None
    refinements = 0
    for expansion in range(max_expansions + 1):
        result, coarse, steps = _refine(problem, x_min, x_max, n, limits, current)
        refinements += steps
        h = result.grid.h
        sensitivity = 0.0
        if move_left or move_right:
            # whole number of spacings per moved end, keeping the point count odd
            step = (growth - 1.0) * (x_max - x_min) / (2.0 if move_left and move_right else 1.0)
            m = int(math.ceil(step / h))
            if not (move_left and move_right):
                m += m % 2
            trial_min = x_min - m * h if move_left else x_min
            trial_max = x_max + m * h if move_right else x_max
            trial_n = result.grid.n + m * (int(move_left) + int(move_right))
            if trial_n > limits.max_points:
                raise ResourceLimit(f"boundary trial needs {trial_n} points > {limits.max_points}")
            trial = _solve(problem, uniform_grid(trial_min, trial_max, trial_n), limits)
            sensitivity = float(np.max(np.abs(trial.eigenvalues - result.eigenvalues)))
            logger.debug("Boundary trial [%g, %g]: max shift %.3e", trial_min, trial_max, sensitivity)
        if sensitivity < target_tol:
            result.extrapolated = richardson(result.eigenvalues, coarse.eigenvalues)
            result.diagnostics = {
                "points": result.grid.n,
                "extent": [x_min, x_max],
                "refinements": refinements,
                "expansions": expansion,
                "boundary_sensitivity": sensitivity,
                "last_change": float(np.max(np.abs(result.eigenvalues - coarse.eigenvalues))),
            }
            logger.info("Oracle converged: %d points on [%g, %g], k=%d", result.grid.n, x_min, x_max, problem.k)
            return result
        # the trial already carries the converged spacing on the grown extent
        x_min, x_max, n, current = trial_min, trial_max, trial_n, trial
    raise ConvergenceFailure(
        f"boundary sensitivity stayed above {target_tol:.1e} after {max_expansions} expansions",
        diagnostics={"extent": [x_min, x_max]},
    )


@dataclass(frozen=True)
class _Limits:
    target_tol: float
    max_points: int
    residual_target: float
    min_points: int


def _solve(problem, grid, limits):
    return solve(problem.potential, grid, problem.k, problem.parity, limits.residual_target, limits.min_points)


def _refine(problem, x_min, x_max, n, limits, current=None):
    """
    Solve on n and (n + 1) / 2 points (spacings h and 2h) and keep halving h
    until the two agree within the target.

    Returns:
        (fine result, result at twice its spacing, number of halvings)
    """
    if n > limits.max_points:
        raise ResourceLimit(f"grid of {n} points exceeds {limits.max_points}")
    previous = _solve(problem, uniform_grid(x_min, x_max, (n + 1) // 2), limits)
    if current is None:
        current = _solve(problem, uniform_grid(x_min, x_max, n), limits)
    refinements = 0
    while True:
        change = float(np.max(np.abs(current.eigenvalues - previous.eigenvalues)))
        logger.debug("Refinement %d: n=%d max change %.3e", refinements, current.grid.n, change)
        if change < limits.target_tol:
            return current, previous, refinements
        n = 2 * current.grid.n - 1
        if n > limits.max_points:
            raise ResourceLimit(f"refinement to {n} points exceeds {limits.max_points}")
        previous, current = current, _solve(problem, uniform_grid(x_min, x_max, n), limits)
        refinements += 1


# =============================================================================
# Catalog Families
# =============================================================================

def family_spectrum(family, params, k, config=None, halfwidth=10.0):
    """
    Lowest k levels of V₋(x, params) for a catalog family, converged with
    `refine_until_converged`.

    Infinite ends start at ±`halfwidth` (or the family's window) and may
    grow. A finite end of the natural domain becomes a Dirichlet wall
    `halfline_delta` inside it; `delta_sensitivity` in the diagnostics is the
    largest eigenvalue shift when that wall moves in by another δ.

    Raises:
        UnsupportedFamily: the family has poles (the sextic has its own
            parity-split solver).
    """
    config = config or {}
    spec = get_family(family)
    if spec.id is FamilyId.SEXTIC:
        raise UnsupportedFamily("the sextic spectrum is solved by the sextic module")
    delta = config.get("halfline_delta", 1e-4)
    domain = spec.domain(params)
    left, right = _family_extent(spec, params, domain, halfwidth, delta)
    potential = lambda x: eval_partner(spec, params, x, Sign.MINUS)
    problem = EigenProblem(
        potential, left, right, k,
        expand_left=not math.isfinite(domain.left),
        expand_right=not math.isfinite(domain.right),
    )
    result = refine_until_converged(problem, config.get("target_tol", 1e-6), config)

    limits = _Limits(0.0, config.get("max_points", 2 ** 20), config.get("residual_target", 1e-8),
                     config.get("min_points", 16))
    grid = result.grid
    shifted_min = grid.x_min + delta if math.isfinite(domain.left) else grid.x_min
    shifted_max = grid.x_max - delta if math.isfinite(domain.right) else grid.x_max
    sensitivity = 0.0
    if (shifted_min, shifted_max) != (grid.x_min, grid.x_max):
        moved = _solve(problem, uniform_grid(shifted_min, shifted_max, grid.n), limits)
        sensitivity = float(np.max(np.abs(moved.eigenvalues - result.eigenvalues)))
    result.diagnostics["delta"] = delta
    result.diagnostics["delta_sensitivity"] = sensitivity
    logger.info("%s oracle: %d levels, delta sensitivity %.3e", spec.name, k, sensitivity)
    return result


def _family_extent(spec, params, domain, halfwidth, delta):
    if spec.window is not None:
        return spec.window(params, halfwidth)
    left = domain.left + delta if math.isfinite(domain.left) else -halfwidth
    right = domain.right - delta if math.isfinite(domain.right) else halfwidth
    return left, right
