"""
Sextic Module — The symmetric triple-well family built from
W = Ax³ + Bx − Dx/(1 + Gx²).

Two free parameters (B₀, G₀) fix the level-0 point
a₀ = (½(2B₀ − G₀)G₀, B₀, −2G₀, G₀). With S = B₀x²/2 + A₀x⁴/4:

    V₊(x, a₀) = A₀²x⁶ + 2A₀B₀x⁴ + (B₀² + 7A₀)x² + B₀ + 2G₀     (a polynomial)
    V_tw(x)   = V₋(x, a₁) = V₊(x, a₀) − C₀,  C₀ = 4(G₀ − B₀)
    V(x)      = V_tw(x) + ε,  ε = −min V_tw

W(a₁) has poles at x² = 1/(G₀ − 2B₀), so V_tw is always evaluated through
V₊(x, a₀). The exact eigenstates of V are

    φ₀ = e^{+∫W(a₀)} = (1 + G₀x²)e^S      E = ε − C₀   (nodeless)
    χ  = e^{−∫W(a₁)} = (1 + G₁x²)e^S      E = ε         (two nodes)

and the odd level between them comes from the finite-difference oracle.
"""

import math
import logging
import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from modules import oracle, published_forms
from modules.errors import ConstraintViolation, ConvergenceFailure, DegenerateGap, GridMismatch
from modules.grid import GridFunction, uniform_grid
from modules.ladder import normalize
from modules.potentials import FamilyId, Params, Sign, eval_partner
from modules.shape_invariance import Level, Provenance, Spectrum, energies_recursive

logger = logging.getLogger(__name__)

# Upper edge of the triple-well band: B₀² + 7A₀ = 0, in units of B₀.
TRIPLE_WELL_UPPER_RATIO = (7.0 + 3.0 * math.sqrt(7.0)) / 7.0
RHO_HARMONIC = 0.5


# =============================================================================
# Domain Types
# =============================================================================

@dataclass(frozen=True)
class SexticConfig:
    B0: float
    G0: float

    def __post_init__(self):
        if not (math.isfinite(self.B0) and math.isfinite(self.G0)):
            raise ConstraintViolation("B0 and G0 must be finite", inequality="finite")

    @property
    def ratio(self):
        return self.G0 / self.B0

    def scaled(self, lam):
        return SexticConfig(lam * self.B0, lam * self.G0)

    def to_dict(self):
        return {"B0": self.B0, "G0": self.G0}


class WellClass(Enum):
    SINGLE_WELL = "single-well"
    DOUBLE_WELL = "double-well"
    TRIPLE_WELL = "triple-well"
    DEGENERATE = "degenerate"


class NormalizabilityClass(Enum):
    NORMALIZABLE = "normalizable"
    DIVERGENT = "divergent"
    COMPLEMENT_NORMALIZABLE = "complement-normalizable"


@dataclass
class WellGeometry:
    classification: WellClass
    critical_points: List[Tuple[float, float]]
    x0_sq: Optional[float] = None
    epsilon: Optional[float] = None

    def to_dict(self):
        return {
            "classification": self.classification.value,
            "critical_points": [{"x": x, "V": v} for x, v in self.critical_points],
            "x0_sq": self.x0_sq,
            "epsilon": self.epsilon,
        }


@dataclass
class GapRatioScan:
    B0: float
    ratios: List[float]
    rhos: List[float]
    rho_min: float
    argmin_ratio: float
    scale_check: dict = field(default_factory=dict)
    boundary: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "B0": self.B0,
            "samples": len(self.ratios),
            "rho_min": self.rho_min,
            "argmin_ratio": self.argmin_ratio,
            "scale_check": self.scale_check,
            "boundary": self.boundary,
        }


def figure_config():
    """B₀ = 100, G₀ = 100 + √((30407 + √45649)/3), for which x₀² = 1."""
    return SexticConfig(100.0, 100.0 + math.sqrt((30407.0 + math.sqrt(45649.0)) / 3.0))


# =============================================================================
# Parameters
# =============================================================================

def is_admissible(cfg):
    return cfg.B0 > 0 and cfg.G0 > 2.0 * cfg.B0


def in_triple_well_band(cfg):
    return cfg.B0 > 0 and 2.0 < cfg.ratio < TRIPLE_WELL_UPPER_RATIO


def level_zero_params(cfg):
    """a₀ from (B₀, G₀) without any admissibility check."""
    return Params(A=0.5 * (2.0 * cfg.B0 - cfg.G0) * cfg.G0, B=cfg.B0, D=-2.0 * cfg.G0, G=cfg.G0)


def derive_dependent_params(cfg):
    """
    A₀ = ½(2B₀ − G₀)G₀ and D₀ = −2G₀.

    Raises:
        ConstraintViolation: unless G₀ > 2B₀ > 0.
    """
    if not cfg.B0 > 0:
        raise ConstraintViolation(f"requires B0 > 0 (got B0={cfg.B0})", inequality="B0 > 0")
    if not cfg.G0 > 2.0 * cfg.B0:
        raise ConstraintViolation(
            f"requires G0 > 2*B0 (got B0={cfg.B0}, G0={cfg.G0})", inequality="G0 > 2*B0"
        )
    return level_zero_params(cfg)


def require_band(cfg):
    derive_dependent_params(cfg)
    if not in_triple_well_band(cfg):
        raise ConstraintViolation(
            f"requires 2 < G0/B0 < (7+3*sqrt(7))/7 (got G0/B0={cfg.ratio:.6g})",
            inequality="2*B0 < G0 < (7+3*sqrt(7))/7*B0",
        )


@functools.lru_cache(maxsize=256)
def level_zero_shift(cfg):
    """C₀ from the shape-invariance recursion (runs the sextic map search)."""
    spectrum = energies_recursive(FamilyId.SEXTIC, level_zero_params(cfg), 1)
    return spectrum.metadata["shifts"][0], spectrum.metadata["map"]


def clear_caches():
    level_zero_shift.cache_clear()
    _geometry.cache_clear()


# =============================================================================
# Potentials
# =============================================================================

def _poly_coefficients(a0):
    """(a₆, a₄, a₂, a₀) of V₊(x, a₀) = a₆x⁶ + a₄x⁴ + a₂x² + a₀ at a level-0 point."""
    A, B, G = a0.A, a0.B, a0.G
    return A * A, 2.0 * A * B, B * B + 7.0 * A, B + 2.0 * G


def partner_tw(cfg, x):
    """V_tw(x) = V₊(x, a₀) − C₀."""
    C0, _ = level_zero_shift(cfg)
    return eval_partner(FamilyId.SEXTIC, level_zero_params(cfg), x, Sign.PLUS) - C0


def _partner_tw_prime(cfg, x):
    a6, a4, a2, _ = _poly_coefficients(level_zero_params(cfg))
    return 6.0 * a6 * x ** 5 + 4.0 * a4 * x ** 3 + 2.0 * a2 * x


def _partner_tw_second(cfg, x):
    a6, a4, a2, _ = _poly_coefficients(level_zero_params(cfg))
    return 30.0 * a6 * x ** 4 + 12.0 * a4 * x ** 2 + 2.0 * a2


# =============================================================================
# Well Geometry
# =============================================================================

def classify_wells(cfg, polish_tol=1e-12, degenerate_tol=1e-12):
    """
    Critical points of V_tw from the quadratic 3a₆u² + 2a₄u + a₂ = 0 in
    u = x², polished with brentq on V_tw′, then classified by count and
    curvature.
    """
    if not cfg.B0 > 0:
        raise ConstraintViolation(f"requires B0 > 0 (got B0={cfg.B0})", inequality="B0 > 0")
    return _geometry(cfg, polish_tol, degenerate_tol)


@functools.lru_cache(maxsize=256)
def _geometry(cfg, polish_tol, degenerate_tol):
    a6, a4, a2, _ = _poly_coefficients(level_zero_params(cfg))
    scale = max(abs(a6), abs(a4), abs(a2), 1e-300)

    roots = []
    degenerate = abs(a2) <= degenerate_tol * scale
    if abs(a6) > degenerate_tol * scale:
        disc = 4.0 * a4 * a4 - 12.0 * a6 * a2
        if abs(disc) <= degenerate_tol * max(4.0 * a4 * a4, 12.0 * abs(a6 * a2)):
            degenerate = True
        if disc > 0:
            root = math.sqrt(disc)
            roots = [(-2.0 * a4 - root) / (6.0 * a6), (-2.0 * a4 + root) / (6.0 * a6)]
    elif abs(a4) > degenerate_tol * scale:
        roots = [-a2 / (2.0 * a4)]
    u_roots = sorted(u for u in roots if u > 0)

    xs = [0.0]
    for u in u_roots:
        x = _polish(cfg, math.sqrt(u), polish_tol)
        xs.extend([-x, x])
    xs.sort()
    values = partner_tw(cfg, np.asarray(xs))
    critical = [(float(x), float(v)) for x, v in zip(xs, values)]

    minima = [x for x in xs if _partner_tw_second(cfg, x) > 0]
    if degenerate:
        cls = WellClass.DEGENERATE
    elif len(xs) == 5 and len(minima) == 3:
        cls = WellClass.TRIPLE_WELL
    elif len(xs) == 3 and len(minima) == 2:
        cls = WellClass.DOUBLE_WELL
    elif len(xs) == 1 and len(minima) == 1:
        cls = WellClass.SINGLE_WELL
    else:
        cls = WellClass.DEGENERATE

    x0_sq = epsilon = None
    if cls in (WellClass.TRIPLE_WELL, WellClass.DOUBLE_WELL):
        x_outer = max(xs)
        x0_sq = x_outer * x_outer
        epsilon = -float(min(values))
    elif cls is WellClass.SINGLE_WELL:
        epsilon = -float(values[0])
    logger.debug("Sextic (B0=%g, G0=%g): %s with %d critical points",
                 cfg.B0, cfg.G0, cls.value, len(xs))
    return WellGeometry(cls, critical, x0_sq, epsilon)


def _polish(cfg, x, tol):
    f = lambda s: _partner_tw_prime(cfg, s)
    lo, hi = x * (1.0 - 1e-6), x * (1.0 + 1e-6)
    if f(lo) * f(hi) < 0:
        return optimize.brentq(f, lo, hi, xtol=tol * max(1.0, x), rtol=4.0 * np.finfo(float).eps)
    return x


def outer_minimum_x0sq(cfg, reconcile=True):
    """
    x₀² of the outer minima; the printed closed form is ledgered beside it.

    Raises:
        ConstraintViolation: outside the triple-well band.
    """
    require_band(cfg)
    x0_sq = classify_wells(cfg).x0_sq
    if reconcile:
        published_forms.reconcile(
            "sextic.geometry", "x0_sq", published_forms.x0_sq_printed(cfg.B0, cfg.G0), x0_sq,
            note=f"B0={cfg.B0!r} G0={cfg.G0!r}",
        )
    return x0_sq


def epsilon_depth(cfg, reconcile=True):
    """
    ε = −min V_tw (> 0 in the band).

    Raises:
        ConstraintViolation: outside the triple-well band.
    """
    require_band(cfg)
    geometry = classify_wells(cfg)
    if reconcile:
        published_forms.reconcile(
            "sextic.geometry", "epsilon",
            published_forms.epsilon_printed(cfg.B0, cfg.G0, geometry.x0_sq), geometry.epsilon,
            note=f"B0={cfg.B0!r} G0={cfg.G0!r}",
        )
    return geometry.epsilon


def potential_V(cfg, x):
    """
    Nonnegative triple well V = V_tw + ε, zero at ±x₀.

    Raises:
        ConstraintViolation: outside the triple-well band.
    """
    require_band(cfg)
    return partner_tw(cfg, x) + classify_wells(cfg).epsilon


def reconcile_potential_forms(cfg, x):
    """Ledger the printed expanded and factored V against the pipeline's V."""
    require_band(cfg)
    x = np.asarray(x, dtype=float)
    x0_sq_printed = published_forms.x0_sq_printed(cfg.B0, cfg.G0)
    V = potential_V(cfg, x)
    expanded = published_forms.shifted_potential_printed(cfg.B0, cfg.G0, x, x0_sq_printed)
    compact = published_forms.shifted_potential_compact_printed(cfg.B0, cfg.G0, x, x0_sq_printed)
    return [
        published_forms.reconcile("sextic.potential", "V expanded form", expanded, V),
        published_forms.reconcile("sextic.potential", "V factored form", compact, V),
        published_forms.reconcile("sextic.potential", "expanded vs factored", expanded, compact),
        published_forms.reconcile(
            "sextic.potential", "V_minus two-parameter form at a1",
            published_forms.partner_minus_printed(-cfg.B0, 2.0 * cfg.B0 - cfg.G0, x), partner_tw(cfg, x),
        ),
        published_forms.reconcile(
            "sextic.potential", "V_plus two-parameter form at a0",
            published_forms.partner_plus_printed(cfg.B0, cfg.G0, x),
            eval_partner(FamilyId.SEXTIC, level_zero_params(cfg), x, Sign.PLUS),
        ),
    ]


# =============================================================================
# Wavefunctions
# =============================================================================

def _S(cfg, x):
    a0 = level_zero_params(cfg)
    return 0.5 * a0.B * x ** 2 + 0.25 * a0.A * x ** 4


def eigenstate_analytic(cfg, which, x):
    """
    Exact eigenstates of V: 'ground' is (1 + G₀x²)e^S, 'chi' is (1 + G₁x²)e^S
    with G₁ = 2B₀ − G₀.
    """
    if which == "ground":
        c = cfg.G0
    elif which == "chi":
        c = 2.0 * cfg.B0 - cfg.G0
    else:
        raise ValueError(f"unknown eigenstate {which!r}")
    return (1.0 + c * x ** 2) * np.exp(_S(cfg, x))


def wavefunction_analytic(cfg, n, x):
    """The published Ψ₀, Ψ₁, Ψ₂ (unnormalized)."""
    if n not in (0, 1, 2):
        raise ValueError(f"n must be 0, 1 or 2, got {n}")
    return published_forms.psi_printed(cfg.B0, cfg.G0, n, x)


def gaussian_limit_ratios(cfg, xs=(1e-2, 1e-3, 1e-4)):
    """Ψ₀(x) / e^{−(B₀ + 2G₀)x²/2} at small x; tends to 1 as x → 0."""
    xs = np.asarray(xs, dtype=float)
    return wavefunction_analytic(cfg, 0, xs) / np.exp(-0.5 * (cfg.B0 + 2.0 * cfg.G0) * xs ** 2)


def normalizability_class(cfg, n, with_complement=False):
    """
    Classify the published Ψ_n by the sign of its quartic exponent
    coefficient, ±G₀(G₀ − 2B₀)/8 (+ for Ψ₀, − for Ψ₁ and Ψ₂).

    With `with_complement`, a divergent Ψ₀ whose complement function decays
    is reported as COMPLEMENT_NORMALIZABLE.
    """
    if n not in (0, 1, 2):
        raise ValueError(f"n must be 0, 1 or 2, got {n}")
    lead = cfg.G0 * (cfg.G0 - 2.0 * cfg.B0) / 8.0
    quadratic = -cfg.B0 / 2.0
    if n != 0:
        lead, quadratic = -lead, -quadratic
    growing = lead > 0 or (lead == 0 and quadratic >= 0)
    if not growing:
        return NormalizabilityClass.NORMALIZABLE
    if n == 0 and with_complement and complement_report(cfg)["decays"]:
        return NormalizabilityClass.COMPLEMENT_NORMALIZABLE
    return NormalizabilityClass.DIVERGENT


def complement_report(cfg, points=2001, span=1.0):
    """
    Decay of Ψ̃₀(x) = Ψ₀(x)∫_x^X Ψ₀⁻² on [α, (1 + span)α], in logs.

    Returns:
        dict with α, the log-values at both ends, the log drop and whether
        g = (1 + G₀x²)² / (x(−2B₀ + G₀(G₀ − 2B₀)x²)) increases on the window.
    """
    alpha = published_forms.complement_alpha(cfg.B0, cfg.G0)
    grid = uniform_grid(alpha, (1.0 + span) * alpha, points)
    x = grid.x
    S = _S(cfg, x)
    u = 1.0 + cfg.G0 * x ** 2
    # I_i = ∫_{x_i}^X u² e^{2(S(s) − S(x_i))} ds by backward trapezoid recurrence
    I = np.zeros(x.size)
    for i in range(x.size - 2, -1, -1):
        factor = math.exp(2.0 * (S[i + 1] - S[i]))
        I[i] = 0.5 * grid.h * (u[i] ** 2 + u[i + 1] ** 2 * factor) + factor * I[i + 1]
    valid = I > 0
    log_psi = S[valid] - np.log(u[valid]) + np.log(I[valid])
    g = published_forms.complement_bound_g(cfg.B0, cfg.G0, x)
    report = {
        "alpha": alpha,
        "window": [grid.x_min, grid.x_max],
        "log_start": float(log_psi[0]),
        "log_end": float(log_psi[-1]),
        "log_drop": float(log_psi[-1] - log_psi[0]),
        "decays": bool(log_psi[-1] < log_psi[0]),
        "g_increasing": bool(np.all(np.diff(g) > 0)),
    }
    logger.debug("Complement function report: %s", report)
    return report


# =============================================================================
# Oracle Solves
# =============================================================================

def oracle_halfwidth(cfg, factor=2.5):
    """Half-width of the oracle grid: a multiple of the outer-well position."""
    return factor * math.sqrt(classify_wells(cfg).x0_sq)


def oracle_points_for(cfg, min_points=4001, factor=2.5, per_width=40):
    """
    Half-grid size resolving every well: at least `per_width` points per
    harmonic width (V″)^(−1/4) of the narrowest minimum.
    """
    geometry = classify_wells(cfg)
    curvatures = [_partner_tw_second(cfg, x) for x, _ in geometry.critical_points]
    widths = [c ** -0.25 for c in curvatures if c > 0]
    h_target = min(widths) / per_width
    needed = int(math.ceil(oracle_halfwidth(cfg, factor) / h_target)) + 1
    return max(min_points, needed)


def parity_spectrum(cfg, parity, k, points, factor=2.5, residual_target=1e-8):
    """Lowest k states of one parity of V on the half grid [0, L]."""
    grid = uniform_grid(0.0, oracle_halfwidth(cfg, factor), points)
    return oracle.solve(lambda x: potential_V(cfg, x), grid, k, parity, residual_target)


def odd_level(cfg, points=4001, factor=2.5):
    """
    Lowest odd level of V, Richardson-extrapolated from half grids of
    n and 2n − 1 samples, n ≥ `points` chosen to resolve the wells.

    Returns:
        (extrapolated energy, fine-grid energy, fine-grid EigenResult)
    """
    points = oracle_points_for(cfg, points, factor)
    coarse = parity_spectrum(cfg, "odd", 1, points, factor)
    fine = parity_spectrum(cfg, "odd", 1, 2 * points - 1, factor)
    extrapolated = float(oracle.richardson(fine.eigenvalues[0], coarse.eigenvalues[0]))
    return extrapolated, float(fine.eigenvalues[0]), fine


def odd_state(cfg, grid, points=4001, factor=2.5):
    """
    The lowest odd eigenvector of V, reflected from the oracle half grid and
    interpolated onto a symmetric grid.

    Raises:
        ConstraintViolation: outside the band.
        GridMismatch: `grid` is not symmetric about x = 0.
    """
    require_band(cfg)
    if not math.isclose(grid.x_min, -grid.x_max, rel_tol=1e-12):
        raise GridMismatch(f"odd state needs a symmetric grid, got [{grid.x_min}, {grid.x_max}]")
    halfwidth = max(grid.x_max, oracle_halfwidth(cfg, factor))
    points = oracle_points_for(cfg, points, factor)
    half = uniform_grid(0.0, halfwidth, points)
    result = oracle.solve(lambda x: potential_V(cfg, x), half, 1, "odd")
    full = oracle.reflect(result.eigenvectors[0], "odd")
    values = np.interp(grid.x, full.grid.x, full.values)
    return normalize(GridFunction(grid, values, "odd_state"))


def oracle_levels(cfg, points=4001, factor=2.5):
    """
    The three lowest levels of V from the oracle alone, merged from the
    even (k = 2) and odd (k = 1) half-grid solves and Richardson-extrapolated.
    """
    require_band(cfg)
    points = oracle_points_for(cfg, points, factor)
    merged = []
    residuals = []
    for parity, k in (("even", 2), ("odd", 1)):
        coarse = parity_spectrum(cfg, parity, k, points, factor)
        fine = parity_spectrum(cfg, parity, k, 2 * points - 1, factor)
        extrapolated = oracle.richardson(fine.eigenvalues, coarse.eigenvalues)
        merged += [(float(e), float(f), parity) for e, f in zip(extrapolated, fine.eigenvalues)]
        residuals += fine.residuals
    merged.sort()
    levels = [Level(n, e, Provenance.ORACLE) for n, (e, _, _) in enumerate(merged)]
    metadata = {
        "fine": [f for _, f, _ in merged],
        "parity": [p for _, _, p in merged],
        "half_grid_points": 2 * points - 1,
        "halfwidth": oracle_halfwidth(cfg, factor),
        "residuals": residuals,
    }
    return Spectrum(FamilyId.SEXTIC.value, levels, Provenance.ORACLE, metadata)


# =============================================================================
# Energies and Gap Ratio
# =============================================================================

def bound_energies(cfg, n_max=2, oracle_points=4001, reconcile=True):
    """
    Levels of V by node count: E₀ = ε − C₀ (ground, analytic),
    E₁ (odd, oracle), E₂ = E₀ + C₀ = ε (χ, analytic). C₀ comes from the
    shape-invariance recursion.

    Raises:
        ConstraintViolation: outside the band or n_max > 2.
    """
    require_band(cfg)
    if n_max not in (0, 1, 2):
        raise ConstraintViolation(f"requires n_max <= 2 (got {n_max})", inequality="n_max <= 2")
    C0, map_name = level_zero_shift(cfg)
    eps = epsilon_depth(cfg, reconcile)
    E0 = eps - C0

    levels = [Level(0, E0, Provenance.ANALYTIC)]
    metadata = {"C0": C0, "map": map_name, "epsilon": eps}
    if n_max >= 1:
        E1, E1_fine, result = odd_level(cfg, oracle_points)
        error_bar = max(abs(E1 - E1_fine), 4.0 * np.finfo(float).eps * abs(E1))
        status = doublet_status(E0, E1, error_bar)
        if E1 > eps + error_bar:
            raise ConvergenceFailure(
                f"odd level {E1!r} lies above E_2 = {eps!r} beyond the error bar {error_bar:.3e}",
                diagnostics={"E1": E1, "E2": eps, "error_bar": error_bar},
            )
        levels.append(Level(1, E1, Provenance.ORACLE))
        metadata.update({"E1_fine": E1_fine, "E1_error_bar": error_bar,
                         "splitting": E1 - E0, "doublet": status})
        metadata["oracle_grid"] = result.grid.to_dict()
        if status == "unresolved":
            logger.warning("E_1 - E_0 = %.3e is within the oracle error bar %.3e (B0=%g, G0=%g)",
                           E1 - E0, error_bar, cfg.B0, cfg.G0)
            if reconcile:
                published_forms.note_only(
                    "sextic.energies", "E_0/E_1 doublet",
                    f"unresolved: splitting {E1 - E0:.3e} below oracle error bar {error_bar:.3e}",
                )
    if n_max >= 2:
        levels.append(Level(2, E0 + C0, Provenance.ANALYTIC))

    if reconcile:
        _reconcile_energies(cfg, C0, eps, levels)
    return Spectrum(FamilyId.SEXTIC.value, levels, Provenance.ANALYTIC, metadata)


def doublet_status(E0, E1, error_bar):
    """
    'resolved' when the odd level sits above the ground level by more than
    the oracle error bar, 'unresolved' when the two agree within it.

    Raises:
        ConvergenceFailure: E₁ < E₀ beyond the error bar.
    """
    splitting = E1 - E0
    if splitting < -error_bar:
        raise ConvergenceFailure(
            f"odd level {E1!r} lies below the ground level {E0!r} beyond the error bar {error_bar:.3e}",
            diagnostics={"E0": E0, "E1": E1, "error_bar": error_bar},
        )
    return "resolved" if splitting > error_bar else "unresolved"


def _reconcile_energies(cfg, C0, eps, levels):
    B0, G0 = cfg.B0, cfg.G0
    for level in levels:
        published_forms.reconcile(
            "sextic.energies", f"E_{level.n}",
            published_forms.bound_energy_printed(B0, G0, level.n, eps), level.E,
            note="printed level index vs node count",
        )
    published_forms.reconcile(
        "sextic.energies", "E_1 printed minus epsilon equals 4(G0 - B0)",
        published_forms.bound_energy_printed(B0, G0, 1, eps) - eps, 4.0 * (G0 - B0), rel_tol=1e-12,
    )
    published_forms.reconcile("sextic.energies", "epsilon_1 general form", published_forms.epsilon_general(B0, G0, 1), C0)
    published_forms.reconcile("sextic.energies", "epsilon_0 general form", published_forms.epsilon_general(B0, G0, 0), 0.0)
    published_forms.reconcile("sextic.energies", "epsilon_1 parity form", published_forms.epsilon_by_parity(B0, G0, 1), C0)


def gap_ratio(cfg, oracle_points=4001, degenerate_tol=1e-12, reconcile=True):
    """
    ρ = ε / (E₂ − E₁).

    Raises:
        ConstraintViolation: outside the band.
        DegenerateGap: |E₂ − E₁| < degenerate_tol · max(1, E₂).
    """
    spectrum = bound_energies(cfg, 2, oracle_points, reconcile=reconcile)
    E1, E2 = spectrum.energy(1), spectrum.energy(2)
    gap = E2 - E1
    if abs(gap) < degenerate_tol * max(1.0, abs(E2)):
        raise DegenerateGap(f"E2 - E1 = {gap:.3e} is below tolerance")
    rho = spectrum.metadata["epsilon"] / gap
    if reconcile:
        x0_sq_printed = published_forms.x0_sq_printed(cfg.B0, cfg.G0)
        printed = published_forms.gap_ratio_printed(cfg.B0, cfg.G0, x0_sq_printed) if x0_sq_printed is not None else None
        published_forms.reconcile("sextic.gap_ratio", "rho", printed, rho, rel_tol=1e-6)
    return rho


def scale_invariance_check(cfg, lambdas=(0.5, 2.0, 10.0), tol=1e-4, oracle_points=2001):
    """ρ(λB₀, λG₀) against ρ(B₀, G₀) for each λ."""
    base = gap_ratio(cfg, oracle_points, reconcile=False)
    deviations = {}
    for lam in lambdas:
        value = gap_ratio(cfg.scaled(lam), oracle_points, reconcile=False)
        deviations[repr(float(lam))] = abs(value - base) / abs(base)
    passed = all(d <= tol for d in deviations.values())
    logger.info("Gap-ratio scale invariance %s (max deviation %.3e)",
                "holds" if passed else "fails", max(deviations.values()))
    return {"rho": base, "deviations": deviations, "tol": tol, "passed": passed}


def scan_rho(ratio_min=2.0, ratio_max=TRIPLE_WELL_UPPER_RATIO, samples=200, B0=1.0,
             config=None, workers=1):
    """
    Sweep G₀/B₀ across (part of) the triple-well band at fixed B₀.

    Samples stay `scan_edge_offset` inside the band. When the scale check
    fails, the sweep is repeated at every λB₀ and merged.

    Raises:
        ConstraintViolation: empty range or a range leaving the band.
    """
    config = config or {}
    offset = config.get("scan_edge_offset", 1e-6)
    degenerate_tol = config.get("degenerate_gap_tol", 1e-12)
    oracle_points = config.get("scan_oracle_points", config.get("oracle_points", 2001))
    if samples < 1:
        raise ConstraintViolation("requires samples >= 1", inequality="samples >= 1")
    if not ratio_min < ratio_max:
        raise ConstraintViolation(
            f"requires ratio_min < ratio_max (got {ratio_min}, {ratio_max})", inequality="ratio_min < ratio_max"
        )
    if ratio_min < 2.0 or ratio_max > TRIPLE_WELL_UPPER_RATIO:
        raise ConstraintViolation(
            f"requires 2 <= ratio_min < ratio_max <= {TRIPLE_WELL_UPPER_RATIO:.6f}",
            inequality="2*B0 < G0 < (7+3*sqrt(7))/7*B0",
        )
    lo = max(ratio_min, 2.0 + offset)
    hi = min(ratio_max, TRIPLE_WELL_UPPER_RATIO - offset)
    ratios = [0.5 * (lo + hi)] if samples == 1 else list(np.linspace(lo, hi, samples))

    midpoint = SexticConfig(B0, B0 * 0.5 * (lo + hi))
    scale_check = scale_invariance_check(
        midpoint, tuple(config.get("scale_check_lambdas", (0.5, 2.0, 10.0))),
        config.get("scale_check_tol", 1e-4), oracle_points,
    )
    B0_values = [B0]
    if not scale_check["passed"]:
        B0_values += [lam * B0 for lam in config.get("scale_check_lambdas", (0.5, 2.0, 10.0))]

    points = [(b, float(r)) for b in B0_values for r in ratios]

    def evaluate(point):
        b, r = point
        return gap_ratio(SexticConfig(b, b * r), oracle_points, degenerate_tol, reconcile=False)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rhos = list(pool.map(evaluate, points))

    best = int(np.argmin(rhos))
    scan = GapRatioScan(
        B0=B0, ratios=[r for _, r in points], rhos=[float(v) for v in rhos],
        rho_min=float(rhos[best]), argmin_ratio=points[best][1], scale_check=scale_check,
        boundary={
            "upper_ratio": TRIPLE_WELL_UPPER_RATIO,
            "argmin_at_edge": best in (0, len(ratios) - 1),
            "rho_first": float(rhos[0]),
            "rho_last": float(rhos[len(ratios) - 1]),
        },
    )
    published_forms.reconcile(
        "sextic.gap_ratio", "minimum rho over band", published_forms.RHO_PUBLISHED_BOUND, scan.rho_min,
        rel_tol=1e-2, note=f"argmin ratio {scan.argmin_ratio!r}",
    )
    logger.info("rho scan: %d samples, min %.6g at G0/B0=%.6g", len(points), scan.rho_min, scan.argmin_ratio)
    return scan


# =============================================================================
# Fictitious-State Report
# =============================================================================

def fictitious_state_report(cfg, target_tol=1e-6, config=None):
    """
    The oracle's lowest eigenvalue of V on a converged grid, its node count,
    and its offset from the printed E₀ = ε.
    """
    require_band(cfg)
    config = dict(config or {})
    L = oracle_halfwidth(cfg)
    problem = oracle.EigenProblem(lambda x: potential_V(cfg, x), 0.0, L, k=1, parity="even")
    result = oracle.refine_until_converged(problem, target_tol, config)
    lowest = float(result.extrapolated[0])
    full = oracle.reflect(result.eigenvectors[0], "even")
    eps = epsilon_depth(cfg, reconcile=False)
    report = {
        "lowest_eigenvalue": lowest,
        "lowest_eigenvalue_fine": float(result.eigenvalues[0]),
        "node_count": oracle.count_nodes(full),
        "epsilon": eps,
        "offset_from_epsilon": lowest - eps,
        "grid": result.diagnostics,
    }
    logger.info("Lowest oracle level %.10g (%d nodes), offset from epsilon %.6g",
                lowest, report["node_count"], report["offset_from_epsilon"])
    return report


# =============================================================================
# Sampling Helpers
# =============================================================================

def sample_states(cfg, grid):
    """Normalized φ₀, χ and the published Ψ₁, Ψ₂ on one grid."""
    x = grid.x
    return {
        "ground": normalize(GridFunction(grid, eigenstate_analytic(cfg, "ground", x), "ground")),
        "chi": normalize(GridFunction(grid, eigenstate_analytic(cfg, "chi", x), "chi")),
        "psi_1": normalize(GridFunction(grid, wavefunction_analytic(cfg, 1, x), "psi_1")),
        "psi_2": normalize(GridFunction(grid, wavefunction_analytic(cfg, 2, x), "psi_2")),
    }
