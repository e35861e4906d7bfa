"""
Ladder Module — A = d/dx + W and A† = −d/dx + W on sampled wavefunctions.

Derivatives use the 4th-order stencil in the interior; the two points at each
end use lower-order stencils and are left out of every comparison norm.
"""

import logging

import numpy as np

from modules.errors import DivergentExponent, NonFinite, PoleInChain, ZeroNorm
from modules.grid import GridFunction, cumulative_from_midpoint, derivative, require_same_grid, simpson
from modules.potentials import FamilyId, get_family
from modules.shape_invariance import param_sequence

logger = logging.getLogger(__name__)

DEFAULT_EXPONENT_CAP = 700.0
DEFAULT_POLE_RADIUS = 1e-6


def _W_on_grid(spec, params, grid, pole_radius):
    x = grid.x
    spec.domain(params).check(x, pole_radius)
    return spec.W(x, params)


# =============================================================================
# Ground State
# =============================================================================

def ground_state_from_W(family, params, grid, exponent_cap=DEFAULT_EXPONENT_CAP,
                        pole_radius=DEFAULT_POLE_RADIUS):
    """
    Unnormalized e^{−∫W}, the antiderivative taken from the grid midpoint by
    cumulative Simpson quadrature.

    Raises:
        DomainError: grid leaves the domain or touches a pole.
        DivergentExponent: the exponent exceeds `exponent_cap` somewhere.
    """
    spec = get_family(family)
    w = _W_on_grid(spec, params, grid, pole_radius)
    exponent = -cumulative_from_midpoint(w, grid.h)
    peak = float(np.max(exponent))
    if peak > exponent_cap:
        raise DivergentExponent(
            f"{spec.name}: exponent reaches {peak:.1f} > cap {exponent_cap}", exponent=peak
        )
    return GridFunction(grid, np.exp(exponent), label=f"{spec.id.value}_ground")


# =============================================================================
# Ladder Operators
# =============================================================================

def apply_raising(family, params, psi, pole_radius=DEFAULT_POLE_RADIUS):
    """A†ψ = −ψ′ + Wψ."""
    spec = get_family(family)
    w = _W_on_grid(spec, params, psi.grid, pole_radius)
    values = -derivative(psi.values, psi.grid.h) + w * psi.values
    return psi.with_values(values, label=f"raised({psi.label})")


def apply_lowering(family, params, psi, pole_radius=DEFAULT_POLE_RADIUS):
    """Aψ = ψ′ + Wψ."""
    spec = get_family(family)
    w = _W_on_grid(spec, params, psi.grid, pole_radius)
    values = derivative(psi.values, psi.grid.h) + w * psi.values
    return psi.with_values(values, label=f"lowered({psi.label})")


def excited_state(family, a0, n, grid, variant=None, exponent_cap=DEFAULT_EXPONENT_CAP,
                  pole_radius=DEFAULT_POLE_RADIUS):
    """
    Ψ_n ∝ A†(a₀)A†(a₁)…A†(a_{n−1}) e^{−∫W(a_n)}, normalized at the end.

    The sextic chain defaults to the resolved parameter map.

    Raises:
        PoleInChain: some W(a_k), k ≤ n, has a pole on the closed grid range.
    """
    spec = get_family(family)
    if variant is None and spec.id is FamilyId.SEXTIC:
        variant = "resolved"
    entries = param_sequence(spec, a0, n, variant).entries

    for k, params in enumerate(entries):
        for pole in spec.domain(params).poles:
            if grid.x_min - pole_radius <= pole <= grid.x_max + pole_radius:
                raise PoleInChain(
                    f"{spec.name}: W(a_{k}) has a pole at x={pole:.6g} inside "
                    f"[{grid.x_min}, {grid.x_max}]",
                    level=k,
                )

    psi = ground_state_from_W(spec, entries[n], grid, exponent_cap, pole_radius)
    for k in range(n - 1, -1, -1):
        psi = apply_raising(spec, entries[k], psi, pole_radius)
    logger.debug("%s: built level %d by %d raising steps", spec.name, n, n)
    return normalize(psi.with_values(psi.values, label=f"{spec.id.value}_state_{n}"))


# =============================================================================
# Normalization and Overlaps
# =============================================================================

def normalize(psi, noise=1e-6):
    """
    Unit L² norm (Simpson) with the sign fixed so that the leftmost interior
    local maximum of |ψ| is positive.

    Raises:
        ZeroNorm: ∫ψ² vanishes.
        NonFinite: ∫ψ² is not finite.
    """
    norm_sq = simpson(psi.values ** 2, psi.grid.h)
    if not np.isfinite(norm_sq):
        raise NonFinite(f"norm of {psi.label or 'wavefunction'} is not finite")
    if norm_sq <= 0.0:
        raise ZeroNorm(f"{psi.label or 'wavefunction'} has zero norm")
    values = psi.values / np.sqrt(norm_sq)

    a = np.abs(values)
    floor = noise * float(np.max(a))
    inner = np.arange(1, a.size - 1)
    is_max = (a[inner] >= a[inner - 1]) & (a[inner] >= a[inner + 1]) & (a[inner] > floor)
    candidates = inner[is_max]
    anchor = int(candidates[0]) if candidates.size else int(np.argmax(a))
    if values[anchor] < 0:
        values = -values
    return psi.with_values(values)


def overlap(f, g):
    """Simpson ∫ f·g on a shared grid."""
    require_same_grid(f, g)
    return simpson(f.values * g.values, f.grid.h)
