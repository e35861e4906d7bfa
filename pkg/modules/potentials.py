"""
Potentials Module — Superpotentials, partner potentials, and the solvable catalog.

Every family is defined by a closed-form superpotential W and its analytic
derivative W'. Partner potentials are always built from those two:

    V∓(x) = W(x)² ∓ W'(x)

The catalog holds the fourteen families of the solvable-potential table,
with the parameter-change map used by the pipeline next to the map and energy
column exactly as published (the latter are reconciliation data only).

Units: ħ = 2m = 1, so H = -d²/dx² + V.
"""

import math
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from modules.errors import DomainError, UnsupportedFamily

logger = logging.getLogger(__name__)

DEFAULT_POLE_RADIUS = 1e-6


# =============================================================================
# Domain Types
# =============================================================================

class FamilyId(Enum):
    HARMONIC = "harmonic"
    COULOMB = "coulomb"
    OSCILLATOR_3D = "oscillator3d"
    MORSE = "morse"
    ROSEN_MORSE_I = "rosen-morse-1"
    ROSEN_MORSE_II = "rosen-morse-2"
    ECKART = "eckart"
    SCARF_I = "scarf-1"
    SCARF_II = "scarf-2"
    POSCHL_TELLER_I = "poschl-teller-1"
    POSCHL_TELLER_II = "poschl-teller-2"
    DOUBLE_ANGLE = "double-angle"
    QUADRUPLE_ANGLE = "quadruple-angle"
    SEXTIC = "sextic"


class DomainKind(Enum):
    FULL_LINE = "full-line"
    HALF_LINE = "half-line"
    INTERVAL = "interval"


class Sign(Enum):
    MINUS = "minus"
    PLUS = "plus"


@dataclass(frozen=True)
class Params:
    """
    A parameter point. The sextic uses all of (A, B, D, G); catalog families
    use (A, B) and the scale p.
    """
    A: float
    B: float
    D: float = 0.0
    G: float = 0.0
    p: float = 1.0

    def __post_init__(self):
        for name in ("A", "B", "D", "G", "p"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"parameter {name}={value!r} is not finite")

    def as_tuple(self):
        return (self.A, self.B, self.D, self.G)

    def as_dict(self, names=("A", "B", "D", "G")):
        return {name: getattr(self, name) for name in names}


@dataclass(frozen=True)
class Domain:
    """Natural domain of a superpotential, with interior poles of W."""
    kind: DomainKind
    left: float
    right: float
    poles: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.left < self.right:
            raise DomainError(f"domain left end {self.left} must be < right end {self.right}")
        for pole in self.poles:
            if not self.left < pole < self.right:
                raise DomainError(f"pole {pole} lies outside ({self.left}, {self.right})")

    def check(self, x, pole_radius=DEFAULT_POLE_RADIUS):
        """
        Raise DomainError unless every x lies strictly inside the domain and
        at least `pole_radius` away from every pole.
        """
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if not np.all(np.isfinite(xs)):
            raise DomainError("non-finite evaluation point")
        outside = (xs <= self.left) | (xs >= self.right)
        if np.any(outside):
            bad = float(xs[outside][0])
            raise DomainError(
                f"x={bad} outside {self.kind.value} domain ({self.left}, {self.right})", x=bad
            )
        for pole in self.poles:
            near = np.abs(xs - pole) < pole_radius
            if np.any(near):
                bad = float(xs[near][0])
                raise DomainError(f"x={bad} within {pole_radius} of pole at {pole}", x=bad)

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "left": _json_real(self.left),
            "right": _json_real(self.right),
            "poles": list(self.poles),
        }


@dataclass(frozen=True)
class FamilySpec:
    """One row of the solvable-potential catalog."""
    id: FamilyId
    name: str
    arity: int
    param_names: Tuple[str, ...]
    W: Callable
    W_prime: Callable
    domain: Callable
    next_params: Optional[Callable]
    printed_next_params: Optional[Callable]
    printed_energy: Optional[Callable]
    corrected_energy: Optional[Callable]
    reference_params: Params
    invariant_levels: int
    printed_W: str
    printed_partner: str
    printed_energy_text: str
    printed_map_text: str
    uses_scale: bool = True
    window: Optional[Callable] = field(default=None, compare=False)


# =============================================================================
# Helpers
# =============================================================================

def _json_real(value):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _sech(z):
    return 1.0 / np.cosh(z)


def _csch(z):
    return 1.0 / np.sinh(z)


def _full_line(params):
    return Domain(DomainKind.FULL_LINE, -math.inf, math.inf)


def _half_line(params):
    return Domain(DomainKind.HALF_LINE, 0.0, math.inf)


def _sextic_domain(params):
    if params.G < 0:
        root = 1.0 / math.sqrt(-params.G)
        return Domain(DomainKind.FULL_LINE, -math.inf, math.inf, (-root, root))
    return Domain(DomainKind.FULL_LINE, -math.inf, math.inf)


def _sextic_window(params, halfwidth):
    # keep the sextic growth at the window edge modest: a few outer-well widths
    if params.A != 0 and params.B != 0:
        scale = math.sqrt(2.0 * abs(params.B) / abs(params.A))
        return (-min(halfwidth, 2.0 * scale), min(halfwidth, 2.0 * scale))
    return (-halfwidth, halfwidth)


def _morse_window(params, halfwidth):
    # e^{-px} grows to the left; stop where it is still O(10)
    return (-2.0 / params.p, halfwidth)


# =============================================================================
# Catalog Definitions
# =============================================================================

def _harmonic():
    return FamilySpec(
        id=FamilyId.HARMONIC, name="Harmonic", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * x - q.B,
        W_prime=lambda x, q: q.A * np.ones_like(x),
        domain=_full_line,
        next_params=lambda q: q,
        printed_next_params=lambda q: q,
        printed_energy=lambda q, n: 2.0 * q.A * n,
        corrected_energy=None,
        reference_params=Params(1.0, 0.0),
        invariant_levels=5,
        printed_W="Ax - B",
        printed_partner="(Ax - B)^2 - A",
        printed_energy_text="2An",
        printed_map_text="(A, B)",
        uses_scale=False,
    )


def _coulomb():
    return FamilySpec(
        id=FamilyId.COULOMB, name="Coulomb", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A - q.B / x,
        W_prime=lambda x, q: q.B / x ** 2,
        domain=_half_line,
        next_params=lambda q: replace(q, A=q.A * q.B / (q.B + 1.0), B=q.B + 1.0),
        printed_next_params=lambda q: replace(q, A=q.A ** 2 / (1.0 + q.B), B=1.0 + q.B),
        printed_energy=lambda q, n: q.A ** 2 - ((q.A - q.B) / (q.B + n)) ** 2,
        corrected_energy=lambda q, n: q.A ** 2 - (q.A * q.B / (q.B + n)) ** 2,
        reference_params=Params(1.0, 1.0),
        invariant_levels=5,
        printed_W="A - B/x",
        printed_partner="A^2 + B(B-1)/x^2 - 2AB/x",
        printed_energy_text="A^2 - ((A-B)/(B+n))^2",
        printed_map_text="(A^2/(1±B), 1+B)",
        uses_scale=False,
    )


def _oscillator_3d():
    return FamilySpec(
        id=FamilyId.OSCILLATOR_3D, name="3D-Oscillator", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * x - q.B / x,
        W_prime=lambda x, q: q.A + q.B / x ** 2,
        domain=_half_line,
        next_params=lambda q: replace(q, B=q.B + 1.0),
        printed_next_params=lambda q: replace(q, B=q.B + 1.0),
        printed_energy=lambda q, n: 4.0 * q.A * n,
        corrected_energy=None,
        reference_params=Params(1.0, 1.0),
        invariant_levels=5,
        printed_W="Ax - B/x",
        printed_partner="A^2x^2 + B(B-1)/x^2 - A(2B+1)",
        printed_energy_text="4An",
        printed_map_text="(A, 1+B)",
        uses_scale=False,
    )


def _morse():
    return FamilySpec(
        id=FamilyId.MORSE, name="Morse", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A - q.B * np.exp(-q.p * x),
        W_prime=lambda x, q: q.p * q.B * np.exp(-q.p * x),
        domain=_full_line,
        next_params=lambda q: replace(q, A=q.A - q.p),
        printed_next_params=lambda q: replace(q, A=q.A - q.p),
        printed_energy=lambda q, n: q.A ** 2 - (q.A - q.p * n) ** 2,
        corrected_energy=None,
        reference_params=Params(5.0, 1.0),
        invariant_levels=5,
        printed_W="A - Be^{-px}",
        printed_partner="A^2 + B^2e^{-2px} - 2B(A + B/2)e^{-px}",
        printed_energy_text="A^2 - (A - pn)^2",
        printed_map_text="(A - p, B)",
        window=_morse_window,
    )


def _rosen_morse_i():
    return FamilySpec(
        id=FamilyId.ROSEN_MORSE_I, name="Rosen-Morse I", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A / np.tan(q.p * x) + q.B,
        W_prime=lambda x, q: -q.A * q.p / np.sin(q.p * x) ** 2,
        domain=lambda q: Domain(DomainKind.INTERVAL, 0.0, math.pi / q.p),
        next_params=lambda q: replace(q, A=q.A - q.p, B=q.A * q.B / (q.A - q.p)),
        printed_next_params=lambda q: replace(q, A=q.A - q.p, B=(q.A + q.B) / (q.A - q.p)),
        printed_energy=lambda q, n: (q.B ** 2 - q.A ** 2
                                     - (q.A ** 2 * q.B ** 2 / ((q.A - q.p) * n)) ** 2
                                     - (q.A - q.p * n) ** 2) if n else 0.0,
        corrected_energy=lambda q, n: ((q.A - n * q.p) ** 2 - q.A ** 2 + q.B ** 2
                                       - (q.A * q.B / (q.A - n * q.p)) ** 2),
        reference_params=Params(-2.0, 0.5),
        invariant_levels=5,
        printed_W="A cot px + B",
        printed_partner="-A^2 + B^2 + A(A+p) csc^2 px + 2B cot px",
        printed_energy_text="B^2 - A^2 - [A^2B^2/((A-p)n)]^2 - (A-pn)^2",
        printed_map_text="(A - p, (A+B)/(A-p))",
    )


def _rosen_morse_ii():
    return FamilySpec(
        id=FamilyId.ROSEN_MORSE_II, name="Rosen-Morse II", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * np.tanh(q.p * x) + q.B,
        W_prime=lambda x, q: q.A * q.p * _sech(q.p * x) ** 2,
        domain=_full_line,
        next_params=lambda q: replace(q, A=q.A - q.p, B=q.A * q.B / (q.A - q.p)),
        printed_next_params=lambda q: replace(q, A=q.A - q.p, B=(q.A + q.B) / (q.A - q.p)),
        printed_energy=lambda q, n: (q.A ** 2 + q.B ** 2
                                     - ((q.A + q.p * n) ** 2
                                        + q.A ** 2 * q.B ** 2 / ((q.A + q.p) * n ** 2))) if n else 0.0,
        corrected_energy=lambda q, n: (q.A ** 2 + q.B ** 2 - (q.A - n * q.p) ** 2
                                       - (q.A * q.B / (q.A - n * q.p)) ** 2),
        reference_params=Params(5.5, 1.0),
        invariant_levels=5,
        printed_W="A tanh px + B",
        printed_partner="A^2 + B^2 - A(A+p) sech^2 px + 2AB tanh px",
        printed_energy_text="A^2 + B^2 - [(A+pn)^2 + A^2B^2/((A+p)n^2)]",
        printed_map_text="(A - p, (A+B)/(A-p))",
    )


def _eckart():
    return FamilySpec(
        id=FamilyId.ECKART, name="Eckart", arity=2, param_names=("A", "B"),
        W=lambda x, q: -q.A / np.tanh(q.p * x) + q.B,
        W_prime=lambda x, q: q.A * q.p * _csch(q.p * x) ** 2,
        domain=_half_line,
        next_params=lambda q: replace(q, A=q.A + q.p, B=q.A * q.B / (q.A + q.p)),
        printed_next_params=lambda q: replace(q, A=q.A + q.p, B=(q.A + q.B) / (q.A + q.p)),
        printed_energy=lambda q, n: (q.A ** 2 + q.B ** 2
                                     - ((q.A + q.p * n) ** 2
                                        + q.A ** 2 * q.B ** 2 / ((q.A + q.p) * n ** 2))) if n else 0.0,
        corrected_energy=lambda q, n: (q.A ** 2 + q.B ** 2 - (q.A + n * q.p) ** 2
                                       - (q.A * q.B / (q.A + n * q.p)) ** 2),
        reference_params=Params(1.0, 3.0),
        invariant_levels=5,
        printed_W="-A coth px + B",
        printed_partner="A^2 + B^2 + A(A-p) csch^2 px - 2AB coth px",
        printed_energy_text="A^2 + B^2 - [(A+pn)^2 + A^2B^2/((A+p)n^2)]",
        printed_map_text="(A + p, (A+B)/(A+p))",
    )


def _scarf_i():
    return FamilySpec(
        id=FamilyId.SCARF_I, name="Scarf I", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * np.tan(q.p * x) - q.B / np.cos(q.p * x),
        W_prime=lambda x, q: (q.A * q.p / np.cos(q.p * x) ** 2
                              - q.B * q.p * np.tan(q.p * x) / np.cos(q.p * x)),
        domain=lambda q: Domain(DomainKind.INTERVAL, -math.pi / (2.0 * q.p), math.pi / (2.0 * q.p)),
        next_params=lambda q: replace(q, A=q.A + q.p),
        printed_next_params=lambda q: replace(q, A=q.A + q.p),
        printed_energy=lambda q, n: -q.A ** 2 + (q.A + q.p * n) ** 2,
        corrected_energy=None,
        reference_params=Params(2.0, 1.0),
        invariant_levels=5,
        printed_W="A tan px - B sec px",
        printed_partner="-A^2 + (A^2 + B^2 - pA) sech^2 px - B(2A - p) sec px tan px",
        printed_energy_text="-A^2 + (A + pn)^2",
        printed_map_text="(A + p, B)",
    )


def _scarf_ii():
    return FamilySpec(
        id=FamilyId.SCARF_II, name="Scarf II", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * np.tanh(q.p * x) + q.B * _sech(q.p * x),
        W_prime=lambda x, q: (q.A * q.p * _sech(q.p * x) ** 2
                              - q.B * q.p * _sech(q.p * x) * np.tanh(q.p * x)),
        domain=_full_line,
        next_params=lambda q: replace(q, A=q.A - q.p),
        printed_next_params=lambda q: replace(q, A=q.A - q.p),
        printed_energy=lambda q, n: q.A ** 2 - (q.A - q.p * n) ** 2,
        corrected_energy=None,
        reference_params=Params(2.0, 1.0),
        invariant_levels=5,
        printed_W="A tanh px + B sech px",
        printed_partner="A^2 + (-A^2 + B^2 - pA) sech^2 px - B(2A + p) sech px tanh px",
        printed_energy_text="A^2 - (A - pn)^2",
        printed_map_text="(A - p, B)",
    )


def _poschl_teller_i():
    return FamilySpec(
        id=FamilyId.POSCHL_TELLER_I, name="Poschl-Teller I", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A / np.tanh(q.p * x) - q.B * _csch(q.p * x),
        W_prime=lambda x, q: (-q.A * q.p * _csch(q.p * x) ** 2
                              + q.B * q.p * _csch(q.p * x) / np.tanh(q.p * x)),
        domain=_half_line,
        next_params=lambda q: replace(q, A=q.A - q.p),
        printed_next_params=lambda q: replace(q, A=q.A - q.p),
        printed_energy=lambda q, n: q.A ** 2 - (q.A - q.p * n) ** 2,
        corrected_energy=None,
        reference_params=Params(4.0, 1.0),
        invariant_levels=5,
        printed_W="A coth px - B csch px",
        printed_partner="A^2 + (A^2 + B^2 + pA) csch^2 px - B(2A + p) coth px csch px",
        printed_energy_text="A^2 - (A - pn)^2",
        printed_map_text="(A - p, B)",
    )


def _poschl_teller_ii():
    return FamilySpec(
        id=FamilyId.POSCHL_TELLER_II, name="Poschl-Teller II", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * np.tanh(q.p * x) - q.B / np.tanh(q.p * x),
        W_prime=lambda x, q: (q.A * q.p * _sech(q.p * x) ** 2
                              + q.B * q.p * _csch(q.p * x) ** 2),
        domain=_half_line,
        next_params=lambda q: replace(q, A=q.A - q.p, B=q.B + q.p),
        printed_next_params=lambda q: replace(q, A=q.A - q.p, B=q.B + q.p),
        printed_energy=lambda q, n: (q.A - q.B) ** 2 - (q.A - 2.0 * q.p * n) ** 2,
        corrected_energy=lambda q, n: (q.A - q.B) ** 2 - (q.A - q.B - 2.0 * q.p * n) ** 2,
        reference_params=Params(4.0, 1.0),
        invariant_levels=5,
        printed_W="A tanh px - B coth px",
        printed_partner="(A - B)^2 + B(B - p) csch^2 px - A(A + p) sech^2 px",
        printed_energy_text="(A - B)^2 - (A - 2pn)^2",
        printed_map_text="(A - p, B + p)",
    )


def _double_angle():
    return FamilySpec(
        id=FamilyId.DOUBLE_ANGLE, name="Double angle", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * np.tanh(q.p * x) + q.B * np.tanh(2.0 * q.p * x),
        W_prime=lambda x, q: (q.A * q.p * _sech(q.p * x) ** 2
                              + 2.0 * q.B * q.p * _sech(2.0 * q.p * x) ** 2),
        domain=_full_line,
        next_params=lambda q: replace(q, A=q.A - q.p, B=q.B - 2.0 * q.p),
        printed_next_params=lambda q: replace(q, A=q.A - q.p, B=q.B - 2.0 * q.p),
        printed_energy=lambda q, n: (q.A + q.B) ** 2 - (q.A + q.B - 3.0 * n) ** 2,
        corrected_energy=None,
        # on the manifold 2A + B = 2p, where the first level shift is constant
        reference_params=Params(0.25, 1.5),
        invariant_levels=1,
        printed_W="A tanh px + B tanh 2px",
        printed_partner="-3p(A + B - 2p/3) + p/3 (A + B - 2p)(tanh px - 2 tanh 2px)^2",
        printed_energy_text="(A + B)^2 - (A + B - 3n)^2",
        printed_map_text="(A - p, B - 2p)",
    )


def _quadruple_angle():
    return FamilySpec(
        id=FamilyId.QUADRUPLE_ANGLE, name="Quadruple angle", arity=2, param_names=("A", "B"),
        W=lambda x, q: q.A * np.tanh(q.p * x) + q.B * np.tanh(4.0 * q.p * x),
        W_prime=lambda x, q: (q.A * q.p * _sech(q.p * x) ** 2
                              + 4.0 * q.B * q.p * _sech(4.0 * q.p * x) ** 2),
        domain=_full_line,
        next_params=lambda q: replace(q, A=q.A - q.p, B=q.B - 4.0 * q.p),
        printed_next_params=lambda q: replace(q, A=q.A - q.p, B=q.B - 4.0 * q.p),
        printed_energy=lambda q, n: (q.A + q.B) ** 2 - (q.A + q.B - (3.0 * n + 2.0) * q.p) ** 2,
        corrected_energy=None,
        # on the manifold 4A + B = 4p
        reference_params=Params(0.25, 3.0),
        invariant_levels=1,
        printed_W="A tanh px + B tanh 4px",
        printed_partner="-4p/12 (A + B - 24p/4) + p/12 (A + B - 4p)(tanh px - 4 tanh 4px)^2",
        printed_energy_text="(A + B)^2 - (A + B - (3n + 2)p)^2",
        printed_map_text="(A - p, B - 4p)",
    )


# -----------------------------------------------------------------------------
# Sextic: W = Ax^3 + Bx - Dx/(1 + Gx^2)
# -----------------------------------------------------------------------------

def sextic_W(x, q):
    return q.A * x ** 3 + q.B * x - q.D * x / (1.0 + q.G * x ** 2)


def sextic_W_prime(x, q):
    u = 1.0 + q.G * x ** 2
    return 3.0 * q.A * x ** 2 + q.B - q.D * (1.0 - q.G * x ** 2) / u ** 2


def sextic_map_published_linear(q):
    """One step of the published linear map, read with the current point as a0."""
    return replace(q, A=-q.A, B=-q.B, D=q.D - 4.0 * q.B, G=-q.G + 2.0 * q.B)


def sextic_map_resolved(q):
    """The step that keeps V₊(x, a_k) - V₋(x, a_{k+1}) constant on the (B0, G0) parametrization."""
    return replace(q, A=-q.A, B=-q.B, D=q.D + 4.0 * q.B, G=2.0 * q.B - q.G)


def sextic_map_table(q):
    """The catalog row's map, verbatim."""
    return replace(q, B=-q.B, D=4.0 * q.B - q.D, G=0.5 * q.G * (2.0 * q.B - q.G))


def sextic_map_variant(sigma_d, tau_d, sigma_g, tau_g):
    """
    Sign variant (A, B, D, G) → (-A, -B, σ_D·D + τ_D·4B, σ_G·G + τ_G·2B).
    """
    def step(q):
        return replace(q, A=-q.A, B=-q.B,
                       D=sigma_d * q.D + tau_d * 4.0 * q.B,
                       G=sigma_g * q.G + tau_g * 2.0 * q.B)
    step.__name__ = f"variant_D{sigma_d:+d}{tau_d:+d}_G{sigma_g:+d}{tau_g:+d}"
    return step


def _sextic():
    return FamilySpec(
        id=FamilyId.SEXTIC, name="Sextic", arity=4, param_names=("A", "B", "D", "G"),
        W=sextic_W,
        W_prime=sextic_W_prime,
        domain=_sextic_domain,
        next_params=sextic_map_published_linear,
        printed_next_params=sextic_map_table,
        printed_energy=lambda q, n: (4.0 * (-1) ** n * q.B
                                     + 4.0 * (2.0 * q.B - q.G + n * q.B) * q.G
                                     / (-q.G + 2.0 * q.B * n)),
        corrected_energy=None,
        # level-0 point for (B0, G0) = (1, 2.06)
        reference_params=Params(0.5 * (2.0 - 2.06) * 2.06, 1.0, -4.12, 2.06),
        invariant_levels=1,
        printed_W="Ax^2 + Bx - Dx/(1+x^2)",
        printed_partner="-B + 2G + 1/2(2B^2 - 14BC - 7G^2)x^2 - BG(2B + G)x^4 + 1/2 G^2(2B + G)^2x^6",
        printed_energy_text="4(-1)^n B + 4(2B - G + nB)G/(-G + 2Bn)",
        printed_map_text="(A, -B, 4B - D, G(2B - G)/2)",
        uses_scale=False,
        window=_sextic_window,
    )


_BUILDERS = (
    _harmonic, _coulomb, _oscillator_3d, _morse, _rosen_morse_i, _rosen_morse_ii,
    _eckart, _scarf_i, _scarf_ii, _poschl_teller_i, _poschl_teller_ii,
    _double_angle, _quadruple_angle, _sextic,
)

_CATALOG = tuple(build() for build in _BUILDERS)
_BY_ID = {spec.id: spec for spec in _CATALOG}


# =============================================================================
# Operations
# =============================================================================

def catalog():
    """Return the fourteen catalog families in table order."""
    return list(_CATALOG)


def get_family(family):
    """
    Look up a family by FamilyId, its string value, or pass a FamilySpec through.

    Raises:
        UnsupportedFamily: unknown identifier.
    """
    if isinstance(family, FamilySpec):
        return family
    try:
        key = family if isinstance(family, FamilyId) else FamilyId(str(family).lower())
    except ValueError:
        raise UnsupportedFamily(f"unknown family {family!r}") from None
    return _BY_ID[key]


def domain_of(family, params):
    """
    Natural domain of W for the given parameters (poles listed when G < 0).

    Scarf I is centred: its domain is (−π/2p, π/2p), where W = A tan px − B sec px.
    Substituting x ↦ x − π/(2p) gives the same family on (0, π/p) as
    W = −A cot px − B csc px, with identical energies.
    """
    return get_family(family).domain(params)


def eval_W(family, params, x, pole_radius=DEFAULT_POLE_RADIUS):
    """
    Evaluate the superpotential at x (scalar or array).

    Raises:
        DomainError: x outside the domain or within `pole_radius` of a pole.
    """
    spec = get_family(family)
    spec.domain(params).check(x, pole_radius)
    return _shaped(spec.W(np.asarray(x, dtype=float), params), x)


def eval_W_prime(family, params, x, pole_radius=DEFAULT_POLE_RADIUS):
    """Evaluate the analytic derivative W'(x)."""
    spec = get_family(family)
    spec.domain(params).check(x, pole_radius)
    return _shaped(spec.W_prime(np.asarray(x, dtype=float), params), x)


def eval_partner(family, params, x, sign=Sign.MINUS, pole_radius=DEFAULT_POLE_RADIUS):
    """
    Partner potential V∓ = W² ∓ W', always built from W and W'.

    Args:
        family: FamilyId, name, or FamilySpec.
        params: Params point.
        x: Scalar or array of evaluation points.
        sign: Sign.MINUS for V₋, Sign.PLUS for V₊ (strings accepted).
        pole_radius: Exclusion radius around poles of W.
    """
    sign = Sign(sign) if not isinstance(sign, Sign) else sign
    w = eval_W(family, params, x, pole_radius)
    wp = eval_W_prime(family, params, x, pole_radius)
    if sign is Sign.MINUS:
        return w * w - wp
    return w * w + wp


def _shaped(values, x):
    values = np.asarray(values, dtype=float)
    if np.ndim(x) == 0:
        return float(values)
    return values
