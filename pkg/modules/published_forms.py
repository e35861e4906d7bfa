"""
Published Forms Module — Closed forms exactly as published, plus the ledger.

Nothing here is used to compute an authoritative result. Each function
evaluates a printed expression verbatim so that it can be compared with the
pipeline built from the superpotential; every comparison goes through
`reconcile`, which produces a LedgerEntry and mirrors it on the dedicated
'ledger' logger.
"""

import math
import logging
from dataclasses import dataclass

import numpy as np

from modules.potentials import Params

logger = logging.getLogger(__name__)
ledger_logger = logging.getLogger("ledger")

# Lower bound on the gap ratio as published.
RHO_PUBLISHED_BOUND = 26.0765

# Upper edge of the triple-well band as published, in units of B0.
PUBLISHED_UPPER_RATIO = (7.0 + 3.0 * math.sqrt(7.0)) / 7.0


# =============================================================================
# Ledger
# =============================================================================

@dataclass(frozen=True)
class LedgerEntry:
    """One printed-versus-authoritative comparison."""
    topic: str
    item: str
    printed: object
    authoritative: object
    abs_diff: float
    rel_diff: float
    agrees: bool
    note: str = ""

    def to_dict(self):
        return {
            "topic": self.topic,
            "item": self.item,
            "printed": _plain(self.printed),
            "authoritative": _plain(self.authoritative),
            "abs_diff": _plain(self.abs_diff),
            "rel_diff": _plain(self.rel_diff),
            "agrees": self.agrees,
            "note": self.note,
        }


def _plain(value):
    if isinstance(value, np.ndarray):
        if value.size == 1:
            return _plain(float(value.reshape(-1)[0]))
        # sampled curves are summarized, never dumped
        return f"<{value.size} samples, max |v| {float(np.max(np.abs(value))):.6g}>"
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def reconcile(topic, item, printed, authoritative, rel_tol=1e-6, note=""):
    """
    Compare a printed value with the authoritative one and ledger the result.

    Args:
        topic: Ledger section, e.g. 'sextic.geometry'.
        item: What is compared, e.g. 'x0_sq'.
        printed: Value of the printed expression (float, tuple, or None if it
                 cannot be evaluated).
        authoritative: Value from the pipeline.
        rel_tol: Relative tolerance under which the two agree.
        note: Free text carried into the ledger.

    Returns:
        LedgerEntry
    """
    abs_diff, rel_diff, agrees = _compare(printed, authoritative, rel_tol)
    entry = LedgerEntry(topic, item, printed, authoritative, abs_diff, rel_diff, agrees, note)
    level = logging.DEBUG if agrees else logging.WARNING
    ledger_logger.log(
        level, "%-8s | %s | %s | printed=%r | authoritative=%r | rel=%.3e",
        "AGREE" if agrees else "DIFFER", topic, item, printed, authoritative, rel_diff,
        extra={"ledger_entry": entry},
    )
    return entry


def note_only(topic, item, note):
    """Ledger a structural observation with no numeric comparison."""
    entry = LedgerEntry(topic, item, None, None, math.nan, math.nan, False, note)
    ledger_logger.warning("NOTE     | %s | %s | %s", topic, item, note,
                          extra={"ledger_entry": entry})
    return entry


def _compare(printed, authoritative, rel_tol):
    if printed is None or authoritative is None:
        return math.nan, math.nan, False
    a = np.atleast_1d(np.asarray(printed, dtype=float))
    b = np.atleast_1d(np.asarray(authoritative, dtype=float))
    if a.shape != b.shape or not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        return math.nan, math.nan, False
    abs_diff = float(np.max(np.abs(a - b)))
    scale = max(1.0, float(np.max(np.abs(b))))
    rel_diff = abs_diff / scale
    return abs_diff, rel_diff, rel_diff <= rel_tol


# =============================================================================
# Sextic partner potentials
# =============================================================================

def partner_minus_printed(B, G, x):
    """V₋ in the two-parameter form, as printed."""
    return (-B + 2.0 * G + 0.5 * (2.0 * B ** 2 - 14.0 * G * B - 7.0 * G ** 2) * x ** 2
            + B * G * (2.0 * B + G) * x ** 4 + 0.25 * G ** 2 * (2.0 * B + G) ** 2 * x ** 6)


def partner_plus_printed(B, G, x):
    """V₊ in the two-parameter form, as printed."""
    return (B + 2.0 * G + 0.5 * (2.0 * B ** 2 + 14.0 * G * B - 7.0 * G ** 2) * x ** 2
            + B * G * (2.0 * B - G) * x ** 4 + 0.25 * G ** 2 * (2.0 * B - G) ** 2 * x ** 6)


def table_partner_printed(B, G, x):
    """The catalog row's partner column (its 'C' read as G)."""
    return (-B + 2.0 * G + 0.5 * (2.0 * B ** 2 - 14.0 * B * G - 7.0 * G ** 2) * x ** 2
            - B * G * (2.0 * B + G) * x ** 4 + 0.5 * G ** 2 * (2.0 * B + G) ** 2 * x ** 6)


def table_W_printed(params, x):
    """The catalog row's superpotential: Ax² + Bx − Dx/(1+x²)."""
    return params.A * x ** 2 + params.B * x - params.D * x / (1.0 + x ** 2)


# =============================================================================
# Sextic parameter map and energies
# =============================================================================

def closed_form_params(a0, k):
    """
    a_k = (−1)^k M₀ a₀ + 2(−1)^k k B₀ b₀ with M₀ = diag(1, 1, −1, 1) and
    b₀ = (0, 0, 2, −1).
    """
    sign = (-1.0) ** k
    return Params(
        A=sign * a0.A,
        B=sign * a0.B,
        D=sign * (-a0.D + 4.0 * k * a0.B),
        G=sign * (a0.G - 2.0 * k * a0.B),
        p=a0.p,
    )


def epsilon_general(B0, G0, k):
    """ε_k = 4(−1)^k B₀ + 4(2B₀ − G₀ + kB₀)G₀ / (−G₀ + 2B₀k)."""
    return 4.0 * (-1) ** k * B0 + 4.0 * (2.0 * B0 - G0 + k * B0) * G0 / (-G0 + 2.0 * B0 * k)


def epsilon_by_parity(B0, G0, level):
    """
    Odd/even split of the level energies as printed. The odd branch carries
    an unbound k; it is read as the level index itself.
    """
    if level == 0:
        return 0.0
    if level % 2 == 1:
        k = level
        return -4.0 * B0 + 4.0 * (2.0 * B0 - G0 + k * B0) * G0 / (-G0 + 2.0 * B0 * k)
    n = level // 2
    return 4.0 * B0 + 4.0 * (2.0 * B0 - G0 + 2.0 * n * B0) * G0 / (-G0 + 4.0 * B0 * n)


def table_energy_printed(B, G, n):
    """The catalog row's energy column: 4(−1)^n B + 4(B − G + 2n)G/(−G + 2B − n)."""
    return 4.0 * (-1) ** n * B + 4.0 * (B - G + 2.0 * n) * G / (-G + 2.0 * B - n)


def bound_energy_printed(B0, G0, n, epsilon):
    """Shifted-potential energies E_n with E₀ = ε, as printed."""
    if n == 0:
        return epsilon
    if n % 2 == 1:
        m = (n + 1) // 2
        return 2.0 * (-4.0 * B0 + G0 + 2.0 * B0 * m
                      + (2.0 * B0 - G0) * G0 / (-G0 + 2.0 * B0 * (2.0 * m - 1.0))) + epsilon
    m = n // 2
    return 2.0 * (2.0 * B0 + G0 + 2.0 * B0 * m
                  + (2.0 * B0 - G0) * G0 / (-G0 + 4.0 * B0 * m)) + epsilon


# =============================================================================
# Triple-well geometry
# =============================================================================

def critical_quadratic_roots_printed(B0, G0):
    """
    Roots in u = x² of the printed critical-point condition
    2(2B² + 14BG − 7G²) + 8BG(2B − G)u + 3G²(2B − G)²u² = 0.
    """
    a = 3.0 * G0 ** 2 * (2.0 * B0 - G0) ** 2
    b = 8.0 * B0 * G0 * (2.0 * B0 - G0)
    c = 2.0 * (2.0 * B0 ** 2 + 14.0 * B0 * G0 - 7.0 * G0 ** 2)
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return ()
    root = math.sqrt(disc)
    return tuple(sorted(((-b - root) / (2.0 * a), (-b + root) / (2.0 * a))))


def x0_sq_printed(B0, G0):
    """x₀² = (4B₀ − √(2(2B₀² − 42B₀G₀ + 21G₀²))) / (3G₀(G₀ − 2B₀))."""
    radicand = 2.0 * (2.0 * B0 ** 2 - 42.0 * B0 * G0 + 21.0 * G0 ** 2)
    if radicand < 0:
        return None
    return (4.0 * B0 - math.sqrt(radicand)) / (3.0 * G0 * (G0 - 2.0 * B0))


def epsilon_printed(B0, G0, x0_sq):
    return (31.0 * B0 / 9.0 - 2.0 * G0
            - 4.0 * B0 ** 3 / (9.0 * G0 * (2.0 * B0 - 9.0 * G0))
            - (2.0 * B0 ** 2 - 42.0 * B0 * G0 + 21.0 * G0 ** 2) * x0_sq / 9.0)


def shifted_potential_printed(B0, G0, x, x0_sq):
    """Expanded form of the shifted potential V, as printed."""
    q = 2.0 * B0 ** 2 + 14.0 * B0 * G0 - 7.0 * G0 ** 2
    return (2.0 * B0 * q / (9.0 * (2.0 * B0 - G0) * G0)
            + (2.0 * B0 ** 2 - 42.0 * B0 * G0 + 21.0 * G0 ** 2) * x0_sq / 9.0
            + 0.5 * q * x ** 2
            + B0 * G0 * (2.0 * B0 - G0) * x ** 4
            + 0.25 * G0 ** 2 * (2.0 * B0 - G0) ** 2 * x ** 6)


def shifted_potential_compact_printed(B0, G0, x, x0_sq):
    """Factored form of the shifted potential V, as printed."""
    lead = G0 ** 2 * (2.0 * B0 - G0) ** 2
    q = 2.0 * B0 ** 2 + 14.0 * B0 * G0 - 7.0 * G0 ** 2
    return 0.25 * lead * (x ** 2 - x0_sq) ** 2 * (x ** 2 + 2.0 * x0_sq + q / lead)


def gap_ratio_printed(B0, G0, x0_sq):
    numerator = epsilon_printed(B0, G0, x0_sq)
    denominator = 12.0 * B0 - 2.0 * G0 + 2.0 * G0 * (G0 - 2.0 * B0) / (G0 - 4.0 * B0)
    return numerator / denominator


# =============================================================================
# Wavefunctions
# =============================================================================

def _growing_exponent(B0, G0, x):
    # (1/8)(−4B + G(G − 2B)x²)x²
    return 0.125 * (-4.0 * B0 + G0 * (G0 - 2.0 * B0) * x ** 2) * x ** 2


def psi0_printed(B0, G0, x):
    return np.exp(_growing_exponent(B0, G0, x)) / (1.0 + G0 * x ** 2)


def psi1_printed(B0, G0, x):
    return -4.0 * (B0 - G0) * x * np.exp(-_growing_exponent(B0, G0, x)) / (1.0 + G0 * x ** 2)


def psi2_printed(B0, G0, x):
    bracket = (10.0 * B0 - 4.0 * G0
               + (12.0 * B0 ** 2 - 10.0 * B0 * G0 + G0 ** 2) * x ** 2
               + 4.0 * G0 * (G0 - 3.0 * B0) * (G0 - 2.0 * B0) * x ** 4
               + 3.0 * G0 ** 2 * (G0 - 2.0 * B0) ** 2 * x ** 6)
    return np.exp(-_growing_exponent(B0, G0, x)) * bracket / (1.0 + G0 * x ** 2)


def psi_printed(B0, G0, n, x):
    forms = {0: psi0_printed, 1: psi1_printed, 2: psi2_printed}
    return forms[n](B0, G0, x)


def complement_bound_g(B0, G0, x):
    """g(x) = (1 + G₀x²)² / (x(−2B₀ + G₀(G₀ − 2B₀)x²))."""
    return (1.0 + G0 * x ** 2) ** 2 / (x * (-2.0 * B0 + G0 * (G0 - 2.0 * B0) * x ** 2))


def complement_alpha(B0, G0):
    """Left end of the interval on which g is claimed positive and increasing."""
    return ((3.0 * G0 + math.sqrt(16.0 * B0 - 8.0 * B0 * G0 + 9.0 * G0 ** 2))
            / (2.0 * (G0 - 2.0 * B0)))
