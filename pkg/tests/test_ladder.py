import math

import numpy as np
import pytest
from pytest import approx

from modules import published_forms, sextic
from modules.errors import DivergentExponent, GridMismatch, PoleInChain, ZeroNorm
from modules.grid import GridFunction, symmetric_grid
from modules.ladder import (
    apply_lowering, apply_raising, excited_state, ground_state_from_W, normalize, overlap,
)
from modules.potentials import FamilyId, Params

HARMONIC = Params(1.0, 0.0)


@pytest.fixture
def harmonic_grid():
    return symmetric_grid(8.0, 4001)


def test_lowering_annihilates_harmonic_ground_state(harmonic_grid):
    psi0 = ground_state_from_W(FamilyId.HARMONIC, HARMONIC, harmonic_grid)
    assert psi0.values == approx(np.exp(-0.5 * harmonic_grid.x ** 2), rel=1e-9)
    lowered = apply_lowering(FamilyId.HARMONIC, HARMONIC, psi0)
    assert np.max(np.abs(lowered.interior())) < 1e-6 * psi0.peak()


def test_raising_builds_first_hermite_function(harmonic_grid):
    psi0 = ground_state_from_W(FamilyId.HARMONIC, HARMONIC, harmonic_grid)
    raised = apply_raising(FamilyId.HARMONIC, HARMONIC, psi0)
    expected = 2.0 * harmonic_grid.x * np.exp(-0.5 * harmonic_grid.x ** 2)
    assert raised.interior() == approx(expected[2:-2], abs=1e-8)


def test_harmonic_ladder_states_are_orthonormal(harmonic_grid):
    states = [excited_state(FamilyId.HARMONIC, HARMONIC, n, harmonic_grid) for n in range(4)]
    for m, f in enumerate(states):
        for n, g in enumerate(states):
            assert overlap(f, g) == approx(1.0 if m == n else 0.0, abs=1e-6)


def test_wrong_sign_superpotential_diverges():
    grid = symmetric_grid(40.0, 801)
    with pytest.raises(DivergentExponent) as info:
        ground_state_from_W(FamilyId.HARMONIC, Params(-1.0, 0.0), grid)
    assert info.value.exponent == approx(800.0, rel=1e-6)
    assert isinstance(info.value, OverflowError)


def test_exponent_cap_is_configurable(harmonic_grid):
    with pytest.raises(DivergentExponent):
        ground_state_from_W(FamilyId.HARMONIC, Params(-1.0, 0.0), harmonic_grid, exponent_cap=10.0)


def test_sextic_chain_pole_inside_grid(moderate_config):
    a0 = sextic.level_zero_params(moderate_config)
    # G1 = 2B0 - G0 < 0 puts poles of W(a1) at ±1/sqrt(G0 - 2B0)
    pole = 1.0 / math.sqrt(moderate_config.G0 - 2.0 * moderate_config.B0)
    assert pole == approx(4.0825, abs=1e-3)
    with pytest.raises(PoleInChain) as info:
        excited_state(FamilyId.SEXTIC, a0, 1, symmetric_grid(10.0, 2001))
    assert info.value.level == 1


def test_sextic_first_excited_state_from_chain(moderate_config):
    a0 = sextic.level_zero_params(moderate_config)
    grid = symmetric_grid(3.0, 4001)
    chained = excited_state(FamilyId.SEXTIC, a0, 1, grid)
    printed = normalize(GridFunction(grid, published_forms.psi1_printed(
        moderate_config.B0, moderate_config.G0, grid.x), "psi_1"))
    assert overlap(chained, printed) == approx(1.0, abs=1e-4)


def test_normalize_fixes_sign_and_norm(harmonic_grid):
    psi = normalize(GridFunction(harmonic_grid, -3.0 * np.exp(-harmonic_grid.x ** 2)))
    assert psi.values[harmonic_grid.n // 2] > 0
    assert overlap(psi, psi) == approx(1.0, rel=1e-12)


def test_normalize_zero_function(harmonic_grid):
    with pytest.raises(ZeroNorm):
        normalize(GridFunction(harmonic_grid, np.zeros(harmonic_grid.n)))


def test_overlap_requires_shared_grid():
    f = GridFunction.sample(symmetric_grid(1.0, 11), np.cos)
    g = GridFunction.sample(symmetric_grid(1.0, 21), np.cos)
    with pytest.raises(GridMismatch):
        overlap(f, g)
