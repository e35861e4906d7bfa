import math

import numpy as np
import pytest
from pytest import approx

from modules import oracle
from modules.errors import GridMismatch, NonFinitePotential, ResourceLimit, UnsupportedFamily
from modules.grid import GridFunction, symmetric_grid, uniform_grid
from modules.ladder import excited_state
from modules.potentials import FamilyId, Params


def harmonic(x):
    return x ** 2 - 1.0


def test_harmonic_levels_on_fixed_grid():
    result = oracle.solve(harmonic, symmetric_grid(10.0, 4001), 4)
    assert result.eigenvalues == approx([0.0, 2.0, 4.0, 6.0], abs=1e-4)
    assert max(result.residuals) < 1e-8
    assert [oracle.count_nodes(psi) for psi in result.eigenvectors] == list(range(4))


def test_richardson_improves_harmonic_levels():
    coarse = oracle.solve(harmonic, symmetric_grid(10.0, 4001), 4)
    fine = oracle.solve(harmonic, symmetric_grid(10.0, 8001), 4)
    extrapolated = oracle.richardson(fine.eigenvalues, coarse.eigenvalues)
    assert extrapolated == approx([0.0, 2.0, 4.0, 6.0], abs=1e-7)


def test_parity_split_reproduces_full_grid():
    full = oracle.solve(harmonic, symmetric_grid(8.0, 3201 * 2 - 1), 4)
    half = uniform_grid(0.0, 8.0, 3201)
    even = oracle.solve(harmonic, half, 2, parity="even")
    odd = oracle.solve(harmonic, half, 2, parity="odd")
    assert even.eigenvalues == approx(full.eigenvalues[[0, 2]], rel=1e-9, abs=1e-10)
    assert odd.eigenvalues == approx(full.eigenvalues[[1, 3]], rel=1e-9, abs=1e-10)


def test_reflected_half_grid_states_match_full_grid():
    full = oracle.solve(harmonic, symmetric_grid(8.0, 4001), 2)
    half = uniform_grid(0.0, 8.0, 2001)
    even = oracle.reflect(oracle.solve(harmonic, half, 1, parity="even").eigenvectors[0], "even")
    odd = oracle.reflect(oracle.solve(harmonic, half, 1, parity="odd").eigenvectors[0], "odd")
    assert even.values == approx(full.eigenvectors[0].values, abs=1e-8)
    assert odd.values == approx(full.eigenvectors[1].values, abs=1e-8)
    assert oracle.count_nodes(odd) == 1


def test_eigenvectors_are_orthonormal():
    result = oracle.solve(harmonic, symmetric_grid(10.0, 4001), 4)
    h = result.grid.h
    gram = np.array([[np.sum(f.values * g.values) * h for g in result.eigenvectors]
                     for f in result.eigenvectors])
    assert np.max(np.abs(gram - np.eye(4))) < 1e-8


def test_residual_of_exact_state_is_small():
    grid = symmetric_grid(10.0, 4001)
    V = GridFunction.sample(grid, harmonic, "V")
    psi = excited_state(FamilyId.HARMONIC, Params(1.0, 0.0), 1, grid)
    assert oracle.residual_norm(V, psi, 2.0) < 1e-4
    assert oracle.residual_norm(V, psi, 2.1) > 1e-2


def test_count_nodes_ignores_noise_tails():
    grid = symmetric_grid(5.0, 1001)
    values = grid.x * np.exp(-grid.x ** 2)
    values[:5] = 1e-14 * (-1.0) ** np.arange(5)
    assert oracle.count_nodes(GridFunction(grid, values)) == 1


def test_non_finite_potential_rejected():
    def barrier(x):
        return np.where(x == 0.0, math.inf, x ** 2)

    with pytest.raises(NonFinitePotential):
        oracle.solve(barrier, symmetric_grid(1.0, 101), 1)


def test_parity_split_needs_half_grid():
    V = GridFunction.sample(symmetric_grid(1.0, 101), harmonic)
    with pytest.raises(GridMismatch):
        oracle.build_hamiltonian(V, parity="even")


def test_too_many_states_requested():
    H = oracle.build_hamiltonian(GridFunction.sample(symmetric_grid(1.0, 101), harmonic))
    with pytest.raises(ValueError):
        oracle.lowest_eigenpairs(H, 50)


def test_refinement_stops_at_point_limit():
    problem = oracle.EigenProblem(harmonic, -8.0, 8.0, 2)
    with pytest.raises(ResourceLimit):
        oracle.refine_until_converged(problem, 1e-9, {"initial_points": 2001, "max_points": 3000})


@pytest.mark.slow
def test_refinement_converges_on_harmonic():
    problem = oracle.EigenProblem(harmonic, -6.0, 6.0, 3)
    result = oracle.refine_until_converged(problem, 1e-6)
    assert result.extrapolated == approx([0.0, 2.0, 4.0], abs=1e-6)
    assert result.diagnostics["boundary_sensitivity"] < 1e-6
    assert result.diagnostics["refinements"] >= 1


def test_residuals_stay_small_on_very_fine_grids():
    # ‖H‖ grows like 4/h², so an unscaled residual would fail here
    result = oracle.solve(harmonic, symmetric_grid(10.0, 400001), 3)
    assert max(result.residuals) < 1e-8
    assert result.eigenvalues == approx([0.0, 2.0, 4.0], abs=1e-6)


def test_norm_bound_dominates_spectrum():
    H = oracle.build_hamiltonian(GridFunction.sample(symmetric_grid(5.0, 501), harmonic))
    top = oracle.lowest_eigenpairs(H, 3)
    assert H.norm_bound() >= 4.0 / H.grid.h ** 2
    assert H.norm_bound() > max(abs(top.eigenvalues))


def test_harmonic_family_spectrum_has_no_wall_sensitivity():
    result = oracle.family_spectrum(FamilyId.HARMONIC, Params(1.0, 0.0), 2)
    assert result.extrapolated == approx([0.0, 2.0], abs=1e-5)
    assert result.diagnostics["delta_sensitivity"] == 0.0
    assert result.diagnostics["delta"] == 1e-4


def test_family_spectrum_refuses_sextic():
    with pytest.raises(UnsupportedFamily):
        oracle.family_spectrum(FamilyId.SEXTIC, Params(1.0, 1.0, 0.0, 1.0), 1)


# (family, params, exact lowest levels); parameters keep ψ ∝ x² at finite ends
FAMILY_LEVELS = [
    (FamilyId.COULOMB, Params(1.0, 2.0), [0.0, 5.0 / 9.0]),
    (FamilyId.OSCILLATOR_3D, Params(1.0, 2.0), [0.0, 4.0]),
    (FamilyId.MORSE, Params(5.0, 1.0), [0.0, 9.0]),
    (FamilyId.ROSEN_MORSE_I, Params(-2.0, 0.5), [0.0, 9.0 - 4.0 + 0.25 - 1.0 / 9.0]),
    (FamilyId.ROSEN_MORSE_II, Params(5.5, 1.0), [0.0, 30.25 + 1.0 - 20.25 - (5.5 / 4.5) ** 2]),
    (FamilyId.ECKART, Params(2.0, 6.0), [0.0, 15.0]),
    (FamilyId.SCARF_I, Params(2.0, 0.0), [0.0, 5.0]),
    (FamilyId.SCARF_II, Params(2.0, 1.0), [0.0, 3.0]),
    (FamilyId.POSCHL_TELLER_I, Params(2.0, 4.0), [0.0, 3.0]),
    (FamilyId.POSCHL_TELLER_II, Params(6.0, 2.0), [0.0, 12.0]),
    (FamilyId.DOUBLE_ANGLE, Params(0.25, 1.5), [0.0]),
    (FamilyId.QUADRUPLE_ANGLE, Params(0.25, 3.0), [0.0]),
]


@pytest.mark.slow
@pytest.mark.parametrize("family, params, levels", FAMILY_LEVELS, ids=lambda v: getattr(v, "value", None))
def test_family_spectrum_matches_exact_levels(family, params, levels):
    result = oracle.family_spectrum(family, params, len(levels))
    assert result.extrapolated == approx(levels, rel=1e-4, abs=1e-4)
    assert max(result.residuals) < 1e-8
    assert result.diagnostics["delta_sensitivity"] < 1e-4
