import math

import numpy as np
import pytest
from pytest import approx

from modules import oracle, sextic
from modules.errors import ConstraintViolation, ConvergenceFailure, GridMismatch
from modules.grid import GridFunction, symmetric_grid, uniform_grid
from modules.ladder import overlap
from modules.potentials import Params
from modules.sextic import NormalizabilityClass, SexticConfig, WellClass
from modules.shape_invariance import Provenance


def test_dependent_parameters():
    a0 = sextic.derive_dependent_params(SexticConfig(1.0, 2.06))
    assert a0.as_tuple() == approx(Params(0.5 * (2.0 - 2.06) * 2.06, 1.0, -4.12, 2.06).as_tuple())


@pytest.mark.parametrize("B0, G0", [(1.0, 1.5), (1.0, 2.0), (-1.0, -3.0)])
def test_dependent_parameters_need_G0_above_2B0(B0, G0):
    with pytest.raises(ConstraintViolation):
        sextic.derive_dependent_params(SexticConfig(B0, G0))


def test_figure_configuration_is_triple_well_with_unit_x0(figure_config):
    geometry = sextic.classify_wells(figure_config)
    assert geometry.classification is WellClass.TRIPLE_WELL
    assert geometry.x0_sq == approx(1.0, abs=1e-6)
    assert len(geometry.critical_points) == 5
    assert geometry.epsilon > 0


def test_wide_ratio_is_double_well():
    geometry = sextic.classify_wells(SexticConfig(1.0, 5.0))
    assert geometry.classification is WellClass.DOUBLE_WELL
    assert len(geometry.critical_points) == 3


def test_band_is_enforced():
    with pytest.raises(ConstraintViolation):
        sextic.require_band(SexticConfig(1.0, 5.0))
    with pytest.raises(ConstraintViolation):
        sextic.epsilon_depth(SexticConfig(1.0, 1.5))


def test_potential_vanishes_at_outer_minima(figure_config):
    x0 = math.sqrt(sextic.classify_wells(figure_config).x0_sq)
    values = sextic.potential_V(figure_config, np.array([-x0, x0]))
    assert values == approx([0.0, 0.0], abs=1e-8)
    assert sextic.potential_V(figure_config, 0.0) > 0


def test_potential_is_nonnegative(moderate_config):
    x = np.linspace(-6.0, 6.0, 2001)
    assert np.min(sextic.potential_V(moderate_config, x)) > -1e-9


def test_level_zero_shift_is_four_G_minus_B(moderate_config):
    C0, map_name = sextic.level_zero_shift(moderate_config)
    assert C0 == approx(4.0 * (2.06 - 1.0), rel=1e-9)
    assert map_name == "variant_D+1+1_G-1+1"


def test_exact_states_have_expected_nodes(moderate_config):
    states = sextic.sample_states(moderate_config, symmetric_grid(11.0, 8001))
    assert oracle.count_nodes(states["ground"]) == 0
    assert oracle.count_nodes(states["chi"]) == 2
    assert oracle.count_nodes(states["psi_1"]) == 1
    assert abs(overlap(states["ground"], states["chi"])) < 1e-8
    assert abs(overlap(states["ground"], states["psi_1"])) < 1e-12


def test_exact_states_satisfy_schrodinger_equation(moderate_config):
    grid = symmetric_grid(11.0, 64001)
    V = GridFunction.sample(grid, lambda x: sextic.potential_V(moderate_config, x), "V")
    states = sextic.sample_states(moderate_config, grid)
    spectrum = sextic.bound_energies(moderate_config, n_max=0, reconcile=False)
    E0 = spectrum.energy(0)
    C0, _ = sextic.level_zero_shift(moderate_config)
    assert oracle.residual_norm(V, states["ground"], E0) < 1e-5
    assert oracle.residual_norm(V, states["chi"], E0 + C0) < 1e-5


def test_bound_energies_are_ordered(moderate_config, ledger_records):
    spectrum = sextic.bound_energies(moderate_config)
    E0, E1, E2 = spectrum.energies
    C0 = spectrum.metadata["C0"]
    assert E0 < E1 < E2
    assert E2 - E0 == approx(C0, rel=1e-12)
    assert E2 == approx(spectrum.metadata["epsilon"], rel=1e-12)
    assert [level.provenance for level in spectrum.levels] == [
        Provenance.ANALYTIC, Provenance.ORACLE, Provenance.ANALYTIC]
    assert any(entry["item"] == "E_0" for entry in ledger_records)


def test_bound_energies_reject_higher_levels(moderate_config):
    with pytest.raises(ConstraintViolation):
        sextic.bound_energies(moderate_config, n_max=3)


def test_oracle_levels_agree_with_analytic_ones(moderate_config):
    analytic = sextic.bound_energies(moderate_config, reconcile=False)
    numeric = sextic.oracle_levels(moderate_config)
    assert numeric.metadata["parity"] == ["even", "odd", "even"]
    assert numeric.energy(0) == approx(analytic.energy(0), rel=1e-5, abs=1e-5)
    assert numeric.energy(2) == approx(analytic.energy(2), rel=1e-5)
    assert numeric.energy(1) == approx(analytic.energy(1), rel=1e-9)


def test_normalizability_classes(moderate_config):
    classes = [sextic.normalizability_class(moderate_config, n) for n in range(3)]
    assert classes == [NormalizabilityClass.DIVERGENT, NormalizabilityClass.NORMALIZABLE,
                       NormalizabilityClass.NORMALIZABLE]
    with pytest.raises(ValueError):
        sextic.normalizability_class(moderate_config, 3)


def test_published_first_state_is_odd(moderate_config):
    x = np.linspace(0.1, 4.0, 40)
    psi = sextic.wavefunction_analytic(moderate_config, 1, x)
    assert sextic.wavefunction_analytic(moderate_config, 1, -x) == approx(-psi, rel=1e-12)


def test_complement_report_keys(moderate_config):
    report = sextic.complement_report(moderate_config)
    assert set(report) == {"alpha", "window", "log_start", "log_end", "log_drop", "decays", "g_increasing"}
    assert report["window"][0] == approx(report["alpha"])


def test_gap_ratio_is_positive(moderate_config):
    assert sextic.gap_ratio(moderate_config, reconcile=False) > sextic.RHO_HARMONIC


def test_scan_rejects_range_outside_band():
    with pytest.raises(ConstraintViolation):
        sextic.scan_rho(2.0, 2.5, samples=3)
    with pytest.raises(ConstraintViolation):
        sextic.scan_rho(2.1, 2.05, samples=3)
    with pytest.raises(ConstraintViolation):
        sextic.scan_rho(samples=0)


@pytest.mark.slow
def test_scan_single_sample(ledger_records):
    scan = sextic.scan_rho(2.05, 2.07, samples=1, config={"scan_oracle_points": 2001})
    assert all(r == approx(2.06) for r in scan.ratios)
    assert scan.rho_min == approx(scan.rhos[0], rel=1e-2)
    assert scan.argmin_ratio == approx(2.06)
    assert any(entry["item"] == "minimum rho over band" for entry in ledger_records)


@pytest.mark.slow
def test_gap_ratio_is_scale_invariant(moderate_config):
    check = sextic.scale_invariance_check(moderate_config, lambdas=(0.5, 4.0), tol=1e-4)
    assert check["passed"], check["deviations"]


@pytest.mark.parametrize("make", [sextic.figure_config, lambda: SexticConfig(1.0, 2.06)])
def test_ground_state_is_gaussian_near_origin(make):
    deviations = np.abs(sextic.gaussian_limit_ratios(make(), (1e-2, 1e-3, 1e-4)) - 1.0)
    assert np.all(np.diff(deviations) < 0)
    assert deviations[-1] < 1e-8


def test_doublet_status():
    assert sextic.doublet_status(1.0, 1.5, 1e-6) == "resolved"
    assert sextic.doublet_status(1.0, 1.0 + 1e-9, 1e-6) == "unresolved"
    assert sextic.doublet_status(1.0, 1.0 - 1e-9, 1e-6) == "unresolved"
    with pytest.raises(ConvergenceFailure):
        sextic.doublet_status(1.0, 0.9, 1e-6)


def test_moderate_doublet_is_resolved(moderate_config):
    spectrum = sextic.bound_energies(moderate_config, reconcile=False)
    assert spectrum.metadata["doublet"] == "resolved"
    assert spectrum.metadata["splitting"] > spectrum.metadata["E1_error_bar"]


@pytest.mark.slow
def test_figure_doublet_is_unresolved(figure_config, ledger_records):
    spectrum = sextic.bound_energies(figure_config)
    assert spectrum.metadata["doublet"] == "unresolved"
    assert abs(spectrum.metadata["splitting"]) <= spectrum.metadata["E1_error_bar"]
    assert any(entry["item"] == "E_0/E_1 doublet" for entry in ledger_records)


def test_odd_state_is_an_odd_eigenstate_of_V(moderate_config):
    grid = symmetric_grid(4.0, 4001)
    psi = sextic.odd_state(moderate_config, grid)
    E1 = sextic.bound_energies(moderate_config, 1, reconcile=False).energy(1)
    assert psi.values[::-1] == approx(-psi.values, abs=1e-12)
    assert oracle.count_nodes(psi) == 1
    # Rayleigh quotient; interpolated states are too rough for a pointwise residual
    slope = np.gradient(psi.values, grid.h)
    V = sextic.potential_V(moderate_config, grid.x)
    energy = np.sum(slope ** 2 + V * psi.values ** 2) / np.sum(psi.values ** 2)
    assert energy == approx(E1, rel=1e-3)


def test_odd_state_needs_symmetric_grid(moderate_config):
    with pytest.raises(GridMismatch):
        sextic.odd_state(moderate_config, uniform_grid(0.0, 4.0, 101))


@pytest.mark.slow
def test_fictitious_state_report_at_figure_configuration(figure_config):
    report = sextic.fictitious_state_report(figure_config)
    E0 = sextic.bound_energies(figure_config, 0, reconcile=False).energy(0)
    C0 = sextic.level_zero_shift(figure_config)[0]
    assert report["node_count"] == 0
    assert report["lowest_eigenvalue"] == approx(E0, rel=1e-6)
    assert report["offset_from_epsilon"] == approx(-C0, rel=1e-6)
    assert report["grid"]["last_change"] < 1e-6


@pytest.mark.slow
def test_full_band_scan(ledger_records):
    scan = sextic.scan_rho(samples=200)
    band = scan.ratios[:200]
    assert len(band) == 200
    assert all(2.0 < r < sextic.TRIPLE_WELL_UPPER_RATIO for r in band)
    assert all(math.isfinite(rho) and rho > sextic.RHO_HARMONIC for rho in scan.rhos)
    assert scan.rho_min == min(scan.rhos)
    assert scan.boundary["upper_ratio"] == sextic.TRIPLE_WELL_UPPER_RATIO
    bound = [entry for entry in ledger_records if entry["item"] == "minimum rho over band"]
    assert bound and bound[0]["authoritative"] == approx(scan.rho_min)
