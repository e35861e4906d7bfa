import logging
import math

import numpy as np
from hypothesis import given, strategies as st
from pytest import approx

from modules import published_forms as pf
from modules import sextic
from modules.potentials import FamilyId, Sign, eval_partner, sextic_map_published_linear


def test_reconcile_agreeing_values(ledger_records):
    entry = pf.reconcile("topic", "item", 1.0, 1.0 + 1e-9)
    assert entry.agrees
    assert ledger_records[-1]["item"] == "item"


def test_reconcile_differing_values_logs_warning(caplog, ledger_records):
    with caplog.at_level(logging.WARNING, logger="ledger"):
        entry = pf.reconcile("topic", "item", 1.0, 2.0)
    assert not entry.agrees
    assert entry.abs_diff == approx(1.0)
    assert entry.rel_diff == approx(0.5)
    assert "DIFFER" in caplog.text


def test_reconcile_unevaluable_printed_form():
    entry = pf.reconcile("topic", "item", None, 3.0)
    assert not entry.agrees
    assert math.isnan(entry.rel_diff)
    assert entry.to_dict()["rel_diff"] == "nan"


def test_closed_form_first_step_equals_single_step(moderate_config):
    a0 = sextic.level_zero_params(moderate_config)
    assert pf.closed_form_params(a0, 1).as_tuple() == approx(sextic_map_published_linear(a0).as_tuple())


def test_printed_plus_partner_is_the_level_zero_polynomial(moderate_config):
    a0 = sextic.level_zero_params(moderate_config)
    x = np.linspace(-3.0, 3.0, 61)
    printed = pf.partner_plus_printed(moderate_config.B0, moderate_config.G0, x)
    assert printed == approx(eval_partner(FamilyId.SEXTIC, a0, x, Sign.PLUS), rel=1e-12, abs=1e-12)


@given(st.floats(min_value=-2.0, max_value=2.0))
def test_printed_states_parity(x):
    B0, G0 = 1.0, 2.06
    assert pf.psi1_printed(B0, G0, -x) == approx(-pf.psi1_printed(B0, G0, x), abs=1e-12)
    assert pf.psi2_printed(B0, G0, -x) == approx(pf.psi2_printed(B0, G0, x), rel=1e-12)
    assert pf.psi0_printed(B0, G0, -x) ** 2 == approx(pf.psi0_printed(B0, G0, x) ** 2, rel=1e-12)


def test_printed_ground_state_is_reciprocal_of_exact_one(moderate_config):
    x = np.linspace(-2.0, 2.0, 41)
    product = pf.psi0_printed(moderate_config.B0, moderate_config.G0, x) * sextic.eigenstate_analytic(
        moderate_config, "ground", x)
    assert product == approx(np.ones_like(x), rel=1e-12)


def test_printed_first_energy_sits_C0_above_epsilon():
    B0, G0 = 1.0, 2.06
    assert pf.bound_energy_printed(B0, G0, 1, 0.0) == approx(4.0 * (G0 - B0), rel=1e-12)
    assert pf.bound_energy_printed(B0, G0, 0, 7.5) == 7.5
