import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pytest import approx

from modules.errors import DomainError, UnsupportedFamily
from modules.potentials import (
    FamilyId, Params, Sign, catalog, domain_of, eval_partner, eval_W, eval_W_prime, get_family,
    sextic_map_published_linear, sextic_map_resolved, sextic_map_table, sextic_map_variant,
)

SEXTIC_POINT = Params(0.5 * (2.0 - 2.06) * 2.06, 1.0, -4.12, 2.06)


def test_catalog_has_fourteen_unique_families():
    families = catalog()
    assert len(families) == 14
    assert len({spec.id for spec in families}) == 14
    assert families[0].id is FamilyId.HARMONIC
    assert families[-1].id is FamilyId.SEXTIC


def test_get_family_accepts_strings_and_rejects_unknown():
    assert get_family("morse").id is FamilyId.MORSE
    assert get_family(FamilyId.ECKART).name == "Eckart"
    with pytest.raises(UnsupportedFamily):
        get_family("no-such-family")


def test_scalar_in_scalar_out():
    value = eval_W(FamilyId.HARMONIC, Params(1.0, 0.0), 2.0)
    assert isinstance(value, float)
    assert value == approx(2.0)


def test_harmonic_partner_is_shifted_parabola():
    x = np.linspace(-3, 3, 13)
    assert eval_partner(FamilyId.HARMONIC, Params(1.0, 0.0), x) == approx(x ** 2 - 1.0)
    assert eval_partner(FamilyId.HARMONIC, Params(1.0, 0.0), x, Sign.PLUS) == approx(x ** 2 + 1.0)


def test_half_line_rejects_negative_x():
    with pytest.raises(DomainError) as info:
        eval_W(FamilyId.COULOMB, Params(1.0, 1.0), -1.0)
    assert info.value.x == -1.0


def test_sextic_pole_rejected_within_radius():
    params = Params(0.1, -1.0, 4.0, -0.25)
    domain = domain_of(FamilyId.SEXTIC, params)
    assert domain.poles == approx((-2.0, 2.0))
    with pytest.raises(DomainError):
        eval_W(FamilyId.SEXTIC, params, 2.0 + 1e-8)
    assert math.isfinite(eval_W(FamilyId.SEXTIC, params, 2.1))


def test_non_finite_parameter_rejected():
    with pytest.raises(DomainError):
        Params(math.nan, 1.0)


@given(st.floats(min_value=-5.0, max_value=5.0))
def test_partner_difference_is_twice_W_prime(x):
    for spec, params in ((FamilyId.MORSE, Params(5.0, 1.0)), (FamilyId.SEXTIC, SEXTIC_POINT)):
        plus = eval_partner(spec, params, x, Sign.PLUS)
        minus = eval_partner(spec, params, x, Sign.MINUS)
        assert plus - minus == approx(2.0 * eval_W_prime(spec, params, x), rel=1e-9, abs=1e-9)


@given(st.floats(min_value=-4.0, max_value=4.0))
def test_sextic_W_is_odd(x):
    assert eval_W(FamilyId.SEXTIC, SEXTIC_POINT, -x) == approx(-eval_W(FamilyId.SEXTIC, SEXTIC_POINT, x), abs=1e-12)


def test_W_prime_matches_central_difference():
    x, h = 0.7, 1e-5
    for spec in catalog():
        params = spec.reference_params
        numeric = (eval_W(spec, params, x + h) - eval_W(spec, params, x - h)) / (2 * h)
        assert eval_W_prime(spec, params, x) == approx(numeric, rel=1e-6, abs=1e-6), spec.name


def test_sextic_maps_on_worked_example():
    q = Params(-0.105, 1.0, -4.2, 2.1)
    assert sextic_map_published_linear(q).as_tuple() == approx((0.105, -1.0, -8.2, -0.1))
    assert sextic_map_resolved(q).as_tuple() == approx((0.105, -1.0, -0.2, -0.1))
    assert sextic_map_table(q).as_tuple() == approx((-0.105, -1.0, 8.2, 0.5 * 2.1 * (2.0 - 2.1)))


def test_sign_variant_name_and_action():
    step = sextic_map_variant(1, 1, -1, 1)
    assert step.__name__ == "variant_D+1+1_G-1+1"
    assert step(SEXTIC_POINT).as_tuple() == approx(sextic_map_resolved(SEXTIC_POINT).as_tuple())


def test_scarf_i_domain_is_centred():
    q = Params(2.0, 0.5, p=2.0)
    domain = domain_of(FamilyId.SCARF_I, q)
    assert (domain.left, domain.right) == approx((-math.pi / 4.0, math.pi / 4.0))
    # x ↦ x − π/(2p) maps the (0, π/p) cot/csc form onto it
    x = np.linspace(0.1, math.pi / q.p - 0.1, 9)
    shifted = eval_W(FamilyId.SCARF_I, q, x - math.pi / (2.0 * q.p))
    assert shifted == approx(-q.A / np.tan(q.p * x) - q.B / np.sin(q.p * x), rel=1e-10)
