import math

import numpy as np
import pytest
from pytest import approx

from modules.errors import DomainError, GridMismatch, NonFinite
from modules.grid import (
    GridFunction, cumulative_from_midpoint, derivative, grid_for_domain, require_same_grid,
    second_difference, simpson, symmetric_grid, uniform_grid,
)
from modules.potentials import Domain, DomainKind


def test_even_point_count_bumped_to_odd():
    grid = uniform_grid(0.0, 1.0, 100)
    assert grid.n == 101
    assert grid.h == approx(0.01)


def test_grid_rejects_reversed_ends():
    with pytest.raises(DomainError):
        uniform_grid(1.0, 0.0, 11)


def test_grid_for_each_domain_kind():
    full = grid_for_domain(Domain(DomainKind.FULL_LINE, -math.inf, math.inf), 101, halfwidth=5.0)
    assert (full.x_min, full.x_max) == (-5.0, 5.0)
    half = grid_for_domain(Domain(DomainKind.HALF_LINE, 0.0, math.inf), 101, halfwidth=5.0, halfline_delta=0.1)
    assert (half.x_min, half.x_max) == approx((0.1, 5.0))
    box = grid_for_domain(Domain(DomainKind.INTERVAL, 0.0, math.pi), 101, interval_margin=0.01)
    assert (box.x_min, box.x_max) == approx((0.01, math.pi - 0.01))


def test_grid_function_checks_shape_and_finiteness():
    grid = uniform_grid(0.0, 1.0, 11)
    with pytest.raises(GridMismatch):
        GridFunction(grid, np.zeros(10))
    with pytest.raises(NonFinite):
        GridFunction(grid, np.full(11, np.nan))


def test_require_same_grid():
    f = GridFunction.sample(uniform_grid(0.0, 1.0, 11), np.sin)
    g = GridFunction.sample(uniform_grid(0.0, 1.0, 21), np.sin)
    with pytest.raises(GridMismatch):
        require_same_grid(f, g)


def test_simpson_integrates_gaussian():
    grid = symmetric_grid(10.0, 2001)
    assert simpson(np.exp(-grid.x ** 2), grid.h) == approx(math.sqrt(math.pi), rel=1e-12)


def test_cumulative_from_midpoint_is_zero_at_centre_and_antiderivative():
    grid = symmetric_grid(2.0, 401)
    integral = cumulative_from_midpoint(grid.x, grid.h)
    assert integral[grid.n // 2] == 0.0
    assert integral == approx(0.5 * grid.x ** 2, abs=1e-10)


def test_derivative_is_fourth_order_in_interior():
    grid = uniform_grid(0.0, 2.0, 201)
    d = derivative(np.sin(grid.x), grid.h)
    assert d[2:-2] == approx(np.cos(grid.x[2:-2]), abs=1e-8)
    assert d[0] == approx(1.0, abs=1e-4)


def test_second_difference_on_quadratic_is_exact():
    grid = uniform_grid(-1.0, 1.0, 21)
    assert second_difference(grid.x ** 2, grid.h) == approx(np.full(19, 2.0))
