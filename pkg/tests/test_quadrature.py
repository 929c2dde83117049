import math

import numpy as np
import pytest
from scipy import integrate

from app.errors import InvalidParameter, RadiusOverflow
from app.kernel import kernel_closed_form_ekman, kernel_value
from app.oracle import exact_solution, unit_flux
from app.quadrature import (
    CosineInverter,
    QuadratureGrid,
    gauss_laguerre_inverse,
    gauss_laguerre_rule,
    midpoint_inverse,
    select_radius,
    truncation_bound,
)
from config import PUBLISHED_VALUES


@pytest.fixture(scope="module")
def exact_benchmark():
    return exact_solution(1.0, 1.0, unit_flux, 5.0, 1.0)


def test_grid_from_step():
    grid = QuadratureGrid.from_step(20.0, 0.05)
    assert grid.N == 400
    assert grid.N * grid.h == pytest.approx(grid.R, rel=1e-15)
    nodes = grid.nodes
    assert nodes[0] == pytest.approx(0.025)
    assert np.all(np.diff(nodes) > 0)
    assert 0.0 < nodes[0] and nodes[-1] < grid.R


@pytest.mark.parametrize("R,h", [(20.0, 0.3), (20.0, 0.0), (0.0, 0.05), (0.01, 0.05)])
def test_grid_rejects_incommensurate_steps(R, h):
    with pytest.raises(InvalidParameter):
        QuadratureGrid.from_step(R, h)


def test_grid_rejects_empty():
    with pytest.raises(InvalidParameter):
        QuadratureGrid(R=1.0, N=0)


def test_midpoint_zero_data(zero_problem):
    result = midpoint_inverse(zero_problem, QuadratureGrid(R=10.0, N=50), 1.5, 1.0)
    np.testing.assert_array_equal(result, [0.0, 0.0])


def test_midpoint_single_node(ekman):
    h, z, t = 0.4, 2.0, 1.0
    expected = 2.0 * h / math.pi * kernel_value(ekman, h / 2, t) * math.cos(h * z / 2)
    result = midpoint_inverse(ekman, QuadratureGrid(R=h, N=1), z, t)
    np.testing.assert_allclose(result, expected, rtol=1e-14)


def cosine_tail(R, z=5.0, t=1.0):
    """(2/pi) int_R^inf V(w) cos(zw) dw for the Ekman kernel, by QUADPACK's Fourier rule."""
    def component(index):
        value, _ = integrate.quad(lambda w: kernel_closed_form_ekman(1.0, 1.0, w, t)[index], R, np.inf,
                                  weight="cos", wvar=z, epsabs=1e-12, limlst=100)
        return value

    return 2.0 / math.pi * np.array([component(0), component(1)])


def test_midpoint_benchmark(ekman, exact_benchmark):
    result = midpoint_inverse(ekman, QuadratureGrid.from_step(20.0, 0.05), 5.0, 1.0)
    errors = np.abs(result - exact_benchmark)
    assert 1e-4 < errors[0] < 2e-4
    assert errors[1] < 1e-6


@pytest.mark.parametrize("R", [5.0, 10.0, 15.0, 20.0, 25.0, 30.0])
def test_midpoint_error_is_the_truncated_tail(ekman, exact_benchmark, R):
    # the integrand is even in w, so the midpoint sum on [0, R] is nearly exact
    result = midpoint_inverse(ekman, QuadratureGrid.from_step(R, 0.05), 5.0, 1.0)
    tail = cosine_tail(R)
    np.testing.assert_allclose(result[0] - exact_benchmark[0], -tail[0], rtol=5e-2)
    np.testing.assert_allclose(result[1] - exact_benchmark[1], -tail[1], atol=5e-6)


@pytest.mark.parametrize("R", [5.0, 10.0, 20.0, 30.0, 50.0, 100.0, 200.0])
def test_midpoint_error_within_tail_envelope(ekman, exact_benchmark, R):
    # V_1 ~ 1 / w^2, so the tail is about (2/pi) sin(zR) / (z R^2)
    result = midpoint_inverse(ekman, QuadratureGrid.from_step(R, 0.05), 5.0, 1.0)
    assert abs(result[0] - exact_benchmark[0]) <= 1.2 * 2.0 / math.pi / (5.0 * R * R) + 1e-6


def test_midpoint_converges_to_exact_solution(ekman, exact_benchmark):
    result = midpoint_inverse(ekman, QuadratureGrid.from_step(200.0, 0.05), 5.0, 1.0)
    np.testing.assert_allclose(result, exact_benchmark, atol=5e-6)


@pytest.mark.parametrize("h", [0.2, 0.1, 0.05, 0.025, 0.0125])
def test_midpoint_step_error_dominated_by_truncation(ekman, exact_benchmark, h):
    result = midpoint_inverse(ekman, QuadratureGrid.from_step(20.0, h), 5.0, 1.0)
    np.testing.assert_allclose(result[0] - exact_benchmark[0], -cosine_tail(20.0)[0], rtol=1e-1)


def test_midpoint_discretization_error_shrinks_with_step(ekman, exact_benchmark):
    tail = cosine_tail(20.0)[0]

    def discretization(h):
        return abs(midpoint_inverse(ekman, QuadratureGrid.from_step(20.0, h), 5.0, 1.0)[0] - exact_benchmark[0] + tail)

    assert discretization(0.05) < discretization(0.2)


def test_midpoint_error_in_second_component_decreases_with_radius(ekman, exact_benchmark):
    errors = [
        abs(midpoint_inverse(ekman, QuadratureGrid.from_step(R, 0.05), 5.0, 1.0)[1] - exact_benchmark[1])
        for R in (5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    ]
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))


def test_midpoint_value_independent_of_other_depths(ekman):
    grid = QuadratureGrid.from_step(20.0, 0.05)
    alone = midpoint_inverse(ekman, grid, 5.0, 1.0)
    together = midpoint_inverse(ekman, grid, np.array([0.0, 2.5, 5.0, 7.5]), 1.0)
    assert together.shape == (4, 2)
    np.testing.assert_array_equal(together[2], alone)


def test_cosine_inverter_rejects_negative_depth():
    with pytest.raises(InvalidParameter):
        CosineInverter.midpoint(QuadratureGrid(R=1.0, N=4), [-0.5])


@pytest.mark.parametrize("M", [1, 5, 15, 40])
def test_gauss_laguerre_rule(M):
    rule = gauss_laguerre_rule(M)
    assert rule.abscissae.shape == (M,)
    assert np.all(rule.weights > 0)
    assert np.all(np.diff(rule.abscissae) > 0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("M", [0, 65])
def test_gauss_laguerre_degree_range(M):
    with pytest.raises(InvalidParameter):
        gauss_laguerre_rule(M)


def test_gauss_laguerre_zero_data(zero_problem):
    np.testing.assert_array_equal(gauss_laguerre_inverse(zero_problem, gauss_laguerre_rule(6), 1.0, 1.0), [0.0, 0.0])


@pytest.mark.parametrize("M", [3, 8])
def test_gauss_laguerre_benchmark_rows(ekman, exact_benchmark, M):
    result = gauss_laguerre_inverse(ekman, gauss_laguerre_rule(M), 5.0, 1.0)
    assert abs(result[0] - exact_benchmark[0]) == pytest.approx(PUBLISHED_VALUES["table1"][M][0], rel=5e-2)


def test_gauss_laguerre_fails_where_midpoint_succeeds(ekman, exact_benchmark):
    laguerre = min(
        abs(gauss_laguerre_inverse(ekman, gauss_laguerre_rule(M), 5.0, 1.0)[0] - exact_benchmark[0])
        for M in range(1, 16)
    )
    midpoint = abs(midpoint_inverse(ekman, QuadratureGrid.from_step(30.0, 0.05), 5.0, 1.0)[0] - exact_benchmark[0])
    assert laguerre >= 1e-3
    assert midpoint <= 1.5e-4
    assert laguerre >= 10 * midpoint


def test_bound_without_initial_data(ekman):
    bound = truncation_bound(ekman, 20.0, 1.0, F_sup=0.0, g_sup=1.0)
    assert bound.bound_J1 == 0.0
    assert bound.bound_J2 > 0.0
    assert bound.total == bound.bound_J2


def test_bound_full_tail_limit(ekman):
    bound = truncation_bound(ekman, 1e-12, 1.0, F_sup=2.0, g_sup=0.0)
    assert bound.bound_J1 == pytest.approx(2.0 * math.sqrt(math.pi) / 2.0, rel=1e-9)
    assert bound.bound_J2 == 0.0


def test_bound_nonincreasing_in_radius(ekman):
    radii = [0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 1e3, 1e5]
    bounds = [truncation_bound(ekman, R, 1.0, F_sup=1.0, g_sup=1.0) for R in radii]
    for earlier, later in zip(bounds, bounds[1:]):
        assert later.bound_J1 <= earlier.bound_J1
        assert later.bound_J2 <= earlier.bound_J2


def test_bound_flux_tail_scales_like_inverse_radius(ekman):
    # for B = I the flux tail is 2 sqrt(pi) int_0^1 erfc(Rv) dv ~ 2 / R
    bound = truncation_bound(ekman, 1e4, 1.0, F_sup=0.0, g_sup=1.0)
    assert bound.bound_J2 == pytest.approx(2e-4, rel=2e-3)


@pytest.mark.parametrize("R", [5.0, 10.0, 20.0])
def test_bound_covers_measured_tail(ekman, R):
    far = midpoint_inverse(ekman, QuadratureGrid.from_step(200.0, 0.05), [0.0, 2.0, 5.0], 1.0)
    near = midpoint_inverse(ekman, QuadratureGrid.from_step(R, 0.05), [0.0, 2.0, 5.0], 1.0)
    bound = truncation_bound(ekman, R, 1.0, F_sup=0.0, g_sup=1.0)
    assert np.max(np.abs(far - near)) <= 2.0 / math.pi * bound.total


def test_bound_rejects_bad_arguments(ekman):
    with pytest.raises(InvalidParameter):
        truncation_bound(ekman, 0.0, 1.0, 0.0, 1.0)
    with pytest.raises(InvalidParameter):
        truncation_bound(ekman, 1.0, 1.0, -1.0, 1.0)


def test_select_radius_loose_tolerance(ekman):
    full_tail = truncation_bound(ekman, 1e-12, 1.0, F_sup=1.0, g_sup=1.0).total
    assert select_radius(ekman, 1.0, 1.0, 1.0, tol=full_tail) == 1.0


def test_select_radius_certifies_tolerance(ekman):
    tol = 1e-3
    R = select_radius(ekman, 1.0, 0.0, 1.0, tol)
    assert truncation_bound(ekman, R, 1.0, 0.0, 1.0).total <= tol * math.pi / 2.0
    # within three significant figures of the smallest such radius
    assert truncation_bound(ekman, R * (1 - 2e-3), 1.0, 0.0, 1.0).total > tol * math.pi / 2.0


def test_select_radius_monotone_in_tolerance(ekman):
    radii = [select_radius(ekman, 1.0, 0.0, 1.0, tol) for tol in (1e-1, 1e-2, 1e-3)]
    assert radii == sorted(radii)


def test_select_radius_overflow(ekman):
    # the flux tail only falls like 2 / R, so 1e-6 needs R beyond the search cap
    with pytest.raises(RadiusOverflow):
        select_radius(ekman, 1.0, 0.0, 1.0, tol=1e-6)


def test_select_radius_rejects_bad_tolerance(ekman):
    with pytest.raises(InvalidParameter):
        select_radius(ekman, 1.0, 0.0, 1.0, tol=0.0)
