"""Special functions, the moduli form and the criticality search"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cycles import (
    CurveSpec,
    make_half_weighted,
    random_tangent_pair,
    sample_cycle,
    transport,
    transport_pair,
    uniform_half_weighted,
)
from moduli_dynamics import (
    ModuliConfig,
    boundary_contraction_scan,
    critical_tangent_test,
    criticality_residual,
    differential_pairing,
    find_critical_point,
    flow_invariance,
    inclusion_gap,
    moduli_bracket,
    moduli_ham_field,
    omega_form,
    solve_moduli_ham_field,
    special_value,
    theta_bs_components,
)
from surfaces import FlatTorus, PolyField, RoundSphere, TorusCoordinate, random_poly_field, random_trig_field
from utils import ConvergenceError, NotCriticalError, WorkbenchError

seeds = st.integers(min_value=0, max_value=5_000)


def weighted_graph(k=2, n=64):
    cycle = sample_cycle(FlatTorus(k), CurveSpec('graph', {'c': 0.5, 'terms': [(1, 0.04, 0.02)]}), n)
    return make_half_weighted(cycle, np.exp(0.3 * np.cos(2 * np.pi * cycle.params)))


def latitude(k=4, area=1, n=64):
    return uniform_half_weighted(sample_cycle(RoundSphere(k), CurveSpec('latitude', {'area': area}), n))


def test_special_value_of_constant_is_tau_times_constant():
    hw = weighted_graph(k=2)
    assert special_value(TorusCoordinate.constant(3.0), hw) == pytest.approx(3.0 / 4.0)
    assert special_value(TorusCoordinate.constant(3.0), hw, ModuliConfig(tau=0.1)) == pytest.approx(0.3)
    with pytest.raises(WorkbenchError):
        ModuliConfig(tau=0.0)


@given(seeds, seeds)
def test_omega_form_is_antisymmetric(s1, s2):
    hw = weighted_graph()
    p, q = random_tangent_pair(hw, s1), random_tangent_pair(hw, s2)
    assert omega_form(hw, p, q) == pytest.approx(-omega_form(hw, q, p), abs=1e-14)
    assert omega_form(hw, p, p) == pytest.approx(0.0, abs=1e-14)


@given(seeds, seeds)
def test_moduli_hamiltonian_field_is_dual_to_the_differential(field_seed, pair_seed):
    hw = weighted_graph()
    f = random_trig_field(field_seed)
    pair = random_tangent_pair(hw, pair_seed)
    lhs = omega_form(hw, moduli_ham_field(f, hw), pair)
    rhs = differential_pairing(f, hw, pair)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


def test_sphere_duality():
    cycle = sample_cycle(RoundSphere(4), CurveSpec('latitude', {'area': 2}), 64)
    hw = make_half_weighted(cycle, np.exp(0.2 * np.sin(2 * np.pi * cycle.params)))
    f = random_poly_field(11)
    pair = random_tangent_pair(hw, 4)
    assert omega_form(hw, moduli_ham_field(f, hw), pair) == pytest.approx(
        differential_pairing(f, hw, pair), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize('k', [1, 3])
def test_bracket_matches_special_value_on_horizontal_lines(k):
    """On a uniform line y = c the moduli bracket is 2 tau F_{f,g} exactly"""
    torus = FlatTorus(k)
    hw = uniform_half_weighted(sample_cycle(torus, CurveSpec('horizontal_line', {'c': 1.0 / k}), 64))
    f, g = random_trig_field(1, degree=1), random_trig_field(2, degree=1)
    tau = 1.0 / (2 * k)
    expected = 2 * tau * special_value(torus.poisson_bracket(f, g), hw)
    assert moduli_bracket(f, g, hw) == pytest.approx(expected, rel=1e-10, abs=1e-13)
    assert moduli_bracket(g, f, hw) == pytest.approx(-expected, rel=1e-10, abs=1e-13)


def test_latitude_is_critical_for_height():
    hw = latitude()
    spread, flux = criticality_residual(PolyField.coordinate(2), hw)
    assert spread < 1e-12 and flux < 1e-10
    pair = random_tangent_pair(hw, 0)
    assert not critical_tangent_test(PolyField.coordinate(2), hw, pair)
    with pytest.raises(NotCriticalError):
        critical_tangent_test(PolyField.coordinate(0), hw, pair)


def test_search_from_a_critical_point_stops_immediately():
    result = find_critical_point(PolyField.coordinate(2), latitude())
    assert result.converged
    assert result.iterations == 0
    assert result.message == 'already critical'


def test_search_never_increases_the_residual():
    hw = weighted_graph()
    f = TorusCoordinate(1)
    result = find_critical_point(f, hw, ModuliConfig(max_iterations=20))
    merits = [a * a + b * b for a, b in result.trace]
    assert all(later <= earlier for earlier, later in zip(merits, merits[1:]))
    assert merits[-1] < merits[0]
    assert result.hw.sigma == hw.sigma


def test_search_budget_exhaustion_can_raise():
    hw = weighted_graph()
    with pytest.raises(ConvergenceError):
        find_critical_point(TorusCoordinate(1), hw, ModuliConfig(max_iterations=1), raise_on_failure=True)


def test_boundary_scan_is_monotone_and_away_from_criticality():
    result = boundary_contraction_scan(RoundSphere(3), family_spec={'count': 8}, search=False)
    assert len(result.rows) == 8
    assert result.monotone
    assert result.min_relative_residual >= 1e-3
    assert result.level_set_rows == []
    assert result.search is None
    areas = [row['area'] for row in result.rows]
    assert all(b < a for a, b in zip(areas, areas[1:]))


def test_boundary_scan_search_reports_non_convergence():
    result = boundary_contraction_scan(RoundSphere(3), cfg=ModuliConfig(max_iterations=50))
    assert result.ok
    search = result.search
    assert search is not None
    assert not search.converged
    assert 1 <= search.iterations <= 50
    assert search.message
    merits = [a * a + b * b for a, b in search.trace]
    assert all(later <= earlier for earlier, later in zip(merits, merits[1:]))


def test_boundary_scan_latitude_family_is_critical():
    result = boundary_contraction_scan(RoundSphere(3), family_spec={'kind': 'latitude', 'count': 5}, search=False)
    assert len(result.level_set_rows) == 5
    assert not result.ok


def test_boundary_scan_rejects_torus_and_other_divisors():
    with pytest.raises(WorkbenchError):
        boundary_contraction_scan(FlatTorus(2), search=False)
    with pytest.raises(WorkbenchError):
        boundary_contraction_scan(RoundSphere(2), divisor_spec={'point': 'south'}, search=False)


def test_inclusion_gap_of_shifted_function_is_zero():
    samples = [latitude(area=m) for m in (1, 2, 3)]
    f = random_poly_field(5)
    gap = inclusion_gap(f, f + 3.0, samples)
    assert gap.max_gap == pytest.approx(0.0, abs=1e-12)
    assert gap.mean_gap == pytest.approx(-3.0)
    assert inclusion_gap(f, PolyField.coordinate(2), samples).max_gap > 1e-3


@pytest.mark.parametrize('surface_case', ['torus', 'sphere'])
def test_flow_preserves_moduli_form_and_special_value(surface_case):
    if surface_case == 'torus':
        hw, f = weighted_graph(k=2), random_trig_field(4, amplitude=0.1)
    else:
        hw, f = latitude(k=4, area=1), random_poly_field(4, amplitude=0.1)
    p, q = random_tangent_pair(hw, 1), random_tangent_pair(hw, 2)
    inv = flow_invariance(f, hw, p, q, t=0.1)
    assert abs(inv.omega_before) > 1e-4
    assert inv.omega_drift < 1e-8
    assert inv.special_drift < 1e-10


def test_transport_pair_for_zero_time_is_the_identity():
    hw = latitude(k=4, area=1)
    f = random_poly_field(2)
    pair = random_tangent_pair(hw, 9)
    moved = transport(hw, f, 0.0)
    carried = transport_pair(pair, f, 0.0, moved)
    assert np.allclose(carried.psi1, pair.psi1, atol=1e-8)
    assert np.array_equal(carried.psi2, pair.psi2)


def test_transport_pair_follows_a_rotation_of_the_latitude():
    # the flow of z rotates a latitude into itself, so normal profiles are carried unchanged
    hw = latitude(k=4, area=1)
    f = PolyField.coordinate(2)
    pair = random_tangent_pair(hw, 11)
    moved = transport(hw, f, 0.4)
    carried = transport_pair(pair, f, 0.4, moved)
    assert np.allclose(carried.psi1, pair.psi1, atol=1e-8)


@pytest.mark.parametrize('surface_case', ['torus', 'sphere'])
def test_solved_hamiltonian_field_is_two_tau_theta(surface_case):
    if surface_case == 'torus':
        hw, f = weighted_graph(k=2, n=32), random_trig_field(6)
    else:
        hw, f = latitude(k=4, area=1, n=32), random_poly_field(6)
    solved = solve_moduli_ham_field(f, hw)
    theta = theta_bs_components(f, hw).scaled(2.0 * ModuliConfig().tau_for(hw))
    assert np.abs(theta.psi2).max() > 1e-3
    assert np.allclose(solved.psi1, theta.psi1, atol=1e-9)
    assert np.allclose(solved.psi2, theta.psi2, atol=1e-9)
    pair = random_tangent_pair(hw, 21)
    assert omega_form(hw, solved, pair) == pytest.approx(differential_pairing(f, hw, pair), rel=1e-9, abs=1e-12)

def test_hamiltonian_field_is_theta_scaled_by_two_tau():
    hw = weighted_graph(k=2)
    f = random_trig_field(3)
    theta = theta_bs_components(f, hw)
    field = moduli_ham_field(f, hw)
    assert np.allclose(field.psi1, 2 * 0.25 * theta.psi1, atol=1e-14)
    assert np.allclose(field.psi2, 2 * 0.25 * theta.psi2, atol=1e-14)
