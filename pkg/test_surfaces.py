"""Surface models: brackets, symplectic conventions, charts, areas and flows"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cycles import CurveSpec, sample_cycle
from surfaces import (
    FlatTorus,
    PolyField,
    RoundSphere,
    SurfaceModel,
    TorusCoordinate,
    TrigField,
    make_surface,
    random_poly_field,
    random_trig_field,
)
from utils import SurfaceError

seeds = st.integers(min_value=0, max_value=10_000)


def _torus_points(n=40, seed=1):
    return np.random.default_rng(seed).uniform(0.0, 1.0, size=(n, 2))


def _sphere_points(n=40, seed=1):
    p = np.random.default_rng(seed).normal(size=(n, 3))
    return p / np.linalg.norm(p, axis=1, keepdims=True)


@pytest.mark.parametrize('k', [1, 2, 5])
def test_torus_coordinate_bracket_is_one_over_k(k):
    torus = FlatTorus(k)
    bracket = torus.poisson_bracket(TorusCoordinate(0), TorusCoordinate(1))
    assert np.allclose(bracket.evaluate(_torus_points()), 1.0 / k, atol=1e-15)


@pytest.mark.parametrize('k', [1, 2, 3])
def test_sphere_bracket_of_x_and_y_is_scaled_z(k):
    sphere = RoundSphere(k)
    points = _sphere_points()
    bracket = sphere.poisson_bracket(PolyField.coordinate(0), PolyField.coordinate(1))
    assert np.allclose(bracket.evaluate(points), (4 * np.pi / k) * points[:, 2], atol=1e-13)


@pytest.mark.parametrize('model', ['torus', 'sphere'])
def test_bracket_is_derivative_along_hamiltonian_field(model):
    surface = make_surface(model, 3)
    if surface.model is SurfaceModel.FLAT_TORUS:
        f, g, points = random_trig_field(1), random_trig_field(2), _torus_points()
    else:
        f, g, points = random_poly_field(1), random_poly_field(2), _sphere_points()
    along = np.sum(surface.hamiltonian_field(f, points) * g.gradient(points), axis=1)
    assert np.allclose(surface.poisson_bracket(f, g).evaluate(points), along, atol=1e-10)


@pytest.mark.parametrize('model', ['torus', 'sphere'])
def test_omega_conventions(model):
    """omega(., X_f) = df, omega(X_f, X_g) = {f, g}, omega(nu, t) = 1"""
    surface = make_surface(model, 2)
    rng = np.random.default_rng(5)
    if surface.model is SurfaceModel.FLAT_TORUS:
        f, g, points = random_trig_field(3), random_trig_field(4), _torus_points()
        v = rng.normal(size=points.shape)
    else:
        f, g, points = random_poly_field(3), random_poly_field(4), _sphere_points()
        v = np.cross(points, rng.normal(size=points.shape))
    xf = surface.hamiltonian_field(f, points)
    xg = surface.hamiltonian_field(g, points)
    df_v = np.sum(f.gradient(points) * v, axis=1)
    assert np.allclose(surface.omega(points, v, xf), df_v, atol=1e-10)
    assert np.allclose(surface.omega(points, xf, xg), surface.poisson_bracket(f, g).evaluate(points), atol=1e-10)
    nu = surface.transversal(points, v)
    assert np.allclose(surface.omega(points, nu, v), 1.0, atol=1e-12)


@given(seeds, seeds)
def test_torus_bracket_antisymmetry(s1, s2):
    torus = FlatTorus(2)
    f, g = random_trig_field(s1), random_trig_field(s2)
    points = _torus_points()
    total = torus.poisson_bracket(f, g) + torus.poisson_bracket(g, f)
    assert np.abs(total.evaluate(points)).max() < 1e-10


@given(seeds, seeds, seeds)
def test_sphere_bracket_leibniz(s1, s2, s3):
    sphere = RoundSphere(3)
    f, g, h = random_poly_field(s1), random_poly_field(s2), random_poly_field(s3, degree=1)
    points = _sphere_points()
    lhs = sphere.poisson_bracket(f, g * h).evaluate(points)
    rhs = (sphere.poisson_bracket(f, g) * h + g * sphere.poisson_bracket(f, h)).evaluate(points)
    assert np.allclose(lhs, rhs, atol=1e-8 * max(1.0, np.abs(lhs).max()))


@given(seeds, seeds, seeds)
def test_torus_bracket_jacobi(s1, s2, s3):
    torus = FlatTorus(1)
    f, g, h = (random_trig_field(s, degree=1) for s in (s1, s2, s3))
    pb = torus.poisson_bracket
    total = pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))
    assert np.abs(total.evaluate(_torus_points())).max() < 1e-8


@pytest.mark.parametrize('k', [1, 3, 7])
def test_total_area_is_level(k):
    assert FlatTorus(k).total_area() == pytest.approx(k, abs=1e-12)
    assert RoundSphere(k).total_area() == pytest.approx(k, abs=1e-10)


def test_sphere_chart_transition_round_trip():
    sphere = RoundSphere(2)
    for p in _sphere_points(10, seed=9):
        north = sphere.to_point(p, chart='north')
        south = sphere.chart_transition(north, 'south')
        assert south.chart in ('north', 'south')
        assert np.allclose(sphere.to_model(south), p, atol=1e-12)


def test_sphere_charts_switch_near_the_far_pole():
    sphere = RoundSphere(1)
    near_south = np.array([0.0, 0.01, -1.0])
    near_south /= np.linalg.norm(near_south)
    assert sphere.to_point(near_south, chart='north').chart == 'south'


def test_sphere_south_chart_is_inverse_of_north():
    """w_south = 1 / w_north as complex numbers"""
    sphere = RoundSphere(1)
    p = _sphere_points(1, seed=3)[0]
    wn = complex(*sphere._chart_coords('north', p))
    ws = complex(*sphere._chart_coords('south', p))
    assert ws * wn == pytest.approx(1.0, abs=1e-12)


def test_invalid_surface_inputs():
    with pytest.raises(SurfaceError):
        FlatTorus(0)
    with pytest.raises(SurfaceError):
        RoundSphere(1.5)
    with pytest.raises(SurfaceError):
        SurfaceModel.parse('klein-bottle')
    assert SurfaceModel.parse('sphere') is SurfaceModel.ROUND_SPHERE


def test_field_family_mismatch_rejected():
    with pytest.raises(SurfaceError):
        FlatTorus(1).poisson_bracket(PolyField.coordinate(0), TorusCoordinate(1))


@pytest.mark.parametrize('k', [1, 4])
def test_torus_circle_area(k):
    torus = FlatTorus(k)
    cycle = sample_cycle(torus, CurveSpec('circle', {'center': (0.5, 0.5), 'radius': 0.25}), 64)
    assert torus.enclosed_area(cycle) == pytest.approx(k * np.pi / 16, abs=1e-12)


def test_torus_square_polyline_area_is_exact():
    torus = FlatTorus(3)
    cycle = sample_cycle(torus, CurveSpec('square', {'corner': (0.2, 0.3), 'side': 0.4}), 16)
    assert torus.enclosed_area(cycle, rule='polyline') == pytest.approx(3 * 0.16, abs=1e-14)


@pytest.mark.parametrize('c', [0.1, 0.25, 0.7])
def test_torus_line_actions(c):
    torus = FlatTorus(2)
    horizontal = sample_cycle(torus, CurveSpec('horizontal_line', {'c': c}), 32)
    vertical = sample_cycle(torus, CurveSpec('vertical_line', {'c': c}), 32)
    assert torus.enclosed_area(horizontal) == pytest.approx(-2 * c, abs=1e-12)
    assert torus.enclosed_area(vertical) == pytest.approx(2 * c, abs=1e-12)
    assert torus.enclosed_area(horizontal, rule='polyline') == pytest.approx(-2 * c, abs=1e-12)


@pytest.mark.parametrize('h', [-0.6, 0.0, 0.5])
def test_sphere_latitude_area(h):
    sphere = RoundSphere(4)
    cycle = sample_cycle(sphere, CurveSpec('latitude', {'h': h}), 64)
    assert sphere.enclosed_area(cycle) == pytest.approx(4 * (1 - h) / 2, abs=1e-12)


def test_sphere_circle_area_independent_of_axis():
    sphere = RoundSphere(3)
    radius = np.arccos(1 - 2.0 / 3)
    for center in [(0, 0, 1), (1, 0, 0), (0.3, -0.5, 0.8)]:
        cycle = sample_cycle(sphere, CurveSpec('circle', {'center': center, 'radius': radius}), 128)
        assert sphere.enclosed_area(cycle) == pytest.approx(1.0, abs=1e-10)


def test_torus_translation_flow():
    torus = FlatTorus(2)
    start = _torus_points(5)
    moved = torus.flow_points(TorusCoordinate(1), start, 0.3)
    assert np.allclose(moved[:, 0], start[:, 0] - 0.3 / 2)
    assert np.allclose(moved[:, 1], start[:, 1])


def test_sphere_rotation_flow_closes_after_half_level():
    sphere = RoundSphere(2)
    start = _sphere_points(5)
    back = sphere.flow_points(PolyField.coordinate(2), start, 1.0)
    assert np.allclose(back, start, atol=1e-8)
    quarter = sphere.flow_points(PolyField.coordinate(2), start, 0.25)
    assert np.allclose(quarter[:, 2], start[:, 2], atol=1e-12)


def test_flow_of_constant_or_zero_time_is_identity():
    sphere = RoundSphere(1)
    start = _sphere_points(3)
    assert np.array_equal(sphere.flow_points(PolyField.constant(2.0), start, 1.0), start)
    assert np.array_equal(sphere.flow_points(PolyField.coordinate(0), start, 0.0), start)
    with pytest.raises(SurfaceError):
        sphere.flow_points(PolyField.coordinate(0), start, 1.0, dt=0.0)


def test_trig_field_from_terms_evaluates():
    f = TrigField.from_terms({(1, 0): (2.0, 0.5), (0, 0): (1.0, 0.0)})
    points = _torus_points(6)
    expected = 1.0 + 2.0 * np.cos(2 * np.pi * points[:, 0]) + 0.5 * np.sin(2 * np.pi * points[:, 0])
    assert np.allclose(f.evaluate(points), expected)


def test_hamiltonian_vector_in_the_torus_chart():
    torus = FlatTorus(4)
    p = torus.to_point(np.array([0.3, 0.6]))
    assert np.allclose(torus.hamiltonian_vector(TorusCoordinate(0), p), [0.0, 0.25])
    assert np.allclose(torus.hamiltonian_vector(TorusCoordinate(1), p), [-0.25, 0.0])
    with pytest.raises(SurfaceError):
        torus.hamiltonian_vector(PolyField.coordinate(2), p)


def test_flow_point_crosses_charts_and_conserves_the_hamiltonian():
    sphere = RoundSphere(2)
    start = sphere.to_point(np.array([0.0, 0.28, 0.96]))
    assert start.chart == 'north'
    # half a period of the rotation about the x axis
    end = sphere.flow_point(PolyField.coordinate(0), start, 0.5)
    assert end.chart == 'south'
    assert np.allclose(sphere.to_model(end), [0.0, -0.28, -0.96], atol=1e-8)
    torus = FlatTorus(2)
    moved = torus.flow_point(TorusCoordinate(1), torus.to_point(np.array([0.1, 0.4])), 0.3)
    assert np.allclose(torus.to_model(moved), [0.95, 0.4])


@given(seeds)
def test_flow_preserves_enclosed_area_on_the_torus(seed):
    torus = FlatTorus(2)
    cycle = sample_cycle(torus, CurveSpec('circle', {'center': (0.5, 0.5), 'radius': 0.2}), 128)
    moved = cycle.with_points(torus.flow_points(random_trig_field(seed, amplitude=0.1), cycle.points, 0.2))
    assert torus.enclosed_area(moved) == pytest.approx(torus.enclosed_area(cycle), abs=1e-9)


@given(seeds)
def test_flow_preserves_enclosed_area_on_the_sphere(seed):
    sphere = RoundSphere(4)
    cycle = sample_cycle(sphere, CurveSpec('latitude', {'area': 1}), 128)
    moved = cycle.with_points(sphere.flow_points(random_poly_field(seed, amplitude=0.1), cycle.points, 0.2))
    assert np.allclose(np.linalg.norm(moved.points, axis=1), 1.0)
    before = sphere.enclosed_area(cycle, primitive='north')
    assert sphere.enclosed_area(moved, primitive='north') == pytest.approx(before, abs=1e-9)
