"""Holomorphic sections on the sphere: Toeplitz operators, SK operators and the BPU map"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cycles import CurveSpec, make_half_weighted, sample_cycle, uniform_half_weighted
from polarizations_complex import (
    SectionVector,
    bpu_map,
    eigenspaces,
    expectation_function,
    holomorphic_basis,
    matrix_from_record,
    matrix_to_record,
    prop4_distance,
    ray_distance,
    sk_operator_matrix,
    toeplitz_matrix,
)
from polarizations_real import build_real_hilbert
from surfaces import FlatTorus, PolyField, RoundSphere, TorusCoordinate, random_poly_field
from utils import NonQuantizableError, NotBohrSommerfeldError, QuadratureError, WorkbenchError

X, Y, Z = (PolyField.coordinate(a) for a in range(3))


@pytest.fixture(scope='module')
def level4():
    return holomorphic_basis(4)


@pytest.mark.parametrize('k', [1, 2, 5, 8])
def test_basis_is_orthonormal(k):
    data = holomorphic_basis(k)
    assert data.dimension == k + 1
    assert data.order == k + 3
    assert data.gram_residual <= 1e-10
    assert np.allclose(toeplitz_matrix(data, PolyField.constant(1.0)), np.eye(k + 1), atol=1e-12)


def test_basis_validation():
    with pytest.raises(WorkbenchError):
        holomorphic_basis(0)
    with pytest.raises(QuadratureError) as info:
        holomorphic_basis(6, quadrature_order=2)
    assert info.value.suggested_order >= 9


@pytest.mark.parametrize('k', [1, 3, 6])
def test_height_operator_spectrum(k):
    """e_j are eigenvectors of T_z with eigenvalue (k - 2j) / (k + 2)"""
    data = holomorphic_basis(k)
    tz = toeplitz_matrix(data, Z)
    expected = (k - 2 * np.arange(k + 1)) / (k + 2)
    assert np.allclose(tz, np.diag(expected), atol=1e-12)


@given(st.integers(min_value=0, max_value=10_000))
def test_toeplitz_hermitian_and_linear(seed):
    data = holomorphic_basis(3)
    f, g = random_poly_field(seed), random_poly_field(seed + 1)
    tf = toeplitz_matrix(data, f)
    assert np.abs(tf - tf.conj().T).max() < 1e-12
    combined = toeplitz_matrix(data, 2.0 * f + g)
    assert np.abs(combined - (2.0 * tf + toeplitz_matrix(data, g))).max() < 1e-12


def test_toeplitz_rejects_torus_fields(level4):
    with pytest.raises(WorkbenchError):
        toeplitz_matrix(level4, TorusCoordinate(0))


def test_expectation_matches_quadratic_form(level4):
    f = random_poly_field(7)
    rng = np.random.default_rng(0)
    coefficients = rng.normal(size=5) + 1j * rng.normal(size=5)
    section = SectionVector(3.0 * coefficients)
    unit = section.normalized().coefficients
    expected = np.real(np.vdot(unit, toeplitz_matrix(level4, f) @ unit))
    assert expectation_function(level4, f, section) == pytest.approx(expected, abs=1e-12)
    assert expectation_function(level4, PolyField.constant(1.0), section) == pytest.approx(1.0)
    with pytest.raises(WorkbenchError):
        expectation_function(level4, f, SectionVector(np.zeros(5)))


def test_sk_operator_of_constant_is_scalar(level4):
    unit = sk_operator_matrix(level4, PolyField.constant(1.0), step=5e-4)
    assert np.abs(unit - 2j * np.pi * np.eye(5)).max() < 1e-8


def test_sk_operators_are_skew_hermitian_and_close_under_brackets():
    data = holomorphic_basis(2)
    sphere = RoundSphere(2)
    q = {name: sk_operator_matrix(data, f, step=5e-4) for name, f in (('x', X), ('y', Y), ('z', Z))}
    for matrix in q.values():
        assert np.abs(matrix + matrix.conj().T).max() < 1e-8
    commutator = q['x'] @ q['y'] - q['y'] @ q['x']
    bracket = sk_operator_matrix(data, sphere.poisson_bracket(X, Y), step=5e-4)
    assert np.abs(commutator - bracket).max() < 1e-6


def test_sk_operator_needs_an_affine_function(level4):
    with pytest.raises(NonQuantizableError):
        sk_operator_matrix(level4, Z * Z)


@pytest.mark.parametrize('m', [1, 2, 3])
def test_bpu_image_of_a_latitude_is_a_basis_ray(level4, m):
    cycle = sample_cycle(RoundSphere(4), CurveSpec('latitude', {'area': m}), 64)
    image = bpu_map(level4, uniform_half_weighted(cycle))
    target = np.zeros(5)
    target[m] = 1.0
    assert ray_distance(image.coefficients, target) < 1e-8
    flipped = bpu_map(level4, uniform_half_weighted(cycle, sign=-1))
    assert np.allclose(flipped.coefficients, -image.coefficients)


def test_bpu_map_preconditions(level4):
    torus_hw = uniform_half_weighted(sample_cycle(FlatTorus(4), CurveSpec('horizontal_line', {'c': 0.25}), 32))
    with pytest.raises(WorkbenchError):
        bpu_map(level4, torus_hw)
    off_level = sample_cycle(RoundSphere(4), CurveSpec('latitude', {'h': 0.1}), 32)
    with pytest.raises(NotBohrSommerfeldError):
        bpu_map(level4, make_half_weighted(off_level, 1.0, require_bs=False))
    wrong_level = sample_cycle(RoundSphere(3), CurveSpec('latitude', {'area': 1}), 32)
    with pytest.raises(WorkbenchError):
        bpu_map(level4, uniform_half_weighted(wrong_level))


def test_ray_distance():
    u = np.array([1.0, 1j, 0.5])
    assert ray_distance(u, np.exp(0.7j) * 2.0 * u) == pytest.approx(0.0, abs=1e-15)
    assert ray_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(np.pi / 2)
    assert ray_distance(np.array([1.0, 0.0]), np.array([1.0, 1.0])) == pytest.approx(np.pi / 4)


def test_eigenspaces_group_degenerate_values():
    groups = eigenspaces(np.diag([2.0, 1.0, 1.0]))
    assert [round(value, 12) for value, _ in groups] == [1.0, 2.0]
    assert [basis.shape[1] for _, basis in groups] == [2, 1]


@pytest.mark.parametrize('k', [2, 4])
def test_critical_points_land_on_height_eigenrays(k):
    summary = build_real_hilbert(RoundSphere(k))
    rows = prop4_distance(holomorphic_basis(k), Z, summary.critical_points)
    assert len(rows) == 2 * (k - 1)
    assert max(row['distance'] for row in rows) < 1e-8
    assert max(row['pair_distance'] for row in rows) < 1e-10
    expected = sorted((k - 2 * m) / (k + 2) for m in range(1, k))
    assert sorted({round(row['eigenvalue'], 9) for row in rows}) == pytest.approx(expected)


def test_matrix_record_round_trip(level4):
    matrix = toeplitz_matrix(level4, X)
    record = matrix_to_record(level4, matrix, 'T_x')
    assert record['basis']['dimension'] == 5
    assert np.array_equal(matrix_from_record(record), matrix)
