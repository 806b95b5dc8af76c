"""
Complex polarization on the sphere at level k.

Holomorphic sections are zeta^j, j = 0..k, in the chart zeta = (x + iy)/(1 + z)
with hermitian metric h = ((1 + z)/2)^k. Everything is stored in the unitary
frame, where the section values are

    v_j = e^{i j phi} (1 - z)^{j/2} (1 + z)^{(k - j)/2} / 2^{k/2}

and the Chern connection reads A = -i k (1 - z)/2 dphi (curvature -2 pi i omega).
Integrals use Gauss-Legendre in z times a uniform grid in phi, with the
level-k area measure (k / 4 pi) dz dphi.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky, eigh, solve_triangular
from scipy.spatial.transform import Rotation
from scipy.special import roots_legendre

from cycles import HalfWeightedCycle
from prequantum import holonomy
from surfaces import PolyField, ScalarField, SurfaceModel
from utils import (
    NonQuantizableError,
    NotBohrSommerfeldError,
    QuadratureError,
    WorkbenchError,
    spectral_antiderivative,
    spectral_derivative,
)

logger = logging.getLogger(__name__)

GRAM_TOL = 1e-10
FLOW_STEP = 1e-3
EIGEN_GROUP_TOL = 1e-9
BASIS_CONVENTION = 'unitary frame of zeta^j, j ascending; zeta=(x+iy)/(1+z), h=((1+z)/2)^k'


def _grid(level: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes (P, 3) on the unit sphere and weights for the level-k area"""
    z, wz = roots_legendre(order)
    m = 2 * (level + order) + 4
    phi = 2.0 * np.pi * np.arange(m) / m
    zz, pp = np.meshgrid(z, phi, indexing='ij')
    rho = np.sqrt(1.0 - zz ** 2)
    nodes = np.stack([rho * np.cos(pp), rho * np.sin(pp), zz], axis=-1).reshape(-1, 3)
    weights = np.repeat(wz, m) * (2.0 * np.pi / m) * (level / (4.0 * np.pi))
    return nodes, weights


def section_values(level: int, points: np.ndarray) -> np.ndarray:
    """Unitary-frame values of zeta^j at (P, 3) points, shape (P, k + 1)"""
    points = np.atleast_2d(points)
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    phi = np.arctan2(y, x)
    j = np.arange(level + 1)
    lower = np.clip(1.0 - z, 0.0, None)[:, None]
    upper = np.clip(1.0 + z, 0.0, None)[:, None]
    modulus = lower ** (j / 2.0) * upper ** ((level - j) / 2.0) / 2.0 ** (level / 2.0)
    return modulus * np.exp(1j * np.outer(phi, j))


def _gram(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return values.conj().T @ (weights[:, None] * values)


@dataclass(frozen=True, eq=False)
class ToeplitzData:
    level: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray  # monomial sections at the nodes
    transform: np.ndarray  # columns: orthonormal basis in monomial coordinates
    gram: np.ndarray
    gram_residual: float
    cache: Dict = field(default_factory=dict, repr=False)

    @property
    def dimension(self) -> int:
        return self.level + 1

    @property
    def basis_values(self) -> np.ndarray:
        return self.values @ self.transform

    def basis_at(self, points: np.ndarray) -> np.ndarray:
        return section_values(self.level, points) @ self.transform

    def header(self) -> Dict:
        return {
            'level': self.level,
            'dimension': self.dimension,
            'quadrature_order': self.order,
            'convention': BASIS_CONVENTION,
        }


@dataclass(frozen=True)
class SectionVector:
    coefficients: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def normalized(self) -> 'SectionVector':
        if self.norm == 0.0:
            raise WorkbenchError("Zero section has no direction")
        return SectionVector(self.coefficients / self.norm)

    def to_record(self, data: ToeplitzData) -> Dict:
        return {
            'basis': data.header(),
            'coefficients': [[float(c.real), float(c.imag)] for c in self.coefficients],
        }


def holomorphic_basis(k: int, quadrature_order: Optional[int] = None) -> ToeplitzData:
    if int(k) != k or k < 1:
        raise WorkbenchError(f"Level must be a positive integer, got {k}")
    order = int(quadrature_order or k + 3)
    if order < 1:
        raise QuadratureError(f"Quadrature order must be positive, got {order}", suggested_order=k + 3)
    nodes, weights = _grid(k, order)
    values = section_values(k, nodes)
    gram = _gram(values, weights)
    try:
        lower = cholesky(gram, lower=True)
    except LinAlgError:
        raise QuadratureError(f"Gram matrix at order {order} is not positive definite",
                              suggested_order=max(2 * order, k + 3))
    transform = solve_triangular(lower, np.eye(k + 1), lower=True).conj().T

    check_nodes, check_weights = _grid(k, 2 * order)
    check = transform.conj().T @ _gram(section_values(k, check_nodes), check_weights) @ transform
    residual = float(np.abs(check - np.eye(k + 1)).max())
    if residual > GRAM_TOL:
        raise QuadratureError(
            f"Quadrature order {order} leaves a Gram residual of {residual:.3e} at level {k}",
            suggested_order=max(2 * order, k + 3),
        )
    logger.debug(f"Holomorphic basis k={k} order={order}: Gram residual {residual:.2e}")
    return ToeplitzData(k, order, nodes, weights, values, transform, gram, residual)


def _sphere_field(f: ScalarField):
    if not isinstance(f, PolyField):
        raise WorkbenchError(f"{f!r} is not a sphere field")


def toeplitz_matrix(data: ToeplitzData, f: ScalarField) -> np.ndarray:
    """T_f[i, j] = <e_i, f e_j>"""
    _sphere_field(f)
    key = ('toeplitz', f.key)
    if key not in data.cache:
        basis = data.basis_values
        weighted = (data.weights * f.evaluate(data.nodes))[:, None] * basis
        data.cache[key] = basis.conj().T @ weighted
    return data.cache[key]


def _connection_along(level: int, start: np.ndarray, axis: np.ndarray, t: float) -> np.ndarray:
    """Integral of A along the rotation trajectories of `start` for time t (8-node Gauss)"""
    if t == 0:
        return np.zeros(start.shape[0], dtype=complex)
    nodes, weights = roots_legendre(8)
    times = 0.5 * t * (nodes + 1.0)
    total = np.zeros(start.shape[0], dtype=complex)
    for tau, w in zip(times, weights):
        p = Rotation.from_rotvec(-(4.0 * np.pi / level) * tau * axis).apply(start)
        velocity = (4.0 * np.pi / level) * np.cross(p, axis)
        swirl = (p[:, 0] * velocity[:, 1] - p[:, 1] * velocity[:, 0]) / (p[:, 0] ** 2 + p[:, 1] ** 2)
        total += w * (-0.5j * level) * (1.0 - p[:, 2]) * swirl
    return 0.5 * t * total


def _pullback(data: ToeplitzData, f: PolyField, axis: np.ndarray, t: float) -> np.ndarray:
    """Basis sections transported back along the time-t lifted flow of X_f, at the nodes"""
    moved = Rotation.from_rotvec(-(4.0 * np.pi / data.level) * t * axis).apply(data.nodes)
    phase = np.exp(2j * np.pi * f.evaluate(data.nodes) * t + _connection_along(data.level, data.nodes, axis, t))
    return phase[:, None] * data.basis_at(moved)


def sk_operator_matrix(data: ToeplitzData, f: ScalarField, step: float = FLOW_STEP) -> np.ndarray:
    """
    Q_f = nabla_{X_f} + 2 pi i f on H^0, from the derivative at t = 0 of the
    lifted flow (central differences with one Richardson extrapolation).
    Only affine f generate rotations, the flows preserving H^0.
    """
    _sphere_field(f)
    axis = f.linear_part()
    if axis is None:
        raise NonQuantizableError(
            f"{f!r} has degree {f.degree}; its flow does not preserve the holomorphic sections"
        )
    key = ('sk', f.key, step)
    if key in data.cache:
        return data.cache[key]

    def central(h: float) -> np.ndarray:
        return (_pullback(data, f, axis, h) - _pullback(data, f, axis, -h)) / (2.0 * h)

    derivative = (4.0 * central(0.5 * step) - central(step)) / 3.0
    basis = data.basis_values
    matrix = basis.conj().T @ (data.weights[:, None] * derivative)
    data.cache[key] = matrix
    return matrix


def expectation_function(data: ToeplitzData, f: ScalarField, section: SectionVector) -> float:
    """Integral of f against u(x, s) = |s(x)|^2, for s scaled to unit norm"""
    _sphere_field(f)
    if section.norm == 0.0:
        raise WorkbenchError("Expectation of the zero section is undefined")
    unit = section.normalized()
    density = np.abs(data.basis_values @ unit.coefficients) ** 2
    return float(np.sum(data.weights * f.evaluate(data.nodes) * density))


def bpu_map(data: ToeplitzData, hw: HalfWeightedCycle) -> SectionVector:
    """
    Project theta times the flat unit section along a BS cycle onto H^0.
    The flat section has frame value exp(2 pi i int_0^s lambda) with lambda
    the primitive regular at the north pole; its phase is 1 at node 0.
    """
    surface = hw.surface
    if surface.model is not SurfaceModel.ROUND_SPHERE or surface.level != data.level:
        raise WorkbenchError(f"bpu_map needs a level-{data.level} sphere cycle")
    result = holonomy(surface, hw.cycle, primitive='north')
    if result.bs_defect > hw.bs_tol:
        raise NotBohrSommerfeldError(f"No flat section: bs_defect {result.bs_defect:.3e}")
    points = hw.cycle.points
    velocity = spectral_derivative(points)
    integrand = (data.level / (4.0 * np.pi)) * (
        points[:, 0] * velocity[:, 1] - points[:, 1] * velocity[:, 0]
    ) / (1.0 + points[:, 2])
    mean = integrand.mean()
    running = spectral_antiderivative(integrand - mean)
    primitive = mean * hw.cycle.params + running - running[0]
    flat = np.exp(2j * np.pi * primitive)
    basis = data.basis_at(points)
    coefficients = basis.conj().T @ (hw.theta * flat) / hw.n
    return SectionVector(coefficients)


def ray_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Fubini-Study angle between the rays of u and v"""
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    overlap = np.vdot(u, v)
    # atan2 keeps full precision near zero angle, where arccos loses half the digits
    return float(np.arctan2(np.linalg.norm(v - overlap * u), abs(overlap)))


def eigenspaces(matrix: np.ndarray, tol: float = EIGEN_GROUP_TOL) -> List[Tuple[float, np.ndarray]]:
    """Eigenvalues of a Hermitian matrix grouped with their eigenspace bases"""
    values, vectors = eigh(matrix)
    groups: List[Tuple[float, np.ndarray]] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            groups.append((float(values[start:i].mean()), vectors[:, start:i]))
            start = i
    return groups


def prop4_distance(data: ToeplitzData, f: ScalarField,
                   critical_points: Sequence[Tuple[int, HalfWeightedCycle, HalfWeightedCycle]]) -> List[Dict]:
    """
    For each (index, +theta, -theta): angle from the BPU image to the nearest
    eigenray of T_f, and the angle between the images of the two signs.
    """
    groups = eigenspaces(toeplitz_matrix(data, f))
    rows = []
    for index, plus, minus in critical_points:
        images = [bpu_map(data, hw).coefficients for hw in (plus, minus)]
        for sign, image in zip((1, -1), images):
            unit = image / np.linalg.norm(image)
            overlaps = [np.linalg.norm(basis.conj().T @ unit) for _, basis in groups]
            best = int(np.argmax(overlaps))
            basis = groups[best][1]
            off = np.linalg.norm(unit - basis @ (basis.conj().T @ unit))
            rows.append({
                'index': index,
                'sign': sign,
                'distance': float(np.arctan2(off, overlaps[best])),
                'eigenvalue': groups[best][0],
                'pair_distance': ray_distance(images[0], images[1]),
            })
    return rows


def matrix_to_record(data: ToeplitzData, matrix: np.ndarray, label: str) -> Dict:
    return {
        'label': label,
        'basis': data.header(),
        'rows': [[[float(c.real), float(c.imag)] for c in row] for row in matrix],
    }


def matrix_from_record(record: Dict) -> np.ndarray:
    rows = record['rows']
    return np.array([[complex(re, im) for re, im in row] for row in rows])
