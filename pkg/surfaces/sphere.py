import logging
from typing import Tuple

import numpy as np
from scipy.special import roots_legendre

from surfaces.base import SurfaceModel, SurfacePoint, SymplecticSurface
from surfaces.fields import PolyField, ScalarField
from utils import SurfaceError, spectral_derivative

logger = logging.getLogger(__name__)

# stereographic coordinates are switched to the other chart past this radius
CHART_SWITCH_RADIUS = 5.0
CHART_BOUND = 10.0


class RoundSphere(SymplecticSurface):
    """
    Unit sphere with omega = (k / 4 pi) * area form, total area k.

    Charts: 'north' w = (x + i y) / (1 + z), regular away from the south pole;
    'south' w = (x - i y) / (1 - z), regular away from the north pole. Both are
    oriented and glue by w -> 1/w.
    """

    model = SurfaceModel.ROUND_SPHERE
    dim = 3

    def chart_ids(self) -> Tuple[str, ...]:
        return ('north', 'south')

    @staticmethod
    def _chart_coords(chart: str, p: np.ndarray) -> np.ndarray:
        x, y, z = p
        if chart == 'north':
            return np.array([x, y]) / (1.0 + z)
        return np.array([x, -y]) / (1.0 - z)

    def to_model(self, point: SurfacePoint) -> np.ndarray:
        if point.chart not in self.chart_ids() or len(point.coords) != 2:
            raise SurfaceError(f"Invalid sphere point: {point}")
        u, v = point.coords
        r2 = u * u + v * v
        if not np.isfinite(r2) or r2 > CHART_BOUND ** 2:
            raise SurfaceError(f"Chart coordinates out of range: {point}")
        scale = 2.0 / (1.0 + r2)
        height = (1.0 - r2) / (1.0 + r2)
        if point.chart == 'north':
            return np.array([scale * u, scale * v, height])
        return np.array([scale * u, -scale * v, -height])

    def to_point(self, model_coords: np.ndarray, chart: str = None) -> SurfacePoint:
        p = np.asarray(model_coords, dtype=float)
        p = p / np.linalg.norm(p)
        if chart is None:
            chart = 'north' if p[2] >= 0 else 'south'
        if chart not in self.chart_ids():
            raise SurfaceError(f"Unknown chart '{chart}'")
        other = 'south' if chart == 'north' else 'north'
        singular = p[2] <= -1.0 if chart == 'north' else p[2] >= 1.0
        if not singular:
            coords = self._chart_coords(chart, p)
            if np.hypot(*coords) <= CHART_SWITCH_RADIUS:
                return SurfacePoint(chart, (float(coords[0]), float(coords[1])))
        logger.debug(f"Chart switch {chart} -> {other} at z={p[2]:.6f}")
        coords = self._chart_coords(other, p)
        return SurfacePoint(other, (float(coords[0]), float(coords[1])))

    def chart_jacobian(self, chart: str, model_coords: np.ndarray) -> np.ndarray:
        x, y, z = model_coords
        if chart == 'north':
            d = 1.0 + z
            return np.array([
                [1.0 / d, 0.0, -x / d ** 2],
                [0.0, 1.0 / d, -y / d ** 2],
            ])
        d = 1.0 - z
        return np.array([
            [1.0 / d, 0.0, x / d ** 2],
            [0.0, -1.0 / d, -y / d ** 2],
        ])

    def area_density(self, chart: str, coords: np.ndarray) -> np.ndarray:
        coords = np.atleast_2d(coords)
        r2 = np.sum(coords ** 2, axis=1)
        return self.level / (np.pi * (1.0 + r2) ** 2)

    def total_area(self, order: int = 24) -> float:
        """Each chart covers its unit disk; Gauss-Legendre in radius, uniform in angle"""
        nodes, weights = roots_legendre(order)
        radii = 0.5 * (nodes + 1.0)
        angles = 2.0 * np.pi * np.arange(2 * order) / (2 * order)
        total = 0.0
        for chart in self.chart_ids():
            rr, aa = np.meshgrid(radii, angles, indexing='ij')
            coords = np.stack([(rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()], axis=1)
            density = self.area_density(chart, coords).reshape(rr.shape)
            radial = np.sum(density * rr, axis=1) * (2.0 * np.pi / angles.size)
            total += 0.5 * np.sum(weights * radial)
        return float(total)

    def project(self, model_coords: np.ndarray) -> np.ndarray:
        return model_coords / np.linalg.norm(model_coords, axis=-1, keepdims=True)

    def field_family(self) -> str:
        return PolyField.family

    def hamiltonian_field(self, f: ScalarField, model_coords: np.ndarray) -> np.ndarray:
        grad = f.gradient(model_coords)
        return (4.0 * np.pi / self.level) * np.cross(model_coords, grad)

    def omega(self, model_coords: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(model_coords)
        return (self.level / (4.0 * np.pi)) * np.sum(p * np.cross(u, v), axis=1)

    def transversal(self, model_coords: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        t = np.atleast_2d(tangents)
        speed2 = np.sum(t * t, axis=1, keepdims=True)
        return (4.0 * np.pi / self.level) * np.cross(t, model_coords) / speed2

    def poisson_bracket(self, f: ScalarField, g: ScalarField) -> ScalarField:
        self.check_field(f)
        self.check_field(g)
        fx, fy, fz = (f.derivative(a) for a in range(3))
        gx, gy, gz = (g.derivative(a) for a in range(3))
        x, y, z = (PolyField.coordinate(a) for a in range(3))
        bracket = x * (fy * gz - fz * gy) + y * (fz * gx - fx * gz) + z * (fx * gy - fy * gx)
        return bracket.scaled(4.0 * np.pi / self.level)

    def _pick_primitive(self, points: np.ndarray, primitive: str) -> str:
        if primitive in ('north', 'south'):
            return primitive
        if primitive != 'auto':
            raise SurfaceError(f"Unknown primitive '{primitive}'")
        # the 'north' primitive is singular at the south pole and vice versa
        return 'north' if points[:, 2].min() > -points[:, 2].max() else 'south'

    def _primitive_values(self, points: np.ndarray, velocities: np.ndarray, choice: str) -> np.ndarray:
        x, y, z = points[:, 0], points[:, 1], points[:, 2]
        swirl = x * velocities[:, 1] - y * velocities[:, 0]
        factor = self.level / (4.0 * np.pi)
        if choice == 'north':
            return factor * swirl / (1.0 + z)
        return -factor * swirl / (1.0 - z)

    def _reduce(self, value: float, primitive: str) -> float:
        if primitive != 'auto':
            return value
        reduced = float(np.mod(value, self.level))
        # exact multiples of the level come back as 0 rather than k
        if np.isclose(reduced, self.level, rtol=0.0, atol=1e-12):
            reduced = 0.0
        return reduced

    def _action_spectral(self, points: np.ndarray, homology: Tuple[int, int], primitive: str) -> float:
        choice = self._pick_primitive(points, primitive)
        velocities = spectral_derivative(points)
        value = float(np.mean(self._primitive_values(points, velocities, choice)))
        return self._reduce(value, primitive)

    def _action_polyline(self, points: np.ndarray, homology: Tuple[int, int], primitive: str) -> float:
        choice = self._pick_primitive(points, primitive)
        closed = np.vstack([points, points[:1]])
        mids = self.project(0.5 * (closed[1:] + closed[:-1]))
        steps = np.diff(closed, axis=0)
        value = float(np.sum(self._primitive_values(mids, steps, choice)))
        return self._reduce(value, primitive)
