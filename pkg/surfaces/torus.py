import logging
from typing import Tuple

import numpy as np

from surfaces.base import SurfaceModel, SurfacePoint, SymplecticSurface
from surfaces.fields import ScalarField, TrigField
from utils import SurfaceError, spectral_derivative

logger = logging.getLogger(__name__)


class FlatTorus(SymplecticSurface):
    """R^2 / Z^2 with omega = k dx^dy"""

    model = SurfaceModel.FLAT_TORUS
    dim = 2
    CHART = 'square'

    def chart_ids(self) -> Tuple[str, ...]:
        return (self.CHART,)

    def to_model(self, point: SurfacePoint) -> np.ndarray:
        if point.chart != self.CHART or len(point.coords) != 2:
            raise SurfaceError(f"Invalid torus point: {point}")
        coords = np.asarray(point.coords, dtype=float)
        if not np.all(np.isfinite(coords)):
            raise SurfaceError(f"Non-finite torus point: {point}")
        return coords

    def to_point(self, model_coords: np.ndarray, chart: str = None) -> SurfacePoint:
        reduced = np.mod(np.asarray(model_coords, dtype=float), 1.0)
        return SurfacePoint(self.CHART, (float(reduced[0]), float(reduced[1])))

    def chart_jacobian(self, chart: str, model_coords: np.ndarray) -> np.ndarray:
        return np.eye(2)

    def area_density(self, chart: str, coords: np.ndarray) -> np.ndarray:
        coords = np.atleast_2d(coords)
        return np.full(coords.shape[0], float(self.level))

    def total_area(self, n: int = 32) -> float:
        grid = (np.arange(n) + 0.5) / n
        xx, yy = np.meshgrid(grid, grid, indexing='ij')
        density = self.area_density(self.CHART, np.stack([xx.ravel(), yy.ravel()], axis=1))
        return float(density.sum() / (n * n))

    def project(self, model_coords: np.ndarray) -> np.ndarray:
        return model_coords

    def field_family(self) -> str:
        return TrigField.family

    def hamiltonian_field(self, f: ScalarField, model_coords: np.ndarray) -> np.ndarray:
        grad = f.gradient(model_coords)
        return np.stack([-grad[:, 1], grad[:, 0]], axis=1) / self.level

    def omega(self, model_coords: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        u, v = np.atleast_2d(u), np.atleast_2d(v)
        return self.level * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])

    def transversal(self, model_coords: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        t = np.atleast_2d(tangents)
        speed2 = np.sum(t * t, axis=1, keepdims=True)
        return np.stack([t[:, 1], -t[:, 0]], axis=1) / (self.level * speed2)

    def poisson_bracket(self, f: ScalarField, g: ScalarField) -> ScalarField:
        self.check_field(f)
        self.check_field(g)
        bracket = f.derivative(0) * g.derivative(1) - f.derivative(1) * g.derivative(0)
        return bracket.scaled(1.0 / self.level)

    def _action_spectral(self, points: np.ndarray, homology: Tuple[int, int], primitive: str) -> float:
        # periodic parts of the lifted coordinates carry the spectral accuracy
        a, b = homology
        n = points.shape[0]
        s = np.arange(n) / n
        x_per = points[:, 0] - a * s
        y_per = points[:, 1] - b * s
        dx_per = spectral_derivative(x_per)
        integral = np.mean(y_per * dx_per) + a * np.mean(y_per) - b * np.mean(x_per) + 0.5 * a * b
        return float(-self.level * integral)

    def _action_polyline(self, points: np.ndarray, homology: Tuple[int, int], primitive: str) -> float:
        a, b = homology
        closed = np.vstack([points, points[:1] + np.array([a, b], dtype=float)])
        dx = np.diff(closed[:, 0])
        y_mid = 0.5 * (closed[1:, 1] + closed[:-1, 1])
        return float(-self.level * np.sum(y_mid * dx) + self.level * b * points[0, 0])
