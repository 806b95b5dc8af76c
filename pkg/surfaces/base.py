import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from surfaces.fields import ScalarField
from utils import CycleError, SurfaceError

logger = logging.getLogger(__name__)


class SurfaceModel(Enum):
    FLAT_TORUS = 'FlatTorus'
    ROUND_SPHERE = 'RoundSphere'

    @classmethod
    def parse(cls, value) -> 'SurfaceModel':
        if isinstance(value, cls):
            return value
        aliases = {'torus': cls.FLAT_TORUS, 'sphere': cls.ROUND_SPHERE}
        key = str(value).strip()
        if key.lower() in aliases:
            return aliases[key.lower()]
        try:
            return cls(key)
        except ValueError:
            raise SurfaceError(f"Unknown surface model: {value}")


@dataclass(frozen=True)
class SurfacePoint:
    """A point in one chart of a model surface"""
    chart: str
    coords: Tuple[float, ...]


class SymplecticSurface(ABC):
    """
    Base class for the model surfaces.

    Points are handled in model coordinates: lifted (x, y) on the torus,
    ambient unit vectors (x, y, z) on the sphere. Charts are only used at
    the SurfacePoint boundary.
    """

    model: SurfaceModel
    dim: int

    def __init__(self, level: int):
        if int(level) != level or level < 1:
            raise SurfaceError(f"Level must be a positive integer, got {level}")
        self.level = int(level)

    # ---- charts -----------------------------------------------------

    @abstractmethod
    def chart_ids(self) -> Tuple[str, ...]:
        pass

    @abstractmethod
    def to_model(self, point: SurfacePoint) -> np.ndarray:
        """Model coordinates of a chart point"""
        pass

    @abstractmethod
    def to_point(self, model_coords: np.ndarray, chart: str = None) -> SurfacePoint:
        """Chart point for model coordinates, preferring `chart` when it is valid"""
        pass

    @abstractmethod
    def chart_jacobian(self, chart: str, model_coords: np.ndarray) -> np.ndarray:
        """Differential of the chart map at a model point, shape (2, dim)"""
        pass

    @abstractmethod
    def area_density(self, chart: str, coords: np.ndarray) -> np.ndarray:
        """Symplectic area density in chart coordinates, positive"""
        pass

    @abstractmethod
    def total_area(self) -> float:
        """Quadrature of the area density over the chart partition"""
        pass

    def chart_transition(self, point: SurfacePoint, target_chart: str) -> SurfacePoint:
        if target_chart not in self.chart_ids():
            raise SurfaceError(f"Unknown chart '{target_chart}'")
        return self.to_point(self.to_model(point), chart=target_chart)

    # ---- geometry ---------------------------------------------------

    @abstractmethod
    def project(self, model_coords: np.ndarray) -> np.ndarray:
        """Snap model coordinates back onto the surface"""
        pass

    @abstractmethod
    def hamiltonian_field(self, f: ScalarField, model_coords: np.ndarray) -> np.ndarray:
        """X_f at an (n, dim) array of model points, with omega(., X_f) = df"""
        pass

    @abstractmethod
    def omega(self, model_coords: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """omega(u, v) row-wise at model points"""
        pass

    @abstractmethod
    def transversal(self, model_coords: np.ndarray, tangents: np.ndarray) -> np.ndarray:
        """Row-wise nu with omega(nu, t) = 1"""
        pass

    @abstractmethod
    def poisson_bracket(self, f: ScalarField, g: ScalarField) -> ScalarField:
        """{f, g} = omega(X_f, X_g) = X_f(g), as a field of the same family"""
        pass

    @abstractmethod
    def field_family(self) -> str:
        pass

    def check_field(self, f: ScalarField):
        if f.family != self.field_family():
            raise SurfaceError(f"{f!r} does not live on {self.model.value}")

    def hamiltonian_vector(self, f: ScalarField, p: SurfacePoint) -> np.ndarray:
        """X_f at p, expressed in the chart of p"""
        self.check_field(f)
        model_coords = self.to_model(p)
        field = self.hamiltonian_field(f, model_coords[None, :])[0]
        return self.chart_jacobian(p.chart, model_coords) @ field

    # ---- flows ------------------------------------------------------

    def flow_points(self, f: ScalarField, points: np.ndarray, t: float, dt: float = 1e-3) -> np.ndarray:
        """Classical RK4 flow of X_f for time t, applied to an (n, dim) array"""
        if dt <= 0:
            raise SurfaceError(f"dt must be positive, got {dt}")
        self.check_field(f)
        state = np.array(points, dtype=float, copy=True)
        if t == 0 or f.constant_value() is not None:
            return state
        steps = max(1, int(math.ceil(abs(t) / dt)))
        h = t / steps
        for _ in range(steps):
            k1 = self.hamiltonian_field(f, state)
            k2 = self.hamiltonian_field(f, self.project(state + 0.5 * h * k1))
            k3 = self.hamiltonian_field(f, self.project(state + 0.5 * h * k2))
            k4 = self.hamiltonian_field(f, self.project(state + h * k3))
            state = self.project(state + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0)
        return state

    def flow_point(self, f: ScalarField, p: SurfacePoint, t: float, dt: float = 1e-3) -> SurfacePoint:
        end = self.flow_points(f, self.to_model(p)[None, :], t, dt)[0]
        return self.to_point(end, chart=p.chart)

    # ---- area / action ----------------------------------------------

    @abstractmethod
    def _action_spectral(self, points: np.ndarray, homology: Tuple[int, int], primitive: str) -> float:
        pass

    @abstractmethod
    def _action_polyline(self, points: np.ndarray, homology: Tuple[int, int], primitive: str) -> float:
        pass

    def enclosed_area(self, cycle, rule: str = 'spectral', primitive: str = 'auto') -> float:
        """
        Signed symplectic area enclosed by a discretized cycle, i.e. the
        line integral of a primitive of omega. Torus cycles carry their
        homology class; on the sphere `auto` picks the primitive regular on
        the cycle and reports the area of the region on its left.
        """
        if getattr(cycle, 'self_intersecting', False):
            raise CycleError("Cycle is self-intersecting; enclosed area undefined")
        points = np.asarray(cycle.points, dtype=float)
        if np.ptp(points, axis=0).max() == 0.0:
            return 0.0
        homology = tuple(getattr(cycle, 'homology', (0, 0)))
        if rule == 'spectral':
            return self._action_spectral(points, homology, primitive)
        if rule == 'polyline':
            return self._action_polyline(points, homology, primitive)
        raise SurfaceError(f"Unknown area rule '{rule}'")

    def get_surface_info(self) -> Dict:
        return {
            'model': self.model.value,
            'level': self.level,
            'charts': list(self.chart_ids()),
        }

    def __repr__(self):
        return f"{type(self).__name__}(level={self.level})"
