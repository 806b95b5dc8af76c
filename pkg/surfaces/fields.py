"""
Scalar field families on the model surfaces.

TrigField lives on the torus (exponential Fourier coefficients in the
fundamental square), PolyField on the unit sphere (polynomials in the
ambient coordinates). Both are closed under sums and products, so Poisson
brackets stay inside the family.
"""
import itertools
from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

import numpy as np


class ScalarField(ABC):
    """Base class for smooth real functions on a model surface"""

    family: str = ''

    @abstractmethod
    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an (n, d) array of model coordinates"""
        pass

    @abstractmethod
    def gradient(self, points: np.ndarray) -> np.ndarray:
        """Analytic gradient in model coordinates, shape (n, d)"""
        pass

    @abstractmethod
    def derivative(self, axis: int) -> 'ScalarField':
        pass

    @property
    @abstractmethod
    def key(self) -> Tuple:
        """Hashable identity used for operator caches"""
        pass

    @abstractmethod
    def _combine(self, other: 'ScalarField', product: bool) -> 'ScalarField':
        pass

    @abstractmethod
    def scaled(self, factor: float) -> 'ScalarField':
        pass

    @abstractmethod
    def constant_value(self) -> Optional[float]:
        """The value if the field is constant, else None"""
        pass

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(points)

    def __add__(self, other):
        if np.isscalar(other):
            other = self.constant(float(other))
        return self._combine(other, product=False)

    __radd__ = __add__

    def __neg__(self):
        return self.scaled(-1.0)

    def __sub__(self, other):
        return self + (-other if not np.isscalar(other) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return self.scaled(float(other))
        return self._combine(other, product=True)

    __rmul__ = __mul__

    @classmethod
    @abstractmethod
    def constant(cls, value: float) -> 'ScalarField':
        pass

    def __eq__(self, other):
        return isinstance(other, ScalarField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def _prune(coeffs: Dict, tol: float = 1e-15) -> Dict:
    return {k: v for k, v in coeffs.items() if abs(v) > tol}


class TrigField(ScalarField):
    """
    Real trigonometric polynomial on the torus:
    f(x, y) = Re sum_{(m, n)} c_{mn} exp(2 pi i (m x + n y)),
    with c_{-m,-n} = conj(c_{mn}) so the plain sum is already real.
    """

    family = 'trig'

    def __init__(self, coeffs: Dict[Tuple[int, int], complex]):
        merged: Dict[Tuple[int, int], complex] = {}
        for (m, n), c in coeffs.items():
            merged[(int(m), int(n))] = merged.get((int(m), int(n)), 0) + complex(c)
        # enforce conjugate symmetry
        sym = {}
        for (m, n), c in merged.items():
            partner = np.conj(merged.get((-m, -n), np.conj(c)))
            sym[(m, n)] = 0.5 * (c + partner)
        self._coeffs = _prune(sym)
        self._modes = np.array(sorted(self._coeffs), dtype=float).reshape(-1, 2)
        self._values = np.array([self._coeffs[k] for k in sorted(self._coeffs)], dtype=complex)

    @classmethod
    def constant(cls, value: float) -> 'TrigField':
        return cls({(0, 0): value})

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, int], Tuple[float, float]]) -> 'TrigField':
        """Build from {(m, n): (a, b)} meaning a cos(2pi(mx+ny)) + b sin(2pi(mx+ny))"""
        coeffs: Dict[Tuple[int, int], complex] = {}
        for (m, n), (a, b) in terms.items():
            if m == 0 and n == 0:
                coeffs[(0, 0)] = coeffs.get((0, 0), 0) + a
                continue
            coeffs[(m, n)] = coeffs.get((m, n), 0) + (a - 1j * b) / 2.0
            coeffs[(-m, -n)] = coeffs.get((-m, -n), 0) + (a + 1j * b) / 2.0
        return cls(coeffs)

    @property
    def coefficients(self) -> Dict[Tuple[int, int], complex]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        if not self._coeffs:
            return 0
        return int(max(abs(m) + abs(n) for m, n in self._coeffs))

    @property
    def key(self) -> Tuple:
        return ('trig',) + tuple(
            (m, n, round(c.real, 15), round(c.imag, 15)) for (m, n), c in sorted(self._coeffs.items())
        )

    def constant_value(self) -> Optional[float]:
        if all(k == (0, 0) for k in self._coeffs):
            return float(np.real(self._coeffs.get((0, 0), 0.0)))
        return None

    def _phases(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.exp(2j * np.pi * points[:, :2] @ self._modes.T)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        if not self._coeffs:
            return np.zeros(np.atleast_2d(points).shape[0])
        return np.real(self._phases(points) @ self._values)

    def gradient(self, points: np.ndarray) -> np.ndarray:
        if not self._coeffs:
            return np.zeros((np.atleast_2d(points).shape[0], 2))
        phases = self._phases(points)
        gx = np.real(phases @ (2j * np.pi * self._modes[:, 0] * self._values))
        gy = np.real(phases @ (2j * np.pi * self._modes[:, 1] * self._values))
        return np.stack([gx, gy], axis=1)

    def derivative(self, axis: int) -> 'TrigField':
        return TrigField({k: 2j * np.pi * k[axis] * c for k, c in self._coeffs.items()})

    def scaled(self, factor: float) -> 'TrigField':
        return TrigField({k: factor * c for k, c in self._coeffs.items()})

    def _combine(self, other: ScalarField, product: bool) -> 'TrigField':
        if not isinstance(other, TrigField):
            raise TypeError(f"cannot combine {other!r} with a trig polynomial")
        if not product:
            out = dict(self._coeffs)
            for k, c in other._coeffs.items():
                out[k] = out.get(k, 0) + c
            return TrigField(out)
        out: Dict[Tuple[int, int], complex] = {}
        for (k1, c1), (k2, c2) in itertools.product(self._coeffs.items(), other._coeffs.items()):
            k = (k1[0] + k2[0], k1[1] + k2[1])
            out[k] = out.get(k, 0) + c1 * c2
        return TrigField(out)

    def __repr__(self):
        return f"TrigField(degree={self.degree}, terms={len(self._coeffs)})"


class PolyField(ScalarField):
    """Polynomial in the ambient coordinates (x, y, z) restricted to the unit sphere"""

    family = 'poly'

    def __init__(self, coeffs: Dict[Tuple[int, int, int], float]):
        merged: Dict[Tuple[int, int, int], float] = {}
        for powers, c in coeffs.items():
            powers = tuple(int(p) for p in powers)
            merged[powers] = merged.get(powers, 0.0) + float(c)
        self._coeffs = _prune(merged)
        keys = sorted(self._coeffs)
        self._powers = np.array(keys, dtype=int).reshape(-1, 3)
        self._values = np.array([self._coeffs[k] for k in keys], dtype=float)

    @classmethod
    def constant(cls, value: float) -> 'PolyField':
        return cls({(0, 0, 0): value})

    @classmethod
    def coordinate(cls, axis: int, scale: float = 1.0) -> 'PolyField':
        powers = [0, 0, 0]
        powers[axis] = 1
        return cls({tuple(powers): scale})

    @classmethod
    def linear(cls, a: float, b: float, c: float, d: float = 0.0) -> 'PolyField':
        """a x + b y + c z + d"""
        return cls({(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c, (0, 0, 0): d})

    @property
    def coefficients(self) -> Dict[Tuple[int, int, int], float]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        if not self._coeffs:
            return 0
        return int(max(sum(p) for p in self._coeffs))

    @property
    def key(self) -> Tuple:
        return ('poly',) + tuple((p, round(c, 15)) for p, c in sorted(self._coeffs.items()))

    def constant_value(self) -> Optional[float]:
        if all(p == (0, 0, 0) for p in self._coeffs):
            return float(self._coeffs.get((0, 0, 0), 0.0))
        return None

    def linear_part(self) -> Optional[np.ndarray]:
        """Coefficient vector (a, b, c) if the field is affine, else None"""
        if self.degree > 1:
            return None
        return np.array([
            self._coeffs.get((1, 0, 0), 0.0),
            self._coeffs.get((0, 1, 0), 0.0),
            self._coeffs.get((0, 0, 1), 0.0),
        ])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not self._coeffs:
            return np.zeros(points.shape[0])
        monomials = np.prod(points[:, None, :3] ** self._powers[None, :, :], axis=2)
        return monomials @ self._values

    def derivative(self, axis: int) -> 'PolyField':
        out = {}
        for powers, c in self._coeffs.items():
            if powers[axis] == 0:
                continue
            lowered = list(powers)
            lowered[axis] -= 1
            out[tuple(lowered)] = out.get(tuple(lowered), 0.0) + c * powers[axis]
        return PolyField(out)

    def gradient(self, points: np.ndarray) -> np.ndarray:
        return np.stack([self.derivative(a).evaluate(points) for a in range(3)], axis=1)

    def scaled(self, factor: float) -> 'PolyField':
        return PolyField({p: factor * c for p, c in self._coeffs.items()})

    def _combine(self, other: ScalarField, product: bool) -> 'PolyField':
        if not isinstance(other, PolyField):
            raise TypeError(f"cannot combine {other!r} with a sphere polynomial")
        if not product:
            out = dict(self._coeffs)
            for p, c in other._coeffs.items():
                out[p] = out.get(p, 0.0) + c
            return PolyField(out)
        out: Dict[Tuple[int, int, int], float] = {}
        for (p1, c1), (p2, c2) in itertools.product(self._coeffs.items(), other._coeffs.items()):
            p = (p1[0] + p2[0], p1[1] + p2[1], p1[2] + p2[2])
            out[p] = out.get(p, 0.0) + c1 * c2
        return PolyField(out)

    def __repr__(self):
        return f"PolyField(degree={self.degree}, terms={len(self._coeffs)})"


def random_trig_field(seed: int, degree: int = 2, amplitude: float = 1.0) -> TrigField:
    """Random real trig polynomial with |m| + |n| <= degree, coefficients decaying with frequency"""
    rng = np.random.default_rng(seed)
    terms = {}
    for m in range(0, degree + 1):
        for n in range(-degree, degree + 1):
            if abs(m) + abs(n) > degree or (m == 0 and n <= 0):
                continue
            a, b = rng.normal(size=2) * amplitude / (1.0 + m * m + n * n)
            terms[(m, n)] = (a, b)
    return TrigField.from_terms(terms)


def random_poly_field(seed: int, degree: int = 2, amplitude: float = 1.0) -> PolyField:
    rng = np.random.default_rng(seed)
    coeffs = {}
    for powers in itertools.product(range(degree + 1), repeat=3):
        if 0 < sum(powers) <= degree:
            coeffs[powers] = rng.normal() * amplitude
    return PolyField(coeffs)


def section_norm_field(level: int) -> PolyField:
    """
    f_Y = |s|^2 = ((1 - z) / 2)^k for the holomorphic section with divisor
    k * (north pole), in the hermitian metric used by the complex polarization.
    """
    base = PolyField({(0, 0, 0): 0.5, (0, 0, 1): -0.5})
    out = PolyField.constant(1.0)
    for _ in range(level):
        out = out * base
    return out


class TorusCoordinate(ScalarField):
    """
    The lifted coordinate scale * x_axis + offset on the torus. It is
    multivalued, but its differential is periodic, so it still generates a
    Hamiltonian flow (the translations) and fibers the torus by circles.
    """

    family = 'trig'

    def __init__(self, axis: int, scale: float = 1.0, offset: float = 0.0):
        if axis not in (0, 1):
            raise ValueError(f"axis must be 0 or 1, got {axis}")
        self.axis = axis
        self.scale = float(scale)
        self.offset = float(offset)

    @classmethod
    def constant(cls, value: float) -> TrigField:
        return TrigField.constant(value)

    @property
    def key(self) -> Tuple:
        return ('coord', self.axis, round(self.scale, 15), round(self.offset, 15))

    @property
    def degree(self) -> int:
        return 1

    def constant_value(self) -> Optional[float]:
        return self.offset if self.scale == 0.0 else None

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return self.scale * points[:, self.axis] + self.offset

    def gradient(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        grad = np.zeros((points.shape[0], 2))
        grad[:, self.axis] = self.scale
        return grad

    def derivative(self, axis: int) -> TrigField:
        return TrigField.constant(self.scale if axis == self.axis else 0.0)

    def scaled(self, factor: float) -> 'TorusCoordinate':
        return TorusCoordinate(self.axis, factor * self.scale, factor * self.offset)

    def _combine(self, other: ScalarField, product: bool) -> 'TorusCoordinate':
        value = other.constant_value() if isinstance(other, TrigField) else None
        if value is None:
            raise TypeError("a lifted coordinate only combines with constants")
        if product:
            return self.scaled(value)
        return TorusCoordinate(self.axis, self.scale, self.offset + value)

    def __repr__(self):
        return f"TorusCoordinate(axis={self.axis}, scale={self.scale}, offset={self.offset})"
