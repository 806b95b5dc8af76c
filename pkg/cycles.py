"""
Discretized cycles, half-weighted cycles and the tangent-pair model.

A cycle is N samples p_j = p(s_j), s_j = j/N, of a closed curve on a model
surface, stored in model coordinates (lifted on the torus, so the curve
closes up to its homology translation). A half-weighted cycle adds node
densities mu_j with mean 1 and a global sign; theta = sign * sqrt(mu).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from prequantum import DEFAULT_BS_TOL, holonomy
from surfaces import ScalarField, SurfaceModel, SymplecticSurface, make_surface
from utils import (
    AttachmentError,
    CycleError,
    NotBohrSommerfeldError,
    spectral_antiderivative,
    spectral_derivative,
    trig_interpolate,
)

logger = logging.getLogger(__name__)

MIN_NODES = 16
MU_MIN = 1e-12
NORMALIZATION_TOL = 1e-10
MEAN_TOL = 1e-10
INTERSECTION_TOL = 1e-9


# ---- self-intersection sweep -------------------------------------------

def _orient(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    return (q[:, 0] - p[:, 0]) * (r[:, 1] - p[:, 1]) - (q[:, 1] - p[:, 1]) * (r[:, 0] - p[:, 0])


def _opposite(o1: np.ndarray, o2: np.ndarray, tol: float) -> np.ndarray:
    return ((o1 > tol) & (o2 < -tol)) | ((o1 < -tol) & (o2 > tol))


def _proper_crossings(starts: np.ndarray, ends: np.ndarray, i: np.ndarray, j: np.ndarray,
                      shift: np.ndarray, tol: float) -> bool:
    a0, a1 = starts[i], ends[i]
    b0, b1 = starts[j] + shift, ends[j] + shift
    hit = _opposite(_orient(a0, a1, b0), _orient(a0, a1, b1), tol)
    hit &= _opposite(_orient(b0, b1, a0), _orient(b0, b1, a1), tol)
    return bool(np.any(hit))


def _planar_segments(surface: SymplecticSurface, points: np.ndarray, homology: Tuple[int, int]):
    if surface.model is SurfaceModel.FLAT_TORUS:
        closing = points[:1] + np.asarray(homology, dtype=float)
        return points, np.vstack([points[1:], closing])
    # stereographic projection from the pole farthest from the curve
    if points[:, 2].min() > -points[:, 2].max():
        planar = points[:, :2] / (1.0 + points[:, 2:3])
    else:
        planar = points[:, :2] / (1.0 - points[:, 2:3])
    return planar, np.vstack([planar[1:], planar[:1]])


def detect_self_intersection(surface: SymplecticSurface, points: np.ndarray,
                             homology: Tuple[int, int] = (0, 0), tol: float = INTERSECTION_TOL) -> bool:
    """Segment sweep over all non-adjacent pairs (and lattice translates on the torus)"""
    starts, ends = _planar_segments(surface, points, homology)
    n = starts.shape[0]
    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    if _proper_crossings(starts, ends, i, j, np.zeros(2), tol):
        return True
    if surface.model is SurfaceModel.FLAT_TORUS:
        ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
        ii, jj = ii.ravel(), jj.ravel()
        for m in (-1, 0, 1):
            for l in (-1, 0, 1):
                if (m, l) == (0, 0):
                    continue
                if _proper_crossings(starts, ends, ii, jj, np.array([m, l], dtype=float), tol):
                    return True
    return False


# ---- value types ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscretizedCycle:
    surface: SymplecticSurface
    points: np.ndarray
    homology: Tuple[int, int] = (0, 0)
    waive_intersections: bool = False
    name: str = ''
    sweep: bool = field(default=True, repr=False)
    self_intersecting: bool = field(init=False, default=False)

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.surface.dim:
            raise CycleError(f"Cycle points must have shape (N, {self.surface.dim}), got {points.shape}")
        n = points.shape[0]
        if n < MIN_NODES or n % 2 != 0:
            raise CycleError(f"Cycle needs an even number of nodes >= {MIN_NODES}, got {n}")
        if not np.all(np.isfinite(points)):
            raise CycleError("Cycle points must be finite")
        homology = (int(self.homology[0]), int(self.homology[1]))
        if self.surface.model is SurfaceModel.ROUND_SPHERE and homology != (0, 0):
            raise CycleError("Sphere cycles are null-homologous")
        closed = np.vstack([points, points[:1] + self._translation(homology)])
        gaps = np.linalg.norm(np.diff(closed, axis=0), axis=1)
        if np.ptp(points, axis=0).max() > 0 and gaps.min() <= 1e-14:
            raise CycleError("Consecutive cycle points must be distinct")
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'homology', homology)
        crossing = self.sweep and detect_self_intersection(self.surface, points, homology)
        object.__setattr__(self, 'self_intersecting', crossing)
        if crossing and not self.waive_intersections:
            raise CycleError(f"Cycle '{self.name or 'unnamed'}' is self-intersecting")

    def _translation(self, homology) -> np.ndarray:
        if self.surface.model is SurfaceModel.FLAT_TORUS:
            return np.asarray(homology, dtype=float)
        return np.zeros(self.surface.dim)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def params(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    def periodic_part(self) -> np.ndarray:
        """Samples with the homology drift removed, periodic in s"""
        return self.points - self.params[:, None] * self._translation(self.homology)

    def tangents(self) -> np.ndarray:
        """Spectral dp/ds"""
        return spectral_derivative(self.periodic_part()) + self._translation(self.homology)

    def frame(self) -> Tuple[np.ndarray, np.ndarray]:
        """(t_j, nu_j) with t = dp/ds and omega(nu, t) = 1"""
        t = self.tangents()
        return t, self.surface.transversal(self.points, t)

    def tangential_component(self, f: ScalarField) -> np.ndarray:
        """a_j in X_f = a t + b nu, i.e. df(nu_j)"""
        self.surface.check_field(f)
        _, nu = self.frame()
        return np.sum(f.gradient(self.points) * nu, axis=1)

    def with_points(self, points: np.ndarray, sweep: bool = True) -> 'DiscretizedCycle':
        return DiscretizedCycle(
            self.surface, points, self.homology,
            waive_intersections=self.waive_intersections, name=self.name, sweep=sweep,
        )

    def to_record(self) -> Dict:
        return {
            'surface': self.surface.model.value,
            'level': self.surface.level,
            'N': self.n,
            'points': self.points.tolist(),
            'homology': list(self.homology),
        }


@dataclass(frozen=True, eq=False)
class HalfWeightedCycle:
    cycle: DiscretizedCycle
    mu: np.ndarray
    sigma: int = 1
    bs_tol: float = DEFAULT_BS_TOL
    require_bs: bool = True

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        if mu.shape != (self.cycle.n,):
            raise CycleError(f"Expected {self.cycle.n} node densities, got shape {mu.shape}")
        if self.sigma not in (1, -1):
            raise CycleError(f"Sign must be +1 or -1, got {self.sigma}")
        if mu.min() < MU_MIN:
            raise CycleError(f"Degenerate node density {mu.min():.3e} < {MU_MIN}")
        if abs(mu.mean() - 1.0) > NORMALIZATION_TOL:
            raise CycleError(f"Densities not normalized: mean = {mu.mean():.12f}")
        mu.setflags(write=False)
        object.__setattr__(self, 'mu', mu)
        if self.require_bs:
            defect = holonomy(self.cycle.surface, self.cycle).bs_defect
            if defect > self.bs_tol:
                raise NotBohrSommerfeldError(
                    f"Cycle '{self.cycle.name or 'unnamed'}' has bs_defect {defect:.3e} > {self.bs_tol:.1e}"
                )

    @property
    def surface(self) -> SymplecticSurface:
        return self.cycle.surface

    @property
    def n(self) -> int:
        return self.cycle.n

    @property
    def theta(self) -> np.ndarray:
        return self.sigma * np.sqrt(self.mu)

    def mean(self, values: np.ndarray) -> float:
        """mu-weighted quadrature sum(values * mu) / N"""
        return float(np.sum(np.asarray(values) * self.mu) / self.n)

    def flipped(self) -> 'HalfWeightedCycle':
        return HalfWeightedCycle(self.cycle, self.mu, -self.sigma, self.bs_tol, self.require_bs)

    def same_as(self, other: 'HalfWeightedCycle') -> bool:
        if other is self:
            return True
        return (
            isinstance(other, HalfWeightedCycle)
            and self.sigma == other.sigma
            and self.cycle.homology == other.cycle.homology
            and np.array_equal(self.cycle.points, other.cycle.points)
            and np.array_equal(self.mu, other.mu)
        )

    def to_record(self) -> Dict:
        record = self.cycle.to_record()
        record['mu'] = self.mu.tolist()
        record['sigma'] = self.sigma
        return record


@dataclass(frozen=True, eq=False)
class TangentPair:
    hw: HalfWeightedCycle
    psi1: np.ndarray
    psi2: np.ndarray

    def __post_init__(self):
        psi1 = np.array(self.psi1, dtype=float)
        psi2 = np.array(self.psi2, dtype=float)
        for label, values in (('psi1', psi1), ('psi2', psi2)):
            if values.shape != (self.hw.n,):
                raise CycleError(f"{label} must have {self.hw.n} samples, got shape {values.shape}")
            scale = max(1.0, float(np.abs(values).max()))
            if abs(self.hw.mean(values)) > MEAN_TOL * scale:
                raise CycleError(f"{label} is not mu-zero-mean: {self.hw.mean(values):.3e}")
            values.setflags(write=False)
        object.__setattr__(self, 'psi1', psi1)
        object.__setattr__(self, 'psi2', psi2)

    @classmethod
    def projected(cls, hw: HalfWeightedCycle, psi1: np.ndarray, psi2: np.ndarray) -> 'TangentPair':
        """Attach after removing the mu-means"""
        psi1 = np.asarray(psi1, dtype=float)
        psi2 = np.asarray(psi2, dtype=float)
        return cls(hw, psi1 - hw.mean(psi1), psi2 - hw.mean(psi2))

    @classmethod
    def zero(cls, hw: HalfWeightedCycle) -> 'TangentPair':
        return cls(hw, np.zeros(hw.n), np.zeros(hw.n))

    def require_attached(self, hw: HalfWeightedCycle):
        if not self.hw.same_as(hw):
            raise AttachmentError("Tangent pair is attached to a different half-weighted cycle")

    def scaled(self, factor: float) -> 'TangentPair':
        return TangentPair(self.hw, factor * self.psi1, factor * self.psi2)

    def __add__(self, other: 'TangentPair') -> 'TangentPair':
        other.require_attached(self.hw)
        return TangentPair(self.hw, self.psi1 + other.psi1, self.psi2 + other.psi2)

    def __sub__(self, other: 'TangentPair') -> 'TangentPair':
        return self + other.scaled(-1.0)


# ---- curve families -------------------------------------------------------

@dataclass(frozen=True)
class CurveSpec:
    kind: str
    params: Dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Dict) -> 'CurveSpec':
        data = dict(data)
        kind = data.pop('kind', None)
        if kind is None:
            raise CycleError(f"Curve spec without 'kind': {data}")
        return cls(kind, data)


def _orthonormal_frame(axis: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(axis, e1)


def _sphere_circle(center, radius: float, s: np.ndarray) -> np.ndarray:
    c = np.asarray(center, dtype=float)
    c = c / np.linalg.norm(c)
    e1, e2 = _orthonormal_frame(c)
    angle = 2.0 * np.pi * s
    ring = np.cos(angle)[:, None] * e1 + np.sin(angle)[:, None] * e2
    return np.cos(radius) * c + np.sin(radius) * ring


def _latitude_height(surface: SymplecticSurface, params: Dict) -> float:
    if 'area' in params:
        return 1.0 - 2.0 * float(params['area']) / surface.level
    return float(params.get('h', 0.0))


def _harmonics(terms, s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s)
    for m, a, b in terms:
        out += a * np.cos(2 * np.pi * m * s) + b * np.sin(2 * np.pi * m * s)
    return out


def _torus_curve(spec: CurveSpec, s: np.ndarray, n: int):
    p = spec.params
    if spec.kind == 'horizontal_line':
        return np.stack([s, np.full(n, float(p.get('c', 0.0)))], axis=1), (1, 0)
    if spec.kind == 'vertical_line':
        return np.stack([np.full(n, float(p.get('c', 0.0))), s], axis=1), (0, 1)
    if spec.kind == 'graph':
        y = float(p.get('c', 0.0)) + _harmonics(p.get('terms', []), s)
        return np.stack([s, y], axis=1), (1, 0)
    if spec.kind == 'circle':
        cx, cy = p.get('center', (0.5, 0.5))
        r = float(p['radius'])
        angle = 2 * np.pi * s
        return np.stack([cx + r * np.cos(angle), cy + r * np.sin(angle)], axis=1), (0, 0)
    if spec.kind == 'square':
        x0, y0 = p.get('corner', (0.25, 0.25))
        side = float(p['side'])
        u = 4.0 * s
        leg = np.floor(u).astype(int)
        frac = u - leg
        corners = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
        pts = corners[leg] + frac[:, None] * (corners[leg + 1] - corners[leg])
        return np.array([x0, y0]) + side * pts, (0, 0)
    if spec.kind == 'figure_eight':
        cx, cy = p.get('center', (0.5, 0.5))
        size = float(p.get('size', 0.25))
        # half-node phase keeps the crossing off the samples
        angle = 2 * np.pi * (s + 0.5 / n)
        return np.stack([cx + size * np.sin(angle), cy + size * np.sin(angle) * np.cos(angle)], axis=1), (0, 0)
    raise CycleError(f"Unknown torus curve kind '{spec.kind}'")


def _sphere_curve(surface: SymplecticSurface, spec: CurveSpec, s: np.ndarray, n: int) -> np.ndarray:
    p = spec.params
    angle = 2 * np.pi * s
    if spec.kind == 'latitude':
        h = _latitude_height(surface, p)
        if not -1.0 < h < 1.0:
            raise CycleError(f"Latitude height {h} is not a regular level")
        rho = np.sqrt(1.0 - h * h)
        return np.stack([rho * np.cos(angle), rho * np.sin(angle), np.full(n, h)], axis=1)
    if spec.kind == 'wavy_latitude':
        h = _latitude_height(surface, p)
        z = h + float(p.get('amplitude', 0.05)) * np.sin(2 * np.pi * int(p.get('mode', 3)) * s)
        if np.abs(z).max() >= 1.0:
            raise CycleError("Wavy latitude reaches a pole")
        rho = np.sqrt(1.0 - z * z)
        return np.stack([rho * np.cos(angle), rho * np.sin(angle), z], axis=1)
    if spec.kind == 'circle':
        return _sphere_circle(p.get('center', (0.0, 0.0, 1.0)), float(p['radius']), s)
    if spec.kind == 'offset_circle':
        radius = float(p['radius'])
        tilt = float(p.get('gamma', 0.5)) * radius
        azimuth = float(p.get('azimuth', 0.0))
        center = (np.sin(tilt) * np.cos(azimuth), np.sin(tilt) * np.sin(azimuth), np.cos(tilt))
        return _sphere_circle(center, radius, s)
    raise CycleError(f"Unknown sphere curve kind '{spec.kind}'")


def sample_cycle(surface: SymplecticSurface, spec: CurveSpec, n: int,
                 waive_intersections: bool = False) -> DiscretizedCycle:
    if n < MIN_NODES or n % 2 != 0:
        raise CycleError(f"Cycle needs an even number of nodes >= {MIN_NODES}, got {n}")
    s = np.arange(n) / n
    if surface.model is SurfaceModel.FLAT_TORUS:
        points, homology = _torus_curve(spec, s, n)
    else:
        points, homology = _sphere_curve(surface, spec, s, n), (0, 0)
    return DiscretizedCycle(surface, points, homology, waive_intersections=waive_intersections, name=spec.kind)


# ---- half-weights and tangent pairs ----------------------------------------

def make_half_weighted(cycle: DiscretizedCycle, raw_weights, sign: int = 1,
                       bs_tol: float = DEFAULT_BS_TOL, require_bs: bool = True) -> HalfWeightedCycle:
    raw = np.broadcast_to(np.asarray(raw_weights, dtype=float), (cycle.n,))
    if np.any(raw <= 0):
        raise CycleError("Raw weights must be strictly positive")
    return HalfWeightedCycle(cycle, raw / raw.mean(), int(sign), bs_tol, require_bs)


def uniform_half_weighted(cycle: DiscretizedCycle, sign: int = 1, **kwargs) -> HalfWeightedCycle:
    return make_half_weighted(cycle, np.ones(cycle.n), sign, **kwargs)


def random_tangent_pair(hw: HalfWeightedCycle, seed: int, mode_cutoff: int = 4) -> TangentPair:
    if not 1 <= mode_cutoff < hw.n / 2:
        raise CycleError(f"mode_cutoff must lie in [1, N/2), got {mode_cutoff}")
    rng = np.random.default_rng(seed)
    s = hw.cycle.params
    modes = np.arange(1, mode_cutoff + 1)
    basis_cos = np.cos(2 * np.pi * np.outer(s, modes))
    basis_sin = np.sin(2 * np.pi * np.outer(s, modes))
    samples = []
    for _ in range(2):
        a, b = rng.normal(size=(2, mode_cutoff))
        samples.append(basis_cos @ a + basis_sin @ b)
    return TangentPair.projected(hw, samples[0], samples[1])


# ---- deformation -----------------------------------------------------------

def _wrap(value: float) -> float:
    return float(value - np.round(value))


def _shift_along_transversal(cycle: DiscretizedCycle, target: float, tol: float,
                             max_iter: int = 30) -> DiscretizedCycle:
    """Uniform shift delta * nu moving the action onto `target` (secant, slope 1 start)"""
    surface = cycle.surface
    _, nu = cycle.frame()

    def shifted(delta: float) -> DiscretizedCycle:
        return cycle.with_points(surface.project(cycle.points + delta * nu), sweep=False)

    def residual(candidate: DiscretizedCycle) -> float:
        return _wrap(holonomy(surface, candidate).action - target)

    d0, r0 = 0.0, residual(cycle)
    if abs(r0) <= 1e-15:
        return cycle.with_points(cycle.points)
    d1 = -r0
    current = shifted(d1)
    r1 = residual(current)
    for _ in range(max_iter):
        if abs(r1) <= min(tol, 1e-13):
            break
        slope = (r1 - r0) / (d1 - d0) if d1 != d0 else 1.0
        if slope == 0.0:
            slope = 1.0
        d0, r0 = d1, r1
        d1 = d1 - r1 / slope
        current = shifted(d1)
        r1 = residual(current)
    logger.debug(f"BS correction shift {d1:.3e}, residual {r1:.3e}")
    return current.with_points(current.points)


def deform_step(hw: HalfWeightedCycle, pair: TangentPair, eps: float) -> HalfWeightedCycle:
    """
    Move node j by eps * (d psi1/ds)_j * nu_j, rescale densities by
    (1 + 2 eps psi2), renormalize, then apply one uniform transversal shift
    so the action keeps its class modulo 1.
    """
    if eps == 0:
        return hw
    pair.require_attached(hw)
    cycle = hw.cycle
    surface = hw.surface

    if np.any(pair.psi1):
        _, nu = cycle.frame()
        moved = surface.project(cycle.points + eps * spectral_derivative(pair.psi1)[:, None] * nu)
        try:
            new_cycle = cycle.with_points(moved, sweep=False)
        except CycleError as e:
            raise CycleError(f"deform_step with eps={eps} broke the cycle: {e.message}")
    else:
        new_cycle = cycle

    mu = hw.mu * (1.0 + 2.0 * eps * pair.psi2)
    if mu.min() < MU_MIN:
        raise CycleError(f"deform_step with eps={eps} produced a degenerate density")
    mu = mu / mu.mean()

    if new_cycle is not cycle:
        before = holonomy(surface, cycle).action
        after = holonomy(surface, new_cycle).action
        target = after + _wrap(before - after)
        new_cycle = _shift_along_transversal(new_cycle, target, hw.bs_tol)

    try:
        return HalfWeightedCycle(new_cycle, mu, hw.sigma, hw.bs_tol, hw.require_bs)
    except CycleError as e:
        raise CycleError(f"deform_step with eps={eps} violated an invariant: {e.message}")


# ---- resampling, transport, records ----------------------------------------

def resample(cycle: DiscretizedCycle, n_new: int) -> DiscretizedCycle:
    periodic = trig_interpolate(cycle.periodic_part(), n_new)
    s = np.arange(n_new) / n_new
    points = cycle.surface.project(periodic + s[:, None] * cycle._translation(cycle.homology))
    return DiscretizedCycle(cycle.surface, points, cycle.homology,
                            waive_intersections=cycle.waive_intersections, name=cycle.name)


def resample_half_weighted(hw: HalfWeightedCycle, n_new: int) -> HalfWeightedCycle:
    mu = trig_interpolate(hw.mu, n_new)
    return HalfWeightedCycle(resample(hw.cycle, n_new), mu / mu.mean(), hw.sigma, hw.bs_tol, hw.require_bs)


def transport(hw: HalfWeightedCycle, f: ScalarField, t: float, dt: float = 1e-3) -> HalfWeightedCycle:
    """Flow the nodes by X_f for time t; densities ride with their nodes"""
    points = hw.surface.flow_points(f, hw.cycle.points, t, dt)
    cycle = hw.cycle.with_points(points)
    return HalfWeightedCycle(cycle, hw.mu, hw.sigma, hw.bs_tol, hw.require_bs)


def transport_pair(pair: TangentPair, f: ScalarField, t: float, hw_new: HalfWeightedCycle,
                   dt: float = 1e-3, eps: float = 1e-5) -> TangentPair:
    """
    Push the node displacement of psi1 through the time-t flow of X_f by a
    central difference and read psi1 back off hw_new from omega(delta, t) = psi1'.
    Densities ride with their nodes, so psi2 is kept.
    """
    hw = pair.hw
    surface = hw.surface
    _, nu = hw.cycle.frame()
    rate = spectral_derivative(pair.psi1)
    scale = max(1.0, float(np.abs(rate).max()))
    step = (eps / scale) * rate[:, None] * nu
    plus = surface.flow_points(f, surface.project(hw.cycle.points + step), t, dt)
    minus = surface.flow_points(f, surface.project(hw.cycle.points - step), t, dt)
    delta = (plus - minus) * scale / (2.0 * eps)
    tangents, _ = hw_new.cycle.frame()
    slope = surface.omega(hw_new.cycle.points, delta, tangents)
    return TangentPair.projected(hw_new, spectral_antiderivative(slope - slope.mean()), pair.psi2)


def from_record(record: Dict, require_bs: bool = True):
    """Rebuild a DiscretizedCycle, or a HalfWeightedCycle when the record carries weights"""
    try:
        surface = make_surface(record['surface'], int(record['level']))
        points = np.asarray(record['points'], dtype=float)
        homology = tuple(record.get('homology', (0, 0)))
    except (KeyError, TypeError, ValueError) as e:
        raise CycleError(f"Malformed cycle record: {e}")
    if points.shape[0] != int(record.get('N', points.shape[0])):
        raise CycleError("Cycle record N does not match its points")
    cycle = DiscretizedCycle(surface, points, homology)
    if 'mu' not in record:
        return cycle
    return HalfWeightedCycle(cycle, np.asarray(record['mu'], dtype=float), int(record.get('sigma', 1)),
                             require_bs=require_bs)


__all__ = [
    'CurveSpec', 'DiscretizedCycle', 'HalfWeightedCycle', 'TangentPair',
    'sample_cycle', 'make_half_weighted', 'uniform_half_weighted', 'random_tangent_pair',
    'deform_step', 'resample', 'resample_half_weighted', 'transport', 'transport_pair',
    'from_record', 'detect_self_intersection',
]
