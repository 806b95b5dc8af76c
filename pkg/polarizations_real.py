"""
Real polarization at desk scale: Bohr-Sommerfeld fibers of a circle
fibration, their invariant half-weights, and the double cover of the fiber
set by the critical points of F_f.
"""
import csv
import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from cycles import CurveSpec, DiscretizedCycle, HalfWeightedCycle, make_half_weighted, sample_cycle
from moduli_dynamics import criticality_residual
from prequantum import holonomy
from surfaces import PolyField, ScalarField, SurfaceModel, SymplecticSurface, TorusCoordinate
from utils import (
    DegenerateFiberError,
    NotCriticalError,
    ScanResolutionError,
    WorkbenchError,
    fourier_diff_matrix,
)

logger = logging.getLogger(__name__)

ACTION_TOL = 1e-10
CRITICAL_TOL = 1e-8


@dataclass(frozen=True)
class Fibration:
    """A circle fibration by the level sets of `function`"""
    surface: SymplecticSurface
    function: ScalarField
    lower: float
    upper: float
    periodic: bool

    def fiber(self, value: float, n: int) -> DiscretizedCycle:
        if self.surface.model is SurfaceModel.FLAT_TORUS:
            return sample_cycle(self.surface, CurveSpec('horizontal_line', {'c': value}), n)
        return sample_cycle(self.surface, CurveSpec('latitude', {'h': value}), n)

    def action(self, value: float, n: int) -> float:
        # the latitude primitive regular at the north pole keeps the sphere scan monotone
        return holonomy(self.surface, self.fiber(value, n), primitive='north').action


def make_fibration(surface: SymplecticSurface) -> Fibration:
    """Built-in fibrations: f = y on the torus, f = z on the sphere"""
    if surface.model is SurfaceModel.FLAT_TORUS:
        return Fibration(surface, TorusCoordinate(1), 0.0, 1.0, periodic=True)
    return Fibration(surface, PolyField.coordinate(2), -1.0, 1.0, periodic=False)


@dataclass
class FiberRecord:
    index: int
    value: float
    action: float
    cycle: DiscretizedCycle
    is_bs: bool
    weights: Optional[Tuple[HalfWeightedCycle, HalfWeightedCycle]] = None

    @property
    def level_action(self) -> int:
        return int(np.round(self.action))


@dataclass
class FiberEnumeration:
    fibers: List[FiberRecord]
    degenerate: List[dict] = field(default_factory=list)
    min_scan_defect: float = float('nan')

    def __len__(self):
        return len(self.fibers)


def _bisect(fibration: Fibration, lo: float, hi: float, a_lo: float, target: float, n: int) -> float:
    """Bisection on the fiber value until the action is within ACTION_TOL of target"""
    sign_lo = np.sign(a_lo - target)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        a_mid = fibration.action(mid, n)
        if abs(a_mid - target) <= ACTION_TOL:
            return mid
        if np.sign(a_mid - target) == sign_lo:
            lo = mid
        else:
            hi = mid
    raise ScanResolutionError(f"Bisection for action {target} did not reach {ACTION_TOL}")


def enumerate_bs_fibers(surface: SymplecticSurface, fibration: Optional[Fibration] = None,
                        level_k: Optional[int] = None, scan_resolution: int = 64,
                        n_nodes: int = 64) -> FiberEnumeration:
    """
    Monotone action scan over the fiber values followed by bisection onto
    each integer. Degenerate fibers (the sphere poles) are reported apart.
    """
    if level_k is not None and level_k != surface.level:
        raise WorkbenchError(f"level_k={level_k} does not match the surface level {surface.level}")
    fibration = fibration or make_fibration(surface)
    grid = np.linspace(fibration.lower, fibration.upper, scan_resolution + 1)
    degenerate = []
    if fibration.periodic:
        actions = np.array([fibration.action(v, n_nodes) for v in grid[:-1]])
        # the last fiber coincides with the first one shifted by the full class
        actions = np.append(actions, actions[0] - surface.level)
    else:
        interior = np.array([fibration.action(v, n_nodes) for v in grid[1:-1]])
        ends = (float(surface.level), 0.0)  # pole limits of the north-regular primitive
        actions = np.concatenate([[ends[0]], interior, [ends[1]]])
        degenerate = [
            {'value': fibration.lower, 'action': ends[0], 'reason': 'south pole'},
            {'value': fibration.upper, 'action': ends[1], 'reason': 'north pole'},
        ]

    steps = np.diff(actions)
    if not (np.all(steps > 0) or np.all(steps < 0)):
        raise ScanResolutionError("Action is not monotone along the fiber scan")

    roots: List[Tuple[float, int]] = []
    for i in range(scan_resolution):
        a0, a1 = actions[i], actions[i + 1]
        lo, hi = sorted((a0, a1))
        # half-open in the scan direction so shared endpoints are counted once
        candidates = [m for m in range(int(np.ceil(lo - ACTION_TOL)), int(np.floor(hi + ACTION_TOL)) + 1)
                      if abs(m - a1) > ACTION_TOL]
        if len(candidates) > 1:
            raise ScanResolutionError(
                f"Scan interval [{grid[i]:.4f}, {grid[i + 1]:.4f}] holds {len(candidates)} integer actions; "
                f"raise scan_resolution above {scan_resolution}"
            )
        for m in candidates:
            if not fibration.periodic and (i == 0 and abs(m - a0) <= ACTION_TOL):
                continue  # pole
            if abs(m - a0) <= ACTION_TOL:
                roots.append((float(grid[i]), m))
            else:
                roots.append((_bisect(fibration, grid[i], grid[i + 1], a0, m, n_nodes), m))

    fibers = []
    for index, (value, m) in enumerate(sorted(roots, key=lambda r: r[1])):
        cycle = fibration.fiber(value, n_nodes)
        action = holonomy(surface, cycle, primitive='north').action
        fibers.append(FiberRecord(index, value, action, cycle, abs(action - m) <= ACTION_TOL))
        logger.debug(f"BS fiber {index}: value={value:.12f} action={action:.12f}")

    defects = np.abs(actions - np.round(actions))
    margin = defects[defects > ACTION_TOL]
    logger.info(f"Found {len(fibers)} BS fibers on {surface!r}")
    return FiberEnumeration(fibers, degenerate, float(margin.min()) if margin.size else float('nan'))


def invariant_half_weight(surface: SymplecticSurface, fibration: Fibration,
                          fiber: DiscretizedCycle) -> Tuple[HalfWeightedCycle, HalfWeightedCycle]:
    """Flow-time density mu proportional to 1/|a|, with both signs"""
    a = fiber.tangential_component(fibration.function)
    if np.abs(a).min() <= 1e-10 * max(1.0, np.abs(a).max()):
        raise DegenerateFiberError("Fiber contains a zero of the Hamiltonian field")
    plus = make_half_weighted(fiber, 1.0 / np.abs(a), sign=1)
    return plus, plus.flipped()


def lie_kernel_dimension(cycle: DiscretizedCycle, f: ScalarField, tol: float = 1e-10) -> int:
    """
    Dimension of the invariant densities: writing mu = phi / |a|, the density
    is W_f-invariant iff a * dphi/ds = 0. The operator is taken on the
    band-limited node functions below the Nyquist frequency.
    """
    n = cycle.n
    a = cycle.tangential_component(f)
    s = cycle.params
    modes = np.arange(1, n // 2)
    basis = np.hstack([
        np.ones((n, 1)),
        np.cos(2 * np.pi * np.outer(s, modes)),
        np.sin(2 * np.pi * np.outer(s, modes)),
    ])
    operator = a[:, None] * (fourier_diff_matrix(n) @ basis)
    return int(null_space(operator, rcond=tol).shape[1])


@dataclass
class RealHilbertSummary:
    enumeration: FiberEnumeration
    critical_points: List[Tuple[int, HalfWeightedCycle, HalfWeightedCycle]]
    residuals: List[Tuple[float, float]]

    @property
    def dimension(self) -> int:
        return len(self.enumeration.fibers)

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [(2 * i, 2 * i + 1) for i in range(self.dimension)]


def build_real_hilbert(surface: SymplecticSurface, fibration: Optional[Fibration] = None,
                       k: Optional[int] = None, n_nodes: int = 64,
                       scan_resolution: int = 64) -> RealHilbertSummary:
    fibration = fibration or make_fibration(surface)
    enumeration = enumerate_bs_fibers(surface, fibration, k, scan_resolution, n_nodes)
    points, residuals = [], []
    for record in enumeration.fibers:
        plus, minus = invariant_half_weight(surface, fibration, record.cycle)
        record.weights = (plus, minus)
        for hw in (plus, minus):
            residual = criticality_residual(fibration.function, hw)
            if max(residual) > CRITICAL_TOL:
                raise NotCriticalError(
                    f"Fiber {record.index} weight is not critical: ({residual[0]:.3e}, {residual[1]:.3e})"
                )
            residuals.append(residual)
        points.append((record.index, plus, minus))
    return RealHilbertSummary(enumeration, points, residuals)


FIBER_COLUMNS = ['surface', 'k', 'l_index', 'value', 'action', 'level_action', 'is_bs', 'x0', 'y0', 'z0']


def write_fiber_table(path: str, enumerations):
    """CSV with one row per BS fiber; coordinates are those of node 0"""
    if isinstance(enumerations, FiberEnumeration):
        enumerations = [enumerations]
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle)
        writer.writerow(FIBER_COLUMNS)
        for enumeration in enumerations:
            for record in enumeration.fibers:
                surface = record.cycle.surface
                coords = [repr(float(c)) for c in record.cycle.points[0]]
                coords += [''] * (3 - len(coords))
                writer.writerow([
                    surface.model.value, surface.level, record.index, repr(record.value),
                    repr(record.action), record.level_action, int(record.is_bs), *coords,
                ])
