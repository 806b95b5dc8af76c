"""
Special functions on the moduli space of half-weighted Bohr-Sommerfeld cycles.

F_f(S, theta) = tau * sum f(p_j) mu_j / N, the moduli symplectic form on
tangent pairs, the dynamical correspondence and the criticality search.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from cycles import (
    CurveSpec,
    HalfWeightedCycle,
    TangentPair,
    deform_step,
    make_half_weighted,
    sample_cycle,
    transport,
    transport_pair,
)
from surfaces import ScalarField, SurfaceModel, SymplecticSurface, section_norm_field
from utils import (
    ConvergenceError,
    CycleError,
    NotCriticalError,
    WorkbenchError,
    spectral_antiderivative,
    spectral_derivative,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModuliConfig:
    tau: Optional[float] = None  # None means 1 / (2k)
    identity_tol: float = 1e-7
    critical_tol: float = 1e-6
    tangent_tol: float = 1e-6
    max_iterations: int = 10_000
    min_step: float = 1e-12

    def __post_init__(self):
        if self.tau is not None and self.tau <= 0:
            raise WorkbenchError(f"tau must be positive, got {self.tau}")

    def tau_for(self, hw: HalfWeightedCycle) -> float:
        return self.tau if self.tau is not None else 1.0 / (2.0 * hw.surface.level)


DEFAULT_CONFIG = ModuliConfig()


def special_value(f: ScalarField, hw: HalfWeightedCycle, cfg: ModuliConfig = DEFAULT_CONFIG) -> float:
    return cfg.tau_for(hw) * hw.mean(f.evaluate(hw.cycle.points))


def omega_form(hw: HalfWeightedCycle, pair_a: TangentPair, pair_b: TangentPair) -> float:
    """Omega((alpha, beta), (gamma, delta)) = sum (alpha delta - beta gamma) mu / N"""
    pair_a.require_attached(hw)
    pair_b.require_attached(hw)
    return hw.mean(pair_a.psi1 * pair_b.psi2 - pair_a.psi2 * pair_b.psi1)


def differential_pairing(f: ScalarField, hw: HalfWeightedCycle, pair: TangentPair,
                         cfg: ModuliConfig = DEFAULT_CONFIG) -> float:
    pair.require_attached(hw)
    tau = cfg.tau_for(hw)
    values = f.evaluate(hw.cycle.points)
    a = hw.cycle.tangential_component(f)
    weight_part = hw.mean(2.0 * values * pair.psi2)
    geometry_part = hw.mean(spectral_derivative(pair.psi1) * a)
    return tau * (weight_part + geometry_part)


def _density_flux(f: ScalarField, hw: HalfWeightedCycle) -> np.ndarray:
    """d/ds (a mu) / mu, the discrete Lie derivative of theta^2 along W_f over theta^2"""
    a = hw.cycle.tangential_component(f)
    return spectral_derivative(a * hw.mu) / hw.mu


def theta_bs_components(f: ScalarField, hw: HalfWeightedCycle) -> TangentPair:
    values = f.evaluate(hw.cycle.points)
    return TangentPair.projected(hw, values - hw.mean(values), 0.5 * _density_flux(f, hw))


def moduli_ham_field(f: ScalarField, hw: HalfWeightedCycle, cfg: ModuliConfig = DEFAULT_CONFIG) -> TangentPair:
    """
    Solve Omega(X, Q) = dF_f(Q) by hand: the weight term of dF_f pairs with
    psi1' = 2 tau f directly, and the geometry term is moved onto alpha by
    parts, giving psi2' = tau d/ds(a mu) / mu.
    """
    tau = cfg.tau_for(hw)
    values = f.evaluate(hw.cycle.points)
    return TangentPair.projected(hw, 2.0 * tau * (values - hw.mean(values)), tau * _density_flux(f, hw))


def solve_moduli_ham_field(f: ScalarField, hw: HalfWeightedCycle, cfg: ModuliConfig = DEFAULT_CONFIG) -> TangentPair:
    """
    Solve Omega(X, Q) = dF_f(Q) numerically over the nodal basis of tangent
    pairs, (e_j - mu_j / N, 0) and (0, e_j - mu_j / N). The Gram matrix has
    the two all-ones coefficient vectors as kernel; lstsq picks one solution
    and every solution gives the same pair.
    """
    n = hw.n
    nodal = np.eye(n) - (hw.mu / n)[:, None]
    zeros = np.zeros_like(nodal)
    psi1 = np.concatenate([nodal, zeros])
    psi2 = np.concatenate([zeros, nodal])
    basis = [TangentPair(hw, a, b) for a, b in zip(psi1, psi2)]
    rhs = np.array([differential_pairing(f, hw, pair, cfg) for pair in basis])
    weights = hw.mu / n
    # gram[i, j] = omega_form(hw, basis[i], basis[j])
    gram = (psi1 * weights) @ psi2.T - (psi2 * weights) @ psi1.T
    coeffs, *_ = linalg.lstsq(gram.T, rhs)
    return TangentPair.projected(hw, coeffs @ psi1, coeffs @ psi2)


def moduli_bracket(f: ScalarField, g: ScalarField, hw: HalfWeightedCycle,
                   cfg: ModuliConfig = DEFAULT_CONFIG) -> float:
    return omega_form(hw, moduli_ham_field(f, hw, cfg), moduli_ham_field(g, hw, cfg))


def criticality_residual(f: ScalarField, hw: HalfWeightedCycle) -> Tuple[float, float]:
    """(mu-stddev of f on the cycle, sup |Lie_W theta / theta|)"""
    values = f.evaluate(hw.cycle.points)
    spread = np.sqrt(hw.mean((values - hw.mean(values)) ** 2))
    return float(spread), float(np.abs(0.5 * _density_flux(f, hw)).max())


def critical_tangent_test(f: ScalarField, hw: HalfWeightedCycle, pair: TangentPair,
                          cfg: ModuliConfig = DEFAULT_CONFIG) -> bool:
    pair.require_attached(hw)
    residual = criticality_residual(f, hw)
    if max(residual) > cfg.critical_tol:
        raise NotCriticalError(
            f"Half-weighted cycle is not critical: residuals ({residual[0]:.3e}, {residual[1]:.3e})"
        )
    a = hw.cycle.tangential_component(f)
    lie = [np.abs(a * spectral_derivative(psi)).max() for psi in (pair.psi1, pair.psi2)]
    return max(lie) <= cfg.tangent_tol


# ---- criticality search -------------------------------------------------

@dataclass
class CriticalSearchResult:
    hw: HalfWeightedCycle
    converged: bool
    iterations: int
    trace: List[Tuple[float, float]] = field(default_factory=list)
    message: str = ''

    @property
    def residual(self) -> Tuple[float, float]:
        return self.trace[-1] if self.trace else (float('nan'), float('nan'))


def _search_direction(f: ScalarField, hw: HalfWeightedCycle) -> TangentPair:
    """Gauss-Newton pair: level the values of f, and pull mu toward the invariant density 1/|a|"""
    values = f.evaluate(hw.cycle.points)
    a = hw.cycle.tangential_component(f)
    floor = 1e-3 * max(np.abs(a).max(), 1e-300)
    safe = np.where(np.abs(a) < floor, np.where(a < 0, -floor, floor), a)
    drift = -(values - hw.mean(values)) / safe
    alpha = spectral_antiderivative(drift - drift.mean())
    target = 1.0 / np.abs(safe)
    target /= target.mean()
    beta = 0.5 * np.log(target / hw.mu)
    return TangentPair.projected(hw, alpha, beta)


def _merit(residual: Tuple[float, float]) -> float:
    return residual[0] ** 2 + residual[1] ** 2


def find_critical_point(f: ScalarField, hw0: HalfWeightedCycle, cfg: ModuliConfig = DEFAULT_CONFIG,
                        raise_on_failure: bool = False) -> CriticalSearchResult:
    """Damped Gauss-Newton descent on the squared criticality residual, via deform_step"""
    hw = hw0
    residual = criticality_residual(f, hw)
    trace = [residual]
    eps = 1.0
    iterations = 0
    converged = max(residual) <= cfg.critical_tol
    message = 'already critical' if converged else ''

    while not converged and iterations < cfg.max_iterations:
        try:
            direction = _search_direction(f, hw)
        except CycleError as e:
            message = f"search direction failed: {e.message}"
            break
        accepted = False
        while eps >= cfg.min_step:
            try:
                candidate = deform_step(hw, direction, eps)
            except CycleError as e:
                logger.debug(f"step eps={eps:.3e} rejected: {e.message}")
                eps *= 0.5
                continue
            cand_residual = criticality_residual(f, candidate)
            if _merit(cand_residual) < _merit(residual):
                hw, residual = candidate, cand_residual
                accepted = True
                break
            eps *= 0.5
        iterations += 1
        trace.append(residual)
        if not accepted:
            message = f"step size fell below {cfg.min_step:.0e}"
            logger.warning(f"Critical point search stalled after {iterations} iterations")
            break
        logger.debug(f"iteration {iterations}: eps={eps:.3e} residual=({residual[0]:.3e}, {residual[1]:.3e})")
        eps = min(1.0, 2.0 * eps)
        converged = max(residual) <= cfg.critical_tol

    if converged and not message:
        message = f"converged in {iterations} iterations"
    elif not converged and not message:
        message = f"iteration limit {cfg.max_iterations} reached"
    result = CriticalSearchResult(hw, converged, iterations, trace, message)
    if not converged and raise_on_failure:
        raise ConvergenceError(f"find_critical_point did not converge: {message}")
    return result


# ---- boundary contraction -------------------------------------------------

@dataclass
class BoundaryScanResult:
    rows: List[Dict]
    monotone: bool
    min_relative_residual: float
    level_set_rows: List[float]
    search: Optional[CriticalSearchResult] = None

    @property
    def ok(self) -> bool:
        return self.monotone and self.min_relative_residual >= 1e-3


def _divisor_field(surface: SymplecticSurface, divisor_spec: Dict) -> ScalarField:
    pole = divisor_spec.get('point', 'north')
    multiplicity = int(divisor_spec.get('multiplicity', surface.level))
    if pole != 'north' or multiplicity != surface.level:
        raise WorkbenchError("Only the divisor k * (north pole) is supported")
    return section_norm_field(surface.level)


def boundary_contraction_scan(surface: SymplecticSurface, divisor_spec: Optional[Dict] = None,
                              family_spec: Optional[Dict] = None, cfg: ModuliConfig = DEFAULT_CONFIG,
                              search: bool = True) -> BoundaryScanResult:
    """
    Scan a one-parameter family of circles contracting onto the divisor and
    tabulate F_{f_Y} with the criticality residuals. The family defaults to
    offset circles whose centre sits at half their radius from the pole, so
    they are never level sets of f_Y. Each row also records the height of
    the equal-area latitude, which is a level set of f_Y and hence critical.
    """
    if surface.model is not SurfaceModel.ROUND_SPHERE:
        raise WorkbenchError("boundary_contraction_scan needs the sphere")
    f_y = _divisor_field(surface, divisor_spec or {})
    family_spec = dict(family_spec or {})
    kind = family_spec.get('kind', 'offset_circle')
    n = int(family_spec.get('N', 64))
    radii = family_spec.get('radii')
    if radii is None:
        radii = np.linspace(float(family_spec.get('r_max', 1.2)), float(family_spec.get('r_min', 0.05)),
                            int(family_spec.get('count', 12)))
    radii = sorted((float(r) for r in radii), reverse=True)

    rows = []
    for r in radii:
        if kind == 'offset_circle':
            spec = CurveSpec('offset_circle', {'radius': r, 'gamma': float(family_spec.get('gamma', 0.5))})
        elif kind == 'latitude':
            spec = CurveSpec('latitude', {'h': float(np.cos(r))})
        else:
            raise WorkbenchError(f"Unknown contraction family '{kind}'")
        hw = make_half_weighted(sample_cycle(surface, spec, n), 1.0, require_bs=False)
        spread, flux = criticality_residual(f_y, hw)
        value = special_value(f_y, hw, cfg)
        mean_f = hw.mean(f_y.evaluate(hw.cycle.points))
        area = surface.enclosed_area(hw.cycle)
        rows.append({
            'parameter': r,
            'area': area,
            'F': value,
            'spread': spread,
            'relative_spread': spread / mean_f if mean_f > 0 else 0.0,
            'flux': flux,
            'latitude_height': 1.0 - 2.0 * area / surface.level,
        })

    values = [row['F'] for row in rows]
    monotone = all(b < a for a, b in zip(values, values[1:]))
    level_sets = [row['parameter'] for row in rows if row['relative_spread'] <= 1e-9]
    interior = [row['relative_spread'] for row in rows]
    result = BoundaryScanResult(rows, monotone, min(interior) if interior else 0.0, level_sets)
    if level_sets:
        logger.info(f"Contraction family contains level sets of f_Y at {level_sets}")

    if search and surface.level >= 2:
        # BS seed: on the sphere the area of a circle depends on its radius only
        radius = float(np.arccos(1.0 - 2.0 / surface.level))
        seed_spec = CurveSpec(kind if kind == 'offset_circle' else 'offset_circle',
                              {'radius': radius, 'gamma': float(family_spec.get('gamma', 0.5))})
        seed = make_half_weighted(sample_cycle(surface, seed_spec, n), 1.0)
        result.search = find_critical_point(f_y, seed, cfg)
        logger.info(f"f_Y critical search from offset circle: {result.search.message}")
    return result


# ---- theorem proxies ------------------------------------------------------

@dataclass(frozen=True)
class InclusionGap:
    max_gap: float
    gaps: Tuple[float, ...]
    mean_gap: float


def inclusion_gap(f: ScalarField, g: ScalarField, samples: Sequence[HalfWeightedCycle],
                  cfg: ModuliConfig = DEFAULT_CONFIG) -> InclusionGap:
    """
    F_f - F_g is tau times a constant on every sample iff f - g is constant
    on the sampled cycles; the gap measures the departure from that.
    """
    if not samples:
        raise WorkbenchError("inclusion_gap needs at least one sample")
    diffs = np.array([(special_value(f, hw, cfg) - special_value(g, hw, cfg)) / cfg.tau_for(hw) for hw in samples])
    mean_gap = float(diffs.mean())
    gaps = tuple(float(cfg.tau_for(hw) * abs(d - mean_gap)) for hw, d in zip(samples, diffs))
    return InclusionGap(max(gaps), gaps, mean_gap)


@dataclass(frozen=True)
class FlowInvariance:
    omega_before: float
    omega_after: float
    special_before: float
    special_after: float

    @property
    def omega_drift(self) -> float:
        return abs(self.omega_after - self.omega_before)

    @property
    def special_drift(self) -> float:
        return abs(self.special_after - self.special_before)


def flow_invariance(f: ScalarField, hw: HalfWeightedCycle, pair_a: TangentPair, pair_b: TangentPair,
                    t: float, dt: float = 1e-3, cfg: ModuliConfig = DEFAULT_CONFIG) -> FlowInvariance:
    """Omega of two pairs and F_f itself, before and after pushing everything by the flow of X_f"""
    moved = transport(hw, f, t, dt)
    moved_a = transport_pair(pair_a, f, t, moved, dt)
    moved_b = transport_pair(pair_b, f, t, moved, dt)
    return FlowInvariance(
        omega_before=omega_form(hw, pair_a, pair_b),
        omega_after=omega_form(moved, moved_a, moved_b),
        special_before=special_value(f, hw, cfg),
        special_after=special_value(f, moved, cfg),
    )
