"""Real polarization checks: BS fiber counts and the double cover by critical points"""
import logging
from dataclasses import replace
from typing import List, Tuple

import numpy as np

from checks.base import Check, CheckOutcome, ReportRecord
from cycles import deform_step, random_tangent_pair
from moduli_dynamics import find_critical_point
from polarizations_real import (
    build_real_hilbert,
    enumerate_bs_fibers,
    invariant_half_weight,
    lie_kernel_dimension,
    make_fibration,
)
from surfaces import SurfaceModel, make_surface
from utils import WorkbenchError

logger = logging.getLogger(__name__)


def _levels(check: Check, torus_default, sphere_default) -> List[Tuple[SurfaceModel, int]]:
    torus = check.option('torus_levels', torus_default)
    sphere = check.option('sphere_levels', sphere_default)
    return [(SurfaceModel.FLAT_TORUS, int(k)) for k in torus] + [(SurfaceModel.ROUND_SPHERE, int(k)) for k in sphere]


def expected_fiber_count(model: SurfaceModel, k: int) -> int:
    """k fibers on the torus; k - 1 regular ones on the sphere, the poles being degenerate"""
    return k if model is SurfaceModel.FLAT_TORUS else k - 1


class BSFibersCheck(Check):
    check_id = 'bs-fibers'
    description = 'Number and integrality of Bohr-Sommerfeld fibers of f = y (torus) and f = z (sphere)'

    def run(self) -> CheckOutcome:
        n_nodes = int(self.option('n_nodes', 64))
        resolution = int(self.option('scan_resolution', 64))
        tol = self.tol('bs-fibers', 1e-10)
        records, tables, plot = [], [], []
        for model, k in _levels(self, range(1, 9), range(2, 9)):
            params = {'surface': model.value, 'k': k}
            try:
                enumeration = enumerate_bs_fibers(make_surface(model, k), scan_resolution=resolution, n_nodes=n_nodes)
            except WorkbenchError as e:
                logger.error(f"bs-fibers {model.value} k={k}: {e.message}")
                records.append(ReportRecord(self.check_id, {**params, 'property': 'count'},
                                            float('nan'), expected_fiber_count(model, k),
                                            float('nan'), float('nan'), False, diagnostics=e.message))
                continue
            tables.append(enumeration)
            expected = expected_fiber_count(model, k)
            count = len(enumeration)
            records.append(ReportRecord(
                self.check_id, {**params, 'property': 'count'}, count, expected,
                abs(count - expected), abs(count - expected) / expected if expected else abs(count),
                count == expected,
                diagnostics=f"{len(enumeration.degenerate)} degenerate fibers",
            ))
            defects = [abs(r.action - round(r.action)) for r in enumeration.fibers]
            worst = max(defects) if defects else 0.0
            records.append(ReportRecord(
                self.check_id, {**params, 'property': 'integrality'}, worst, 0.0, worst, worst,
                worst <= tol and all(r.is_bs for r in enumeration.fibers),
            ))
            plot.extend((k, r.value) for r in enumeration.fibers)
        return CheckOutcome(records, fiber_tables=tables, plots={'bs-fibers': plot})


class Prop3Check(Check):
    check_id = 'prop3'
    description = 'Each BS fiber carries exactly the pair of critical half-weights, and descent finds them'

    def _seed(self, hw, seed: int):
        pair = random_tangent_pair(hw, seed, int(self.option('mode_cutoff', 2)))
        return deform_step(hw, pair.scaled(float(self.option('perturbation', 0.01))), 1.0)

    def run(self) -> CheckOutcome:
        n_nodes = int(self.option('n_nodes', 64))
        n_seeds = int(self.option('seeds_per_fiber', 10))
        critical_tol = self.tol('prop3', 1e-8)
        match_tol = self.tol('prop3-match', 1e-5)
        weight_tol = self.tol('prop3-weight', 1e-4)
        cfg = replace(self.scenario.moduli_config(), max_iterations=int(self.option('max_iterations', 200)))
        records = []
        for model, k in _levels(self, range(1, 5), range(2, 6)):
            surface = make_surface(model, k)
            fibration = make_fibration(surface)
            params = {'surface': model.value, 'k': k}
            try:
                summary = build_real_hilbert(surface, fibration, n_nodes=n_nodes)
            except WorkbenchError as e:
                records.append(ReportRecord(self.check_id, {**params, 'property': 'critical'},
                                            float('nan'), 0.0, float('nan'), float('nan'), False,
                                            diagnostics=e.message))
                continue
            for (index, plus, minus), fiber in zip(summary.critical_points, summary.enumeration.fibers):
                fiber_params = {**params, 'fiber': index}
                dim = lie_kernel_dimension(fiber.cycle, fibration.function)
                records.append(ReportRecord(
                    self.check_id, {**fiber_params, 'property': 'kernel-dimension'},
                    dim, 1, abs(dim - 1), abs(dim - 1), dim == 1,
                ))
                residual = max(max(r) for r in summary.residuals[2 * index:2 * index + 2])
                records.append(ReportRecord(
                    self.check_id, {**fiber_params, 'property': 'critical'},
                    residual, 0.0, residual, residual, residual <= critical_tol,
                ))

                hits, notes = 0, []
                for s in range(n_seeds):
                    start = plus if s % 2 == 0 else minus
                    seed = self.seed + 1009 * index + 97 * k + s
                    try:
                        result = find_critical_point(fibration.function, self._seed(start, seed), cfg)
                        invariant, _ = invariant_half_weight(surface, fibration, result.hw.cycle)
                    except WorkbenchError as e:
                        notes.append(f"seed {s}: {e.message}")
                        continue
                    level = result.hw.mean(fibration.function.evaluate(result.hw.cycle.points))
                    # converged densities against the flow-time density on the converged cycle
                    weight_gap = float(np.abs(result.hw.mu / invariant.mu - 1.0).max())
                    if (result.converged and result.hw.sigma == start.sigma
                            and abs(level - fiber.value) <= match_tol and weight_gap <= weight_tol):
                        hits += 1
                    else:
                        notes.append(f"seed {s}: {result.message}, level {level:.6f} vs {fiber.value:.6f}, "
                                     f"weight gap {weight_gap:.2e}")
                records.append(ReportRecord(
                    self.check_id, {**fiber_params, 'property': 'descent', 'seeds': n_seeds},
                    hits, n_seeds, n_seeds - hits, (n_seeds - hits) / n_seeds, hits == n_seeds,
                    diagnostics='; '.join(notes),
                ))
        return CheckOutcome(records)


__all__ = ['BSFibersCheck', 'Prop3Check', 'expected_fiber_count']
