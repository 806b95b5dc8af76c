"""Refinement studies run inside a scenario (one record per study and N)"""
import logging
from typing import Callable, List, Tuple

import numpy as np

from checks.base import Check, CheckOutcome, ReportRecord, relative_error
from checks.correspondence import bracket_errors
from checks.sampling import random_field_pairs, random_recipes
from convergence import observed_order, order_passes
from cycles import CurveSpec, sample_cycle
from surfaces import SurfaceModel
from utils import ConvergenceError

logger = logging.getLogger(__name__)


class ConvergenceCheck(Check):
    check_id = 'convergence'
    description = 'Observed order of the bracket identity and of the polyline area rule over the N list'

    def _eq4_study(self, surface, cfg) -> Callable[[int], Tuple[float, float]]:
        recipes = random_recipes(surface, self.seed, {**self.scenario.cycles, 'count': int(self.option('samples', 5))})
        pairs = random_field_pairs(surface, self.seed + 1000,
                                   {**self.scenario.fields, 'count': int(self.option('field_pairs', 3))})

        def measure(n: int) -> Tuple[float, float]:
            values = bracket_errors(surface, cfg, recipes, pairs, n)
            return max(values, key=lambda v: relative_error(abs(v[0] - v[1]), v[1]))
        return measure

    def _area_study(self, surface) -> Callable[[int], Tuple[float, float]]:
        k = surface.level
        if surface.model is SurfaceModel.FLAT_TORUS:
            radius = float(self.option('radius', 0.25))
            spec = CurveSpec('circle', {'center': (0.5, 0.5), 'radius': radius})
            exact = k * np.pi * radius ** 2
        else:
            height = float(self.option('height', 0.3))
            spec = CurveSpec('latitude', {'h': height})
            exact = k * (1.0 - height) / 2.0

        def measure(n: int) -> Tuple[float, float]:
            return surface.enclosed_area(sample_cycle(surface, spec, n), rule='polyline'), exact
        return measure

    def run(self) -> CheckOutcome:
        surface = self.scenario.surface()
        cfg = self.scenario.moduli_config()
        n_values = sorted(set(self.scenario.n_values))
        studies = {'eq4': self._eq4_study(surface, cfg), 'area': self._area_study(surface)}
        selected = self.option('studies', sorted(studies))
        records: List[ReportRecord] = []
        plots = {}
        for name in selected:
            measure = studies[name]
            rows = []
            for n in n_values:
                lhs, rhs = measure(n)
                err = abs(lhs - rhs)
                rows.append((n, lhs, rhs, err, relative_error(err, rhs)))
            try:
                order = observed_order([r[0] for r in rows], [r[4] for r in rows])
            except ConvergenceError as e:
                records.append(ReportRecord.failure(self.check_id, f"{name}: {e.message}"))
                continue
            passed = order_passes(order)
            if not passed:
                logger.error(f"convergence study {name}: order {order:.3f}")
            for n, lhs, rhs, err, rel in rows:
                records.append(ReportRecord(
                    self.check_id, {'surface': surface.model.value, 'k': surface.level, 'study': name, 'N': n},
                    lhs, rhs, err, rel, passed, order=order,
                ))
            plots[f"convergence-{name}"] = [(n, rel) for n, _, _, _, rel in rows]
        return CheckOutcome(records, plots=plots)
