import logging
from dataclasses import replace

from checks.base import Check, CheckOutcome, ReportRecord
from moduli_dynamics import boundary_contraction_scan
from surfaces import SurfaceModel, make_surface, section_norm_field

logger = logging.getLogger(__name__)

RESIDUAL_FLOOR = 1e-3


class BoundaryScanCheck(Check):
    check_id = 'boundary-scan'
    description = 'F of |s|^2 along circles contracting onto the divisor: monotone, residual bounded below'

    def run(self) -> CheckOutcome:
        if self.scenario.model is SurfaceModel.ROUND_SPHERE:
            level = self.scenario.level
        else:
            level = int(self.option('level', 4))
        surface = make_surface(SurfaceModel.ROUND_SPHERE, level)
        cfg = replace(self.scenario.moduli_config(), max_iterations=int(self.option('max_iterations', 200)))
        result = boundary_contraction_scan(
            surface,
            divisor_spec=self.option('divisor', {}),
            family_spec=self.option('family', {}),
            cfg=cfg,
            search=bool(self.option('search', True)),
        )
        params = {'surface': surface.model.value, 'k': level}
        values = [row['F'] for row in result.rows]
        rises = sum(1 for a, b in zip(values, values[1:]) if b >= a)
        records = [
            ReportRecord(self.check_id, {**params, 'property': 'monotone', 'rows': len(values)},
                         rises, 0, rises, rises, result.monotone),
        ]

        floor = RESIDUAL_FLOOR / self.tol_scale
        shortfall = max(0.0, floor - result.min_relative_residual)
        records.append(ReportRecord(
            self.check_id, {**params, 'property': 'residual-floor'},
            result.min_relative_residual, floor, shortfall, shortfall / floor,
            result.min_relative_residual >= floor,
            diagnostics=f"level sets in family at {result.level_set_rows}" if result.level_set_rows else '',
        ))

        divisor_value = float(section_norm_field(level).evaluate([[0.0, 0.0, 1.0]])[0])
        records.append(ReportRecord(
            self.check_id, {**params, 'property': 'divisor'},
            divisor_value, 0.0, abs(divisor_value), abs(divisor_value), abs(divisor_value) <= 1e-14,
        ))

        if result.search is not None:
            search = result.search
            final = max(search.residual)
            # f_Y has no critical points near the divisor; the search must report non-convergence
            records.append(ReportRecord(
                self.check_id, {**params, 'property': 'search', 'converged': search.converged,
                                'iterations': search.iterations},
                final, cfg.critical_tol, final, final, not search.converged,
                diagnostics=search.message,
            ))
            logger.info(f"boundary-scan k={level}: critical search {search.message}")

        return CheckOutcome(records, plots={'boundary-scan': [(row['parameter'], row['F']) for row in result.rows]})
