"""Complex polarization checks on the sphere: Toeplitz layer, Souriau-Kostant bracket, BPU images"""
import logging
from typing import Dict

import numpy as np

from checks.base import Check, CheckOutcome, ReportRecord
from polarizations_complex import (
    SectionVector,
    expectation_function,
    holomorphic_basis,
    prop4_distance,
    sk_operator_matrix,
    toeplitz_matrix,
)
from polarizations_real import build_real_hilbert
from surfaces import PolyField, make_surface, random_poly_field
from utils import WorkbenchError

logger = logging.getLogger(__name__)

COORDINATES = {'x': PolyField.coordinate(0), 'y': PolyField.coordinate(1), 'z': PolyField.coordinate(2)}


def _max_abs(matrix: np.ndarray) -> float:
    return float(np.abs(matrix).max())


def _record(check_id: str, params: Dict, lhs: float, rhs: float, err: float, tol: float) -> ReportRecord:
    rel = err / abs(rhs) if abs(rhs) > 1e-6 else err
    return ReportRecord(check_id, params, lhs, rhs, err, rel, err <= tol)


class ToeplitzCheck(Check):
    check_id = 'toeplitz'
    description = 'T_1 = I, Hermiticity, linearity, expectation consistency and quadrature stability of T_f'

    def run(self) -> CheckOutcome:
        records = []
        n_sections = int(self.option('sections', 20))
        for k in self.option('levels', range(1, 7)):
            k = int(k)
            params = {'surface': 'RoundSphere', 'k': k}
            data = holomorphic_basis(k)
            fields = dict(COORDINATES, random=random_poly_field(self.seed + k, 2))

            identity = toeplitz_matrix(data, PolyField.constant(1.0))
            records.append(_record(self.check_id, {**params, 'property': 'identity'},
                                   _max_abs(identity), 1.0, _max_abs(identity - np.eye(k + 1)),
                                   self.tol('toeplitz-identity', 1e-10)))

            worst = max(_max_abs(toeplitz_matrix(data, f) - toeplitz_matrix(data, f).conj().T)
                        for f in fields.values())
            records.append(_record(self.check_id, {**params, 'property': 'hermitian', 'fields': len(fields)},
                                   worst, 0.0, worst, self.tol('toeplitz-hermitian', 1e-12)))

            f, g = fields['random'], fields['z']
            summed = toeplitz_matrix(data, f) + toeplitz_matrix(data, g)
            err = _max_abs(toeplitz_matrix(data, f + g) - summed)
            records.append(_record(self.check_id, {**params, 'property': 'linear'},
                                   _max_abs(summed), _max_abs(summed), err, self.tol('toeplitz-linear', 1e-12)))

            rng = np.random.default_rng(self.seed + 100 * k)
            matrix = toeplitz_matrix(data, f)
            worst = (0.0, 0.0)
            for _ in range(n_sections):
                section = SectionVector(rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)).normalized()
                c = section.coefficients
                direct = expectation_function(data, f, section)
                quadratic = float(np.real(np.vdot(c, matrix @ c)))
                if abs(direct - quadratic) >= abs(worst[0] - worst[1]):
                    worst = (direct, quadratic)
            records.append(_record(self.check_id, {**params, 'property': 'expectation', 'sections': n_sections},
                                   worst[0], worst[1], abs(worst[0] - worst[1]),
                                   self.tol('toeplitz-expectation', 1e-8)))

            fine = holomorphic_basis(k, 2 * data.order)
            coarse_z = toeplitz_matrix(data, fields['z'])
            fine_z = toeplitz_matrix(fine, fields['z'])
            records.append(_record(self.check_id, {**params, 'property': 'quadrature', 'order': data.order},
                                   _max_abs(coarse_z), _max_abs(fine_z), _max_abs(coarse_z - fine_z),
                                   self.tol('toeplitz-quadrature', 1e-10)))
        return CheckOutcome(records)


class SKBracketCheck(Check):
    check_id = 'sk-bracket'
    description = 'Souriau-Kostant operators of x, y, z close under commutators: [Q_f, Q_g] = Q_{f,g}'

    def run(self) -> CheckOutcome:
        records = []
        step = float(self.option('step', 5e-4))
        tol = self.tol('sk-bracket', 1e-6)
        for k in self.option('levels', range(1, 7)):
            k = int(k)
            params = {'surface': 'RoundSphere', 'k': k}
            surface = make_surface('RoundSphere', k)
            data = holomorphic_basis(k)

            unit = sk_operator_matrix(data, PolyField.constant(1.0), step)
            records.append(_record(self.check_id, {**params, 'property': 'unit'},
                                   _max_abs(unit), 2.0 * np.pi, _max_abs(unit - 2j * np.pi * np.eye(k + 1)),
                                   self.tol('sk-unit', 1e-8)))

            for a, b in (('x', 'y'), ('y', 'z'), ('z', 'x')):
                f, g = COORDINATES[a], COORDINATES[b]
                qf, qg = sk_operator_matrix(data, f, step), sk_operator_matrix(data, g, step)
                commutator = qf @ qg - qg @ qf
                bracket = sk_operator_matrix(data, surface.poisson_bracket(f, g), step)
                records.append(_record(self.check_id, {**params, 'property': 'bracket', 'pair': f"{a}{b}"},
                                       _max_abs(commutator), _max_abs(bracket),
                                       _max_abs(commutator - bracket), tol))

            skew = max(_max_abs(q + q.conj().T)
                       for q in (sk_operator_matrix(data, f, step) for f in COORDINATES.values()))
            records.append(_record(self.check_id, {**params, 'property': 'skew-hermitian'},
                                   skew, 0.0, skew, self.tol('sk-skew', 1e-8)))
        return CheckOutcome(records)


class Prop4Check(Check):
    check_id = 'prop4'
    description = 'BPU images of the critical points of F_z sit on eigenrays of T_z; both signs give one ray'

    def run(self) -> CheckOutcome:
        records = []
        plot = []
        f = PolyField.coordinate(2)
        for k in self.option('levels', range(2, 7)):
            k = int(k)
            params = {'surface': 'RoundSphere', 'k': k}
            try:
                summary = build_real_hilbert(make_surface('RoundSphere', k), n_nodes=int(self.option('n_nodes', 64)))
                rows = prop4_distance(holomorphic_basis(k), f, summary.critical_points)
            except WorkbenchError as e:
                records.append(ReportRecord.failure(self.check_id, f"k={k}: {e.message}"))
                continue
            for row in rows:
                row_params = {**params, 'fiber': row['index'], 'sign': row['sign']}
                records.append(_record(self.check_id, {**row_params, 'property': 'eigenray'},
                                       row['distance'], 0.0, row['distance'], self.tol('prop4', 1e-2)))
                records.append(_record(self.check_id, {**row_params, 'property': 'pair'},
                                       row['pair_distance'], 0.0, row['pair_distance'],
                                       self.tol('prop4-pair', 1e-10)))
                plot.append((k, row['eigenvalue']))
        return CheckOutcome(records, plots={'prop4': plot})


__all__ = ['ToeplitzCheck', 'SKBracketCheck', 'Prop4Check']
