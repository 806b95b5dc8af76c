"""
Dynamical correspondence on random half-weighted BS cycles: the Hamiltonian
field of F_f, the bracket identity and the first variation of F_f.
"""
import logging
from typing import Dict, List

import numpy as np

from checks.base import Check, CheckOutcome, ReportRecord, relative_error
from checks.sampling import random_field, random_field_pairs, random_recipes
from cycles import deform_step, random_tangent_pair
from moduli_dynamics import (
    differential_pairing,
    moduli_bracket,
    moduli_ham_field,
    omega_form,
    solve_moduli_ham_field,
    special_value,
    theta_bs_components,
)

logger = logging.getLogger(__name__)


class _SampledCheck(Check):
    """Shared sampling: random BS cycles from the scenario seed, fields from offset seeds"""

    def base_params(self, n: int) -> Dict:
        return {'surface': self.scenario.model.value, 'k': self.scenario.level, 'N': n}

    def recipes(self, count_option: str = 'samples'):
        params = dict(self.scenario.cycles)
        if self.option(count_option) is not None:
            params['count'] = self.option(count_option)
        return random_recipes(self.scenario.surface(), self.seed, params)


class Prop1Check(_SampledCheck):
    check_id = 'prop1'
    description = 'Hamiltonian field of F_f equals 2 tau Theta_BS(f); Omega-duality against random tangent pairs'

    def run(self) -> CheckOutcome:
        surface = self.scenario.surface()
        cfg = self.scenario.moduli_config()
        field_params = self.scenario.fields
        field_count = int(field_params.get('count', 10))
        fields = [random_field(surface, self.seed + 1000 + i, field_params) for i in range(field_count)]
        n_pairs = int(self.option('pairs', 50))
        n_solved = int(self.option('solved_fields', 2))
        tol = self.tol('prop1', 1e-8)
        records = []
        for n in self.scenario.n_values:
            recipes = self.recipes()
            worst_field = (0.0, 0.0, 0.0)
            worst_dual = (0.0, 0.0, 0.0)
            for r, recipe in enumerate(recipes):
                hw = recipe.build(surface, n)
                pairs = [random_tangent_pair(hw, self.seed + 7919 * r + j) for j in range(n_pairs)]
                for i, f in enumerate(fields):
                    ham = moduli_ham_field(f, hw, cfg)
                    if i < n_solved:
                        solved = solve_moduli_ham_field(f, hw, cfg)
                        theta = theta_bs_components(f, hw).scaled(2.0 * cfg.tau_for(hw))
                        diff = max(np.abs(solved.psi1 - theta.psi1).max(), np.abs(solved.psi2 - theta.psi2).max())
                        if diff >= worst_field[2]:
                            worst_field = (max(np.abs(solved.psi1).max(), np.abs(solved.psi2).max()),
                                           max(np.abs(theta.psi1).max(), np.abs(theta.psi2).max()), diff)
                    for pair in pairs:
                        lhs = omega_form(hw, ham, pair)
                        rhs = differential_pairing(f, hw, pair, cfg)
                        if abs(lhs - rhs) >= worst_dual[2]:
                            worst_dual = (lhs, rhs, abs(lhs - rhs))
            sizes = {'samples': len(recipes), 'fields': field_count}
            lhs, rhs, err = worst_field
            records.append(ReportRecord(
                self.check_id, {**self.base_params(n), **sizes, 'property': 'ham-field'},
                lhs, rhs, err, relative_error(err, rhs), err <= tol,
            ))
            lhs, rhs, err = worst_dual
            records.append(ReportRecord(
                self.check_id, {**self.base_params(n), **sizes, 'pairs': n_pairs, 'property': 'omega-duality'},
                lhs, rhs, err, relative_error(err, rhs), err <= tol,
            ))
        return CheckOutcome(records)


def bracket_errors(surface, cfg, recipes, pairs, n: int):
    """Per (cycle, field pair): ({F_f, F_g}_Omega, 2 tau F_{f,g}) at N nodes"""
    out = []
    for recipe in recipes:
        hw = recipe.build(surface, n)
        tau = cfg.tau_for(hw)
        for f, g in pairs:
            lhs = moduli_bracket(f, g, hw, cfg)
            rhs = 2.0 * tau * special_value(surface.poisson_bracket(f, g), hw, cfg)
            out.append((lhs, rhs))
    return out


class Eq4Check(_SampledCheck):
    check_id = 'eq4'
    description = 'Correspondence {F_f, F_g}_Omega = 2 tau F_{f,g} on random BS cycles'

    def run(self) -> CheckOutcome:
        surface = self.scenario.surface()
        cfg = self.scenario.moduli_config()
        pairs = random_field_pairs(surface, self.seed + 1000, self.scenario.fields)
        tol = self.tol('eq4', 1e-7)
        records = []
        for n in self.scenario.n_values:
            recipes = self.recipes()
            values = bracket_errors(surface, cfg, recipes, pairs, n)
            lhs, rhs = max(values, key=lambda v: relative_error(abs(v[0] - v[1]), v[1]))
            record = ReportRecord.compare(
                self.check_id,
                {**self.base_params(n), 'samples': len(recipes), 'field_pairs': len(pairs)},
                lhs, rhs, tol,
            )
            logger.debug(str(record))
            records.append(record)
        return CheckOutcome(records)


class Eq5Check(_SampledCheck):
    check_id = 'eq5'
    description = 'Forward difference of F_f along deform_step against the first-variation pairing'

    def run(self) -> CheckOutcome:
        surface = self.scenario.surface()
        cfg = self.scenario.moduli_config()
        field_params = {**self.scenario.fields, 'degree': 1, **self.option('fields', {})}
        epsilons: List[float] = [float(e) for e in self.option('epsilons', [1e-3, 1e-4])]
        pair_scale = float(self.option('pair_scale', 0.02))
        mode_cutoff = int(self.option('mode_cutoff', 2))
        slope = float(self.option('slope', 10.0))
        floor = self.scenario.tolerance('eq5', 1e-8)
        records = []
        for n in self.scenario.n_values:
            recipes = self.recipes()[:int(self.option('samples', 5))]
            cases = []
            for r, recipe in enumerate(recipes):
                hw = recipe.build(surface, n)
                f = random_field(surface, self.seed + 1000 + r, field_params)
                pair = random_tangent_pair(hw, self.seed + 31 * r, mode_cutoff).scaled(pair_scale)
                cases.append((hw, f, pair, special_value(f, hw, cfg), differential_pairing(f, hw, pair, cfg)))
            for eps in epsilons:
                worst = None
                for hw, f, pair, base, exact in cases:
                    moved = deform_step(hw, pair, eps)
                    quotient = (special_value(f, moved, cfg) - base) / eps
                    if worst is None or abs(quotient - exact) > abs(worst[0] - worst[1]):
                        worst = (quotient, exact)
                lhs, rhs = worst
                err = abs(lhs - rhs)
                records.append(ReportRecord(
                    self.check_id, {**self.base_params(n), 'eps': eps, 'samples': len(cases)},
                    lhs, rhs, err, relative_error(err, rhs),
                    err <= (slope * eps + floor) * self.tol_scale,
                ))
        return CheckOutcome(records)


__all__ = ['Prop1Check', 'Eq4Check', 'Eq5Check', 'bracket_errors']
