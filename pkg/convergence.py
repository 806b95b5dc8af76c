"""
Refinement studies: observed order of accuracy from errors at several N.
"""
import json
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from utils import ConvergenceError

logger = logging.getLogger(__name__)

MIN_LEVELS = 3
ROUNDING_FLOOR = 1e-12
MIN_ORDER = 1.8
# checks whose discretisation error is documented as (at least) second order
SECOND_ORDER_CHECKS = frozenset({'eq4', 'prop1', 'convergence'})


def observed_order(n_values: Sequence[int], errors: Sequence[float]) -> Union[float, str]:
    """
    Least-squares slope of -log(error) against log(N). Errors at or below
    the rounding floor carry no rate information and are left out; when
    fewer than two resolved errors remain the study is reported as 'exact'.
    """
    n = np.asarray(n_values, dtype=float)
    err = np.abs(np.asarray(errors, dtype=float))
    if len(np.unique(n)) < MIN_LEVELS:
        raise ConvergenceError(f"Convergence study needs at least {MIN_LEVELS} values of N, got {sorted(set(n_values))}")
    if not np.all(np.isfinite(err)):
        raise ConvergenceError("Convergence study contains non-finite errors")
    resolved = err > ROUNDING_FLOOR
    if resolved.sum() < 2:
        return 'exact'
    if resolved.sum() < len(err):
        logger.warning(f"{len(err) - resolved.sum()} errors at the rounding floor left out of the slope fit")
    slope = np.polyfit(np.log(n[resolved]), np.log(err[resolved]), 1)[0]
    return float(-slope)


def order_passes(order: Union[float, str], minimum: float = MIN_ORDER) -> bool:
    return order == 'exact' or order >= minimum


@dataclass
class ConvergenceRow:
    check_id: str
    params: Dict
    n_values: List[int]
    errors: List[float]
    order: Union[float, str]

    @property
    def flagged(self) -> bool:
        return self.check_id in SECOND_ORDER_CHECKS and not order_passes(self.order)

    @property
    def label(self) -> str:
        return json.dumps(self.params, sort_keys=True)


def _group_key(record) -> Tuple[str, str]:
    params = {k: v for k, v in record.params.items() if k != 'N'}
    return record.check_id, json.dumps(params, sort_keys=True, default=str)


def emit_convergence(records: Sequence) -> List[ConvergenceRow]:
    """
    Group records by check and parameters other than N and fit one slope per
    group. Groups with fewer than three N values are skipped; a report set
    with no usable group is an error.
    """
    groups: Dict[Tuple[str, str], List] = {}
    for record in records:
        if 'N' not in record.params:
            continue
        groups.setdefault(_group_key(record), []).append(record)

    rows = []
    for (check_id, label), members in sorted(groups.items()):
        by_n = {}
        for record in members:
            by_n[int(record.params['N'])] = max(by_n.get(int(record.params['N']), 0.0), float(record.rel_err))
        if len(by_n) < MIN_LEVELS:
            logger.warning(f"Skipping {check_id} {label}: only N = {sorted(by_n)}")
            continue
        n_values = sorted(by_n)
        errors = [by_n[n] for n in n_values]
        order = observed_order(n_values, errors)
        row = ConvergenceRow(check_id, json.loads(label), n_values, errors, order)
        if row.flagged:
            logger.warning(f"{check_id} {label}: observed order {order:.3f} below {MIN_ORDER}")
        rows.append(row)

    if not rows:
        raise ConvergenceError(f"No check in the report set has errors at {MIN_LEVELS} or more values of N")
    return rows
