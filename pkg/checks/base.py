from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np


def _clean(value):
    """JSON-safe scalars: numpy types unwrapped, NaN/inf mapped to None"""
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def relative_error(abs_err: float, reference: float, floor: float = 1e-6) -> float:
    """abs_err / |reference|, or abs_err itself when the reference is below `floor`"""
    scale = abs(reference)
    return abs_err / scale if scale > floor else abs_err


class ReportRecord:
    """One verified identity or property"""

    def __init__(self, check_id: str, params: Dict[str, Any], lhs: float, rhs: float,
                 abs_err: float, rel_err: float, passed: bool,
                 order: Optional[Union[float, str]] = None, diagnostics: str = '',
                 wall_time: float = 0.0):
        self.check_id = check_id
        self.params = params
        self.lhs = lhs
        self.rhs = rhs
        self.abs_err = abs_err
        self.rel_err = rel_err
        self.passed = bool(passed)
        self.order = order
        self.diagnostics = diagnostics
        self.wall_time = wall_time

    @classmethod
    def compare(cls, check_id: str, params: Dict[str, Any], lhs: float, rhs: float, tol: float,
                gate: str = 'rel', diagnostics: str = '') -> 'ReportRecord':
        abs_err = abs(lhs - rhs)
        rel_err = relative_error(abs_err, rhs)
        measured = rel_err if gate == 'rel' else abs_err
        return cls(check_id, params, lhs, rhs, abs_err, rel_err, measured <= tol, diagnostics=diagnostics)

    @classmethod
    def failure(cls, check_id: str, message: str) -> 'ReportRecord':
        return cls(check_id, {}, float('nan'), float('nan'), float('nan'), float('nan'), False,
                   diagnostics=message)

    def sort_key(self):
        return (self.check_id, repr(sorted(_clean(self.params).items())))

    def to_dict(self, include_timing: bool = False) -> Dict:
        record = {
            'check': self.check_id,
            'params': _clean(self.params),
            'lhs': _clean(self.lhs),
            'rhs': _clean(self.rhs),
            'abs_err': _clean(self.abs_err),
            'rel_err': _clean(self.rel_err),
            'order': _clean(self.order),
            'pass': self.passed,
            'diagnostics': self.diagnostics,
        }
        if include_timing:
            record['wall_time'] = self.wall_time
        return record

    @classmethod
    def from_dict(cls, data: Dict) -> 'ReportRecord':
        def number(key):
            value = data.get(key)
            return float('nan') if value is None else value
        return cls(
            data['check'], data.get('params', {}), number('lhs'), number('rhs'),
            number('abs_err'), number('rel_err'), data.get('pass', False),
            order=data.get('order'), diagnostics=data.get('diagnostics', ''),
            wall_time=data.get('wall_time', 0.0),
        )

    def __str__(self):
        status = 'pass' if self.passed else 'FAIL'
        return f"{self.check_id} {self.params}: abs_err={self.abs_err:.3e} rel_err={self.rel_err:.3e} [{status}]"


@dataclass
class CheckOutcome:
    records: List[ReportRecord]
    fiber_tables: List[Any] = field(default_factory=list)
    plots: Dict[str, List[tuple]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r.passed for r in self.records)


class Check(ABC):
    """Base class for the verification checks run by a scenario"""

    check_id: str = ''
    description: str = ''

    def __init__(self, scenario, seed: int, tol_scale: float = 1.0):
        self.scenario = scenario
        self.seed = seed
        self.tol_scale = tol_scale

    def tol(self, name: str, default: float) -> float:
        return self.scenario.tolerance(name, default) * self.tol_scale

    def option(self, name: str, default=None):
        return self.scenario.check_options(self.check_id).get(name, default)

    @abstractmethod
    def run(self) -> CheckOutcome:
        """Run the check; pure in (scenario, seed, tol_scale)"""
        pass

    def get_check_info(self) -> Dict:
        return {'id': self.check_id, 'description': self.description}
