"""
Scenario documents: one declarative JSON file per experiment.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from config import KNOWN_CHECKS
from cycles import MIN_NODES
from moduli_dynamics import ModuliConfig
from surfaces import SurfaceModel, SymplecticSurface, make_surface
from utils import ConfigError, WorkbenchError

logger = logging.getLogger(__name__)

DEFAULT_N = [256]


@dataclass
class ScenarioConfig:
    name: str
    model: SurfaceModel
    level: int
    checks: List[str]
    n_values: List[int] = field(default_factory=lambda: list(DEFAULT_N))
    tau: Optional[float] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    fields: Dict = field(default_factory=dict)
    cycles: Dict = field(default_factory=dict)
    options: Dict[str, Dict] = field(default_factory=dict)
    output: Optional[str] = None

    def __post_init__(self):
        if not self.checks:
            raise ConfigError(f"Scenario '{self.name}' selects no checks")
        unknown = sorted(set(self.checks) - set(KNOWN_CHECKS))
        if unknown:
            raise ConfigError(f"Unknown check id(s) {unknown}; known: {', '.join(KNOWN_CHECKS)}")
        if len(set(self.checks)) != len(self.checks):
            raise ConfigError("Duplicate check ids in scenario")
        if not self.n_values:
            raise ConfigError("Scenario needs at least one N value")
        for n in self.n_values:
            if not isinstance(n, int) or isinstance(n, bool) or n < MIN_NODES or n % 2 != 0:
                raise ConfigError(f"N values must be even integers >= {MIN_NODES}, got {n!r}")
        if self.tau is not None and not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        for name, value in self.tolerances.items():
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"Tolerance '{name}' must be a positive number, got {value!r}")
        for seed in self.seeds:
            if not isinstance(seed, int) or isinstance(seed, bool):
                raise ConfigError(f"Seeds must be integers, got {seed!r}")
        for check_id in self.options:
            if check_id not in KNOWN_CHECKS:
                raise ConfigError(f"Options given for unknown check '{check_id}'")

    @classmethod
    def from_dict(cls, data: Dict, name: str = 'scenario') -> 'ScenarioConfig':
        if not isinstance(data, dict):
            raise ConfigError("Scenario document must be a JSON object")
        surface = data.get('surface', {})
        try:
            model = SurfaceModel.parse(surface.get('model', 'FlatTorus'))
            level = surface.get('level', 1)
            if not isinstance(level, int) or isinstance(level, bool) or level < 1:
                raise ConfigError(f"Surface level must be a positive integer, got {level!r}")
            checks = data.get('checks')
            if isinstance(checks, str):
                checks = [checks]
            return cls(
                name=str(data.get('name', name)),
                model=model,
                level=level,
                checks=[str(c).lower() for c in checks or []],
                n_values=list(data.get('N', DEFAULT_N)),
                tau=data.get('tau'),
                tolerances=dict(data.get('tolerances', {})),
                seeds=list(data.get('seeds', [])),
                fields=dict(data.get('fields', {})),
                cycles=dict(data.get('cycles', {})),
                options={str(k).lower(): dict(v) for k, v in data.get('options', {}).items()},
                output=data.get('output'),
            )
        except ConfigError:
            raise
        except (WorkbenchError, AttributeError, TypeError, ValueError) as e:
            raise ConfigError(f"Invalid scenario '{name}': {e}")

    @classmethod
    def load(cls, path: str) -> 'ScenarioConfig':
        try:
            with open(path) as handle:
                data = json.load(handle)
        except FileNotFoundError:
            raise ConfigError(f"Scenario file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Scenario {path} is not valid JSON: {e}")
        scenario = cls.from_dict(data, name=path)
        logger.info(f"Loaded scenario '{scenario.name}' with checks {scenario.checks}")
        return scenario

    def surface(self) -> SymplecticSurface:
        return make_surface(self.model, self.level)

    def moduli_config(self) -> ModuliConfig:
        return ModuliConfig(tau=self.tau)

    def tolerance(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def check_options(self, check_id: str) -> Dict:
        return self.options.get(check_id, {})

    def restricted_to(self, check_ids) -> 'ScenarioConfig':
        """Copy keeping only the given checks, in scenario order"""
        keep = [c for c in self.checks if c in set(check_ids)]
        if not keep:
            raise ConfigError(f"No selected check of '{self.name}' is enabled")
        return ScenarioConfig(
            self.name, self.model, self.level, keep, list(self.n_values), self.tau,
            dict(self.tolerances), list(self.seeds), dict(self.fields), dict(self.cycles),
            dict(self.options), self.output,
        )
