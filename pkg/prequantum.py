"""
Prequantum connection: holonomy along closed cycles and the Bohr-Sommerfeld test.

The connection has curvature 2 pi i omega, so the holonomy around a cycle is
exp(2 pi i A) where A is the level-scaled action (the symplectic area bounded
by the cycle, or its torus analogue for non-contractible classes).
"""
import logging
from dataclasses import dataclass

import numpy as np

from surfaces import SymplecticSurface
from utils import WorkbenchError

logger = logging.getLogger(__name__)

DEFAULT_BS_TOL = 1e-6


@dataclass(frozen=True)
class HolonomyResult:
    """
    `action` is the raw level-scaled area and depends on the primitive used
    (north and south charts on the sphere differ by multiples of k). Only
    `value`, `reduced` and `bs_defect` are primitive independent.
    """
    value: complex
    action: float
    bs_defect: float

    @property
    def reduced(self) -> float:
        """Action modulo 1"""
        return float(self.action - np.floor(self.action))

    @classmethod
    def from_action(cls, action: float) -> 'HolonomyResult':
        return cls(
            value=complex(np.exp(2j * np.pi * action)),
            action=float(action),
            bs_defect=float(abs(action - np.round(action))),
        )


def holonomy(surface: SymplecticSurface, cycle, rule: str = 'spectral', primitive: str = 'auto') -> HolonomyResult:
    action = surface.enclosed_area(cycle, rule=rule, primitive=primitive)
    result = HolonomyResult.from_action(action)
    logger.debug(f"holonomy on {surface!r}: action={action:.12f} defect={result.bs_defect:.3e}")
    return result


def is_bohr_sommerfeld(surface: SymplecticSurface, cycle, tol: float = DEFAULT_BS_TOL, **kwargs):
    """Return (is_bs, bs_defect)"""
    if not 0.0 < tol < 0.5:
        raise WorkbenchError(f"BS tolerance must lie in (0, 0.5), got {tol}")
    result = holonomy(surface, cycle, **kwargs)
    return result.bs_defect <= tol, result.bs_defect
