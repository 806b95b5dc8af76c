from checks.base import Check, CheckOutcome, ReportRecord
from checks.boundary import BoundaryScanCheck
from checks.correspondence import Eq4Check, Eq5Check, Prop1Check
from checks.fibers import BSFibersCheck, Prop3Check
from checks.refinement import ConvergenceCheck
from checks.toeplitz import Prop4Check, SKBracketCheck, ToeplitzCheck

CHECKS = {
    cls.check_id: cls
    for cls in (
        Prop1Check, Eq4Check, Eq5Check, BSFibersCheck, Prop3Check,
        ToeplitzCheck, SKBracketCheck, Prop4Check, BoundaryScanCheck, ConvergenceCheck,
    )
}

__all__ = [
    'Check', 'CheckOutcome', 'ReportRecord', 'CHECKS',
    'Prop1Check', 'Eq4Check', 'Eq5Check', 'BSFibersCheck', 'Prop3Check',
    'ToeplitzCheck', 'SKBracketCheck', 'Prop4Check', 'BoundaryScanCheck', 'ConvergenceCheck',
]
