"""
Check filter for scenarios.
Restricts the checks a scenario runs to an enabled set of ids or module groups.
"""

from typing import List, Optional, Set

class CheckFilter:
    """Filter check ids by id or by the module they exercise"""

    # Module group of every check id
    CHECK_GROUPS = {
        'moduli': {'prop1', 'eq4', 'eq5', 'boundary-scan'},
        'real': {'bs-fibers', 'prop3'},
        'complex': {'toeplitz', 'sk-bracket', 'prop4'},
        'refinement': {'convergence'},
    }

    @classmethod
    def categorize_check(cls, check_id: str) -> Optional[str]:
        """Return the module group of a check id, or None if it is unknown"""
        for group, members in cls.CHECK_GROUPS.items():
            if check_id in members:
                return group
        return None

    @classmethod
    def filter_checks(cls, check_ids: List[str], allowed: Set[str]) -> List[str]:
        """
        Keep the checks whose id or group is in `allowed`, preserving order.

        An empty `allowed` set means no filtering.
        """
        if not allowed:
            return list(check_ids)

        return [
            check_id for check_id in check_ids
            if check_id in allowed or cls.categorize_check(check_id) in allowed
        ]
