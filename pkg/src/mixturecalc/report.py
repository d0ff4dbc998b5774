"""Structured pass/fail records for verification suites."""

import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Check:
    """One verified relation.

    A check with ``tolerance=None`` is informational: the residual is recorded
    and the check always passes.
    """

    id: str
    relation: str
    residual: Optional[float]
    tolerance: Optional[float]

    @property
    def passed(self) -> bool:
        if self.tolerance is None:
            return True
        if self.residual is None:
            return False
        return self.residual <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'relation': self.relation,
            'residual': self.residual,
            'tolerance': self.tolerance,
            'pass': self.passed,
        }


@dataclass
class SuiteReport:
    """Residual record for a named suite.

    Args:
        suite: Suite name (e.g. 'algebra-identities')
        checks: Checks in insertion order
        wall_time: Seconds spent, filled by `timed`
    """

    suite: str
    checks: List[Check] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, check_id: str, relation: str, residual: Any,
            tolerance: Optional[float]) -> Check:
        """Append a check. Complex or array residuals are reduced to their max magnitude."""
        value = _as_residual(residual)
        check = Check(check_id, relation, value, tolerance)
        self.checks.append(check)
        return check

    def info(self, check_id: str, relation: str, residual: Any) -> Check:
        """Append an informational check (no tolerance)."""
        return self.add(check_id, relation, residual, None)

    def extend(self, other: 'SuiteReport', prefix: str = '') -> 'SuiteReport':
        for check in other.checks:
            self.checks.append(Check(prefix + check.id, check.relation, check.residual,
                                     check.tolerance))
        self.wall_time += other.wall_time
        return self

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]

    def get(self, check_id: str) -> Check:
        for check in self.checks:
            if check.id == check_id:
                return check
        raise KeyError(f"No check '{check_id}' in suite '{self.suite}'")

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            'schema': SCHEMA_VERSION,
            'suite': self.suite,
            'pass': self.passed,
            'checks': [check.to_dict() for check in self.checks],
        }
        if include_timing:
            data['wall_time'] = self.wall_time
        return data

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2) + "\n"


def _as_residual(value: Any) -> Optional[float]:
    try:
        arr = np.abs(np.asarray(value, dtype=complex))
        result = float(arr.max()) if arr.size else 0.0
    except (TypeError, ValueError):
        return None
    if not math.isfinite(result):
        return None
    return result


class timed:
    """Context manager recording elapsed wall time into a report."""

    def __init__(self, report: SuiteReport):
        self.report = report

    def __enter__(self) -> SuiteReport:
        self._start = time.perf_counter()
        return self.report

    def __exit__(self, *exc) -> None:
        self.report.wall_time += time.perf_counter() - self._start
