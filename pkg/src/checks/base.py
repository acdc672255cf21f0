from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import MatchParityError


@dataclass
class CheckResult:
    check: str
    size: int
    cases: int = 0
    passed: int = 0
    failed: int = 0
    # input of the first failing case (region file or graph JSON)
    reproducer: str = ""
    notes: str = ""

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "size": str(self.size),
            "cases": str(self.cases),
            "passed": str(self.passed),
            "failed": str(self.failed),
            "reproducer": self.reproducer,
            "notes": self.notes,
        }


class CaseFailure(Exception):
    """Raised by a case with the reproducer of the offending input."""

    def __init__(self, message: str, reproducer: str = ""):
        super().__init__(message)
        self.reproducer = reproducer


class Check(ABC):
    name: str = ""

    @abstractmethod
    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        """Run one randomized case; raise CaseFailure on a mismatch."""
        ...

    def run(self, rng: np.random.Generator, size: int, cases: int, fault: Optional[str] = None) -> CheckResult:
        result = CheckResult(self.name, size)
        if size <= 0:
            result.notes = "vacuous"
            return result
        for _ in range(cases):
            result.cases += 1
            try:
                self.case(rng, size, fault)
            except CaseFailure as e:
                result.failed += 1
                if not result.reproducer:
                    result.reproducer = e.reproducer
                    result.notes = str(e)
                continue
            except MatchParityError as e:
                result.failed += 1
                if not result.notes:
                    result.notes = f"error={type(e).__name__}: {e}"
                continue
            result.passed += 1
        return result
