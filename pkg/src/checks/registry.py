from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np

from .base import Check, CheckResult
from .billiards import BilliardsCheck
from .dimension import DimensionIdentityCheck, PowerOfTwoCheck
from .flips import CycleFlipCheck
from .kasteleyn import KasteleynCheck
from .moves import MoveInvarianceCheck
from .parity import OracleParityCheck, RectangleLawCheck
from .smith import SmithCheck

logger = logging.getLogger(__name__)

CHECKS: List[Check] = [
    OracleParityCheck(),
    RectangleLawCheck(),
    DimensionIdentityCheck(),
    PowerOfTwoCheck(),
    KasteleynCheck(),
    BilliardsCheck(),
    MoveInvarianceCheck(),
    CycleFlipCheck(),
    SmithCheck(),
]


def get_check(name: str) -> Check:
    for c in CHECKS:
        if c.name == name:
            return c
    raise KeyError(name)


def run_checks(
    seed: int,
    sizes: Sequence[int],
    cases: int,
    fault: Optional[str] = None,
    names: Optional[Sequence[str]] = None,
) -> List[CheckResult]:
    """Every check at every size; each (check, size) pair draws from a generator seeded by (seed, registry position, size)."""
    selected = [get_check(n) for n in names] if names else CHECKS
    results = []
    for check in selected:
        position = CHECKS.index(check)
        for size in sizes:
            rng = np.random.default_rng([seed, position, max(size, 0)])
            res = check.run(rng, size, cases, fault)
            logger.info("%s size %d: %d/%d passed", check.name, size, res.passed, res.cases)
            results.append(res)
    return results
