from __future__ import annotations

from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from .generators import random_multigraph, random_simple_region
from ..channels import channel_matrix_equivalence, dimension_identity_check
from ..divisibility import divisibility_report
from ..graph import graph_to_json, to_region_file


class DimensionIdentityCheck(Check):
    """dim C_B - dim C_W = |B| - |W| and dim C = dim C_B + dim C_W."""

    name = "dimension-identity"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        g = random_multigraph(rng, int(rng.integers(1, 2 * size + 1)), colored=True)
        if not dimension_identity_check(g):
            raise CaseFailure("dim C_B - dim C_W differs from |B| - |W|", graph_to_json(g))
        if not channel_matrix_equivalence(g):
            raise CaseFailure("dim C differs from dim C_B + dim C_W", graph_to_json(g))


class PowerOfTwoCheck(Check):
    """2^dim C_B divides the matching count of a lattice region."""

    name = "power-of-two"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        region = random_simple_region(rng, 2 * size)
        report = divisibility_report(region)
        if report.guarantee_holds() is False:
            raise CaseFailure(
                f"2^{report.guaranteed_exponent} does not divide {report.exact_count}",
                to_region_file(region),
            )
