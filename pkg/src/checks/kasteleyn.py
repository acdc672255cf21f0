from __future__ import annotations

from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from .generators import random_simple_region
from ..divisibility import count_matchings_kasteleyn
from ..graph import to_region_file
from ..matching import count_matchings

FAULT_SIGN = "kasteleyn-sign"


class KasteleynCheck(Check):
    """Signed determinant against the brute-force count on simple lattice regions."""

    name = "kasteleyn"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        region = random_simple_region(rng, 2 * size)
        g = region.graph
        count = count_matchings(g)
        if len(g.black()) != len(g.white()):
            if count:
                raise CaseFailure(f"unbalanced region has {count} matchings", to_region_file(region))
            return
        det = count_matchings_kasteleyn(g, faulty=fault == FAULT_SIGN)
        if det != count:
            raise CaseFailure(f"determinant {det} vs oracle {count}", to_region_file(region))
