from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from .generators import random_multigraph
from ..graph import GridRegion, graph_to_json
from ..matching import count_matchings, matching_parity
from ..models import Parity
from ..routing import rectangle_parity_by_routing


class OracleParityCheck(Check):
    """Brute-force count parity against the GF(2) determinant."""

    name = "oracle-parity"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        colored = bool(rng.random() < 0.5)
        g = random_multigraph(rng, int(rng.integers(1, 2 * size + 1)), colored=colored)
        count = count_matchings(g)
        expected = Parity.ODD if count % 2 else Parity.EVEN
        got = matching_parity(g)
        if got is not expected:
            raise CaseFailure(f"count {count} but determinant says {got.value}", graph_to_json(g))


class RectangleLawCheck(Check):
    """R_{m x n} is odd iff gcd(m+1, n+1) = 1, directly and by routing."""

    name = "rectangle-law"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        m, n = (int(x) for x in rng.integers(1, size + 1, size=2))
        expected = Parity.ODD if math.gcd(m + 1, n + 1) == 1 else Parity.EVEN
        got = matching_parity(GridRegion.rectangle(m, n).graph)
        if got is not expected:
            raise CaseFailure(f"R{m}x{n}: determinant says {got.value}", f"rect {m} {n}")
        if m * n <= 36:
            count = count_matchings(GridRegion.rectangle(m, n).graph)
            if (count % 2 == 1) != (expected is Parity.ODD):
                raise CaseFailure(f"R{m}x{n}: oracle count {count}", f"rect {m} {n}")
        routed = rectangle_parity_by_routing(m, n)
        if routed.parity is not expected:
            raise CaseFailure(f"R{m}x{n}: routing says {routed.parity.value}", f"rect {m} {n}")
