from __future__ import annotations

from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from .generators import random_multigraph
from ..channels import channel_space
from ..errors import InvariantError
from ..graph import graph_to_json
from ..matching import enumerate_matchings
from ..routing import check_flip_involution


class CycleFlipCheck(Check):
    """Cycle flipping pairs up all perfect matchings when a nonempty channel exists."""

    name = "cycle-flip"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        g = random_multigraph(rng, 2 * int(rng.integers(1, min(5, size) + 1)), colored=True)
        basis = channel_space(g).basis
        if not basis:
            return
        matchings = enumerate_matchings(g)
        try:
            check_flip_involution(g, matchings, basis[0])
        except InvariantError as e:
            raise CaseFailure(str(e), graph_to_json(g)) from None
