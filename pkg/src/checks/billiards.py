from __future__ import annotations

from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from .generators import random_simple_region
from ..billiards import bounce_check, fast_path_basis, fast_path_basis_outer, path_basis
from ..channels import channel_count_exponent
from ..graph import to_region_file
from ..models import ColorRestriction


class BilliardsCheck(Check):
    """Both fast algorithms agree with the face-graph components and the channel dimensions."""

    name = "billiards"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        region = random_simple_region(rng, 2 * size)
        text = to_region_file(region)
        d = path_basis(region).d
        fast = fast_path_basis(region).d
        if fast != d:
            raise CaseFailure(f"fast algorithm found {fast} paths, face graph {d}", text)
        if not bounce_check(region):
            raise CaseFailure(f"{d} paths but inner channel dimension differs", text)
        outer = fast_path_basis_outer(region).d
        dim = channel_count_exponent(region.graph, ColorRestriction.BLACK_ONLY)
        if outer - 1 != dim:
            raise CaseFailure(f"completion gives {outer} paths, dim C_B is {dim}", text)
