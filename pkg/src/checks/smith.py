from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from ..divisibility import matmul, smith_normal_form, two_nullity
from ..gf2 import GF2Matrix


class SmithCheck(Check):
    """A = S D T, divisibility chain, and 2-nullity from the Smith diagonal."""

    name = "smith"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        rows, cols = (int(x) for x in rng.integers(1, size + 1, size=2))
        a = rng.integers(-4, 5, size=(rows, cols)).tolist()
        text = json.dumps(a)
        dec = smith_normal_form(a)
        if matmul(matmul(dec.S, dec.D), dec.T) != a:
            raise CaseFailure("S . D . T does not reproduce A", text)
        diag = [d for d in dec.diagonal() if d]
        if any(b % c for c, b in zip(diag, diag[1:])):
            raise CaseFailure(f"diagonal {dec.diagonal()} is not a divisibility chain", text)
        nullity = cols - GF2Matrix.from_dense(a).rank()
        if two_nullity(a) != nullity:
            raise CaseFailure("two_nullity disagrees with GF(2) elimination", text)
