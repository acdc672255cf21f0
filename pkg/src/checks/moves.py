from __future__ import annotations

from typing import Optional

import numpy as np

from .base import CaseFailure, Check
from .generators import random_multigraph
from ..channels import channel_count_exponent
from ..graph import Graph, graph_to_json
from ..models import ColorRestriction
from ..moves import apply_trace, ed_move, fv_move, reduce, vc_move


def _dims(g: Graph) -> tuple:
    if not g.is_colored():
        return (channel_count_exponent(g),)
    return (
        channel_count_exponent(g),
        channel_count_exponent(g, ColorRestriction.BLACK_ONLY),
        channel_count_exponent(g, ColorRestriction.WHITE_ONLY),
    )


class MoveInvarianceCheck(Check):
    """Every applicable VC/ED/FV keeps the channel dimensions; full reductions count dim C."""

    name = "moves"

    def case(self, rng: np.random.Generator, size: int, fault: Optional[str] = None) -> None:
        g = random_multigraph(rng, int(rng.integers(1, min(14, 2 * size) + 1)), colored=bool(rng.random() < 0.5))
        text = graph_to_json(g)
        before = _dims(g)
        for v in g.vertices:
            if g.degree(v) == 1:
                out = fv_move(g, v, g.neighbors(v)[0])[0]
            elif g.degree(v) == 2 and len(g.adjacency(v)) == 2:
                out = vc_move(g, v)[0]
            else:
                continue
            if _dims(out) != before:
                raise CaseFailure(f"move at {v!r} changed dimensions {before} -> {_dims(out)}", text)
        for u, w, m in g.edges():
            if m >= 2 and _dims(ed_move(g, (u, w, 0), (u, w, 1))[0]) != before:
                raise CaseFailure(f"ED on {u!r}-{w!r} changed dimensions", text)
        trace = reduce(g)
        if apply_trace(g, trace.moves) != trace.terminal:
            raise CaseFailure("replaying the trace does not reproduce the terminal graph", text)
        if trace.fully_reduced and trace.isolated_count != before[0]:
            raise CaseFailure(f"{trace.isolated_count} isolated vertices but dim C = {before[0]}", text)
