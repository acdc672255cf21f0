from __future__ import annotations

import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import InvariantError, PreconditionError
from .gf2 import GF2Matrix, adjacency_mod2, bipartite_adjacency_mod2, nullspace
from .graph import Graph, GridRegion
from .models import Channel, ChannelBasis, Color, ColorRestriction, Point, Vertex

logger = logging.getLogger(__name__)


def channel_from_vector(vertices: Sequence[Vertex], vec: Iterable[int], host_id: str = "") -> Channel:
    return Channel(frozenset(v for v, bit in zip(vertices, vec) if bit), host_id)


def make_channel(g: Graph, vertices: Iterable[Vertex]) -> Channel:
    vs = frozenset(vertices)
    for v in vs:
        g.index(v)
    return Channel(vs, g.id)


def is_channel(g: Graph, c: Channel | Iterable[Vertex]) -> bool:
    """Every vertex sees an even number of channel vertices, parallel edges counted."""
    members = c.vertices if isinstance(c, Channel) else frozenset(c)
    for v in members:
        g.index(v)
    for v in g.vertices:
        adj = g.adjacency(v)
        if sum(m for w, m in adj.items() if w in members) % 2:
            return False
    return True


def _basis(vertices: Sequence[Vertex], kernel: List[np.ndarray], host_id: str,
           restriction: ColorRestriction) -> ChannelBasis:
    return ChannelBasis(host_id, restriction, [channel_from_vector(vertices, v, host_id) for v in kernel])


def channel_space(g: Graph) -> ChannelBasis:
    """Basis of C(G): the kernel of the adjacency matrix mod 2."""
    return _basis(g.vertices, nullspace(adjacency_mod2(g)), g.id, ColorRestriction.ALL)


def black_channel_space(g: Graph) -> ChannelBasis:
    """Basis of C_B(G): kernel of the white-by-black matrix mod 2."""
    return _basis(g.black(), nullspace(bipartite_adjacency_mod2(g)), g.id, ColorRestriction.BLACK_ONLY)


def white_channel_space(g: Graph) -> ChannelBasis:
    return _basis(g.white(), nullspace(bipartite_adjacency_mod2(g).transpose()), g.id,
                  ColorRestriction.WHITE_ONLY)


def channel_count_exponent(g: Graph, restriction: ColorRestriction = ColorRestriction.ALL) -> int:
    """log2 of the number of channels; reported as an exponent, never expanded."""
    if restriction is ColorRestriction.BLACK_ONLY:
        m = bipartite_adjacency_mod2(g)
    elif restriction is ColorRestriction.WHITE_ONLY:
        m = bipartite_adjacency_mod2(g).transpose()
    else:
        m = adjacency_mod2(g)
    return m.cols - m.rank()


def channel_sum(c1: Channel, c2: Channel) -> Channel:
    if c1.host_id and c2.host_id and c1.host_id != c2.host_id:
        raise PreconditionError(f"channels live on different hosts ({c1.host_id} vs {c2.host_id})")
    return Channel(c1.vertices ^ c2.vertices, c1.host_id or c2.host_id)


def split_by_color(g: Graph, c: Channel) -> Tuple[Channel, Channel]:
    g.require_coloring()
    black = frozenset(v for v in c.vertices if g.color(v) is Color.BLACK)
    return Channel(black, c.host_id), Channel(c.vertices - black, c.host_id)


def is_independent(g: Graph, channels: Sequence[Channel]) -> bool:
    if not channels:
        return True
    rows = [[1 if v in c.vertices else 0 for v in g.vertices] for c in channels]
    return GF2Matrix.from_dense(rows).rank() == len(channels)


def dimension_identity_check(g: Graph) -> bool:
    """dim C_B - dim C_W == |V_B| - |V_W|."""
    g.require_coloring()
    dim_b = channel_count_exponent(g, ColorRestriction.BLACK_ONLY)
    dim_w = channel_count_exponent(g, ColorRestriction.WHITE_ONLY)
    ok = dim_b - dim_w == len(g.black()) - len(g.white())
    if not ok:
        logger.warning("dimension identity failed on %s: %d - %d", g.id, dim_b, dim_w)
    return ok


def step_diagonal_edges(r: int) -> List[Tuple[Point, Point]]:
    """Highlighted step-diagonal edges (x, x)-(x+1, x), x < r, of R_{2r x 2r}."""
    return [((x, x), (x + 1, x)) for x in range(r)]


def step_diagonal_graph(r: int, deleted: Iterable[int] = ()) -> Graph:
    """R_{2r x 2r} with the listed step-diagonal edges removed (by position along the diagonal)."""
    g = GridRegion.rectangle(2 * r, 2 * r).graph
    edges = step_diagonal_edges(r)
    for i in sorted(set(deleted)):
        if not 0 <= i < r:
            raise PreconditionError(f"step-diagonal edge index {i} outside 0..{r - 1}")
        u, v = edges[i]
        g = g.without_edge(u, v)
    return g


def step_diagonal_channels(r: int) -> List[Channel]:
    """r independent black channels of R_{2r x 2r}; channel t contains the step vertex (t, t) and no other.

    Each is two transversal diagonal segments (x + y = 2t and its mirror) plus
    the two parallel segments at offset y - x = +-(2t + 2).
    """
    if r < 1:
        raise PreconditionError("step diagonal needs r >= 1")
    n = 2 * r
    g = GridRegion.rectangle(n, n).graph
    inside = lambda p: 0 <= p[0] < n and 0 <= p[1] < n  # noqa: E731
    out = []
    for t in range(r):
        s = 2 * t
        pts = set()
        pts.update(p for p in ((x, s - x) for x in range(s + 1)) if inside(p))
        mirror = 2 * (n - 1) - s
        pts.update(p for p in ((x, mirror - x) for x in range(n)) if inside(p))
        off = s + 2
        pts.update(p for p in ((x, x + off) for x in range(n)) if inside(p))
        pts.update(p for p in ((x, x - off) for x in range(n)) if inside(p))
        c = Channel(frozenset(pts), g.id)
        if not is_channel(g, c):
            raise InvariantError(f"step-diagonal construction t={t} is not a channel of R{n}x{n}")
        out.append(c)
    if not is_independent(g, out):
        raise InvariantError("step-diagonal channels are dependent")
    return out


def is_black_channel(g: Graph, c: Channel | Iterable[Vertex]) -> bool:
    members = c.vertices if isinstance(c, Channel) else frozenset(c)
    return all(g.color(v) is Color.BLACK for v in members) and is_channel(g, members)


def channel_matrix_equivalence(g: Graph) -> bool:
    """nul2(A) == dim C_B + dim C_W on a bipartite graph (A is block off-diagonal)."""
    g.require_coloring()
    total = channel_count_exponent(g)
    split = (channel_count_exponent(g, ColorRestriction.BLACK_ONLY)
             + channel_count_exponent(g, ColorRestriction.WHITE_ONLY))
    if total != split:
        logger.warning("channel count mismatch on %s: %d vs %d", g.id, total, split)
    return total == split
