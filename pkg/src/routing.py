"""
Channel routing across removed vertex pairs, the rectangle parity recursion
built on it, and the cycle-flipping involution on perfect matchings.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .channels import black_channel_space, channel_count_exponent, is_channel, is_independent
from .errors import InvariantError, PreconditionError
from .gf2 import GF2Matrix, bipartite_adjacency_mod2, nullspace, solve_mod2
from .graph import Graph, GridRegion
from .matching import is_perfect_matching, matching_parity, symmetric_difference
from .models import (
    Channel,
    Color,
    ColorRestriction,
    CycleFlip,
    EdgeRef,
    Matching,
    MultiRouteResult,
    PairingFunction,
    Parity,
    RectangleRouting,
    RoutingResult,
    Vertex,
)

logger = logging.getLogger(__name__)

ChannelLike = Union[Channel, Iterable[Vertex]]


def _members(c: ChannelLike) -> frozenset:
    return c.vertices if isinstance(c, Channel) else frozenset(c)


def _oriented(g: Graph, u: Vertex, v: Vertex) -> Tuple[Vertex, Vertex]:
    """(black, white) endpoints of an edge."""
    if g.multiplicity(u, v) == 0:
        raise PreconditionError(f"{u!r}-{v!r} is not an edge")
    if g.color(u) is Color.BLACK:
        return u, v
    return v, u


def _require_black_channel(g: Graph, members: frozenset, label: str) -> None:
    for v in members:
        g.index(v)
        if g.color(v) is not Color.BLACK:
            raise PreconditionError(f"{label} contains the white vertex {v!r}")
    if not is_channel(g, members):
        raise PreconditionError(f"{label} is not a channel of {g.name or 'the edge-deleted graph'}")


def route_channel(g: Graph, e: Tuple[Vertex, Vertex], witness: ChannelLike) -> RoutingResult:
    """Bijection C_B(G) <-> C_B(G - {b, w}) for e = bw, given a channel of G - e through b.

    f sends C to C when b is not in C, else to B + C; the inverse sends C to C
    when |N(w) & C| is even, else to B + C.
    """
    g.require_coloring()
    b, w = _oriented(g, *e)
    ge = g.without_edge(b, w)
    gp = g.without_vertices([b, w])
    wit = _members(witness)
    _require_black_channel(ge, wit, "witness")
    if b not in wit:
        raise PreconditionError(f"witness does not contain {b!r}")

    n_w = g.adjacency(w)

    def forward(c: frozenset) -> frozenset:
        return c ^ wit if b in c else c

    def backward(c: frozenset) -> frozenset:
        return c ^ wit if sum(m for x, m in n_w.items() if x in c) % 2 else c

    before = black_channel_space(g).basis
    after = black_channel_space(gp).basis
    f_images = [Channel(forward(c.vertices), gp.id) for c in before]
    g_images = [Channel(backward(c.vertices), g.id) for c in after]

    for c, img in zip(before, f_images):
        if not is_channel(gp, img.vertices) or b in img.vertices:
            raise InvariantError(f"routing image of {sorted(c.vertices, key=g.index)!r} is not a channel of G'")
        if backward(img.vertices) != c.vertices:
            raise InvariantError("inverse routing does not undo the forward map")
    for c, img in zip(after, g_images):
        if not is_channel(g, img.vertices):
            raise InvariantError("inverse routing image is not a channel of G")
        if forward(img.vertices) != c.vertices:
            raise InvariantError("forward routing does not undo the inverse map")
    if len(before) != len(after) or not is_independent(gp, f_images):
        raise InvariantError(f"routing is not a bijection: dim {len(before)} vs {len(after)}")
    logger.debug("routed %r-%r: dim C_B %d", b, w, len(before))
    return RoutingResult(len(before), len(after), f_images, g_images)


def _constrained_solve(ge: Graph, fixed: Dict[Vertex, int]) -> Optional[frozenset]:
    blacks = ge.black()
    col = {v: j for j, v in enumerate(blacks)}
    rows = bipartite_adjacency_mod2(ge).to_dense().astype(np.uint8)
    extra = np.zeros((len(fixed), len(blacks)), dtype=np.uint8)
    rhs = [0] * rows.shape[0]
    for i, (v, bit) in enumerate(fixed.items()):
        extra[i, col[v]] = 1
        rhs.append(bit)
    x = solve_mod2(GF2Matrix.from_dense(np.vstack([rows, extra])), rhs)
    if x is None:
        return None
    return frozenset(v for v, bit in zip(blacks, x) if bit)


def _avoiding_channel(ge: Graph, bs: Sequence[Vertex]) -> Optional[frozenset]:
    """A nonempty black channel of ge missing every vertex of bs, if one exists."""
    blacks = ge.black()
    col = {v: j for j, v in enumerate(blacks)}
    rows = bipartite_adjacency_mod2(ge).to_dense().astype(np.uint8)
    extra = np.zeros((len(bs), len(blacks)), dtype=np.uint8)
    for i, v in enumerate(bs):
        extra[i, col[v]] = 1
    kernel = nullspace(GF2Matrix.from_dense(np.vstack([rows, extra])))
    if not kernel:
        return None
    return frozenset(v for v, bit in zip(blacks, kernel[0]) if bit)


def find_witnesses(ge: Graph, bs: Sequence[Vertex]) -> List[frozenset]:
    """One nonempty black channel of ge per b_i meeting {b_1..b_n} in {b_i} or not at all."""
    out = []
    avoiding = None
    for i, b in enumerate(bs):
        wit = _constrained_solve(ge, {x: int(j == i) for j, x in enumerate(bs)})
        if wit is None:
            if avoiding is None:
                avoiding = _avoiding_channel(ge, bs)
            if avoiding is None:
                raise PreconditionError(f"no channel of the edge-deleted graph routes through {b!r}")
            wit = avoiding
        out.append(wit)
    return out


def multi_route(
    g: Graph,
    edges: Sequence[Tuple[Vertex, Vertex]],
    witnesses: Optional[Sequence[ChannelLike]] = None,
) -> MultiRouteResult:
    """Remove the endpoints of disjoint edges at once; parity is kept, and dim C_B when every witness hits its b_i."""
    g.require_coloring()
    pairs = [_oriented(g, u, v) for u, v in edges]
    ends = [x for p in pairs for x in p]
    if len(set(ends)) != len(ends):
        raise PreconditionError("routed edges must be vertex-disjoint")
    ge = g
    for b, w in pairs:
        ge = ge.without_edge(b, w)
    gp = g.without_vertices(ends)
    bs = [b for b, _ in pairs]
    wits = [frozenset(x) for x in find_witnesses(ge, bs)] if witnesses is None else [_members(x) for x in witnesses]
    if len(wits) != len(pairs):
        raise PreconditionError(f"{len(pairs)} edges but {len(wits)} witnesses")
    b_set = set(bs)
    exact = True
    for i, (b, wit) in enumerate(zip(bs, wits)):
        _require_black_channel(ge, wit, f"witness {i}")
        if not wit:
            raise PreconditionError(f"witness {i} is empty")
        hit = wit & b_set
        if not hit <= {b}:
            raise PreconditionError(f"witness {i} contains other routed vertices {sorted(hit - {b}, key=g.index)!r}")
        exact = exact and b in hit

    before, after = matching_parity(g), matching_parity(gp)
    if before is not after:
        raise InvariantError(f"routing changed the parity: {before.value} -> {after.value}")
    dim_before = channel_count_exponent(g, ColorRestriction.BLACK_ONLY)
    dim_after = channel_count_exponent(gp, ColorRestriction.BLACK_ONLY)
    dimension_equal = None
    if exact:
        dimension_equal = dim_before == dim_after
        if not dimension_equal:
            raise InvariantError(f"dim C_B changed under exact routing: {dim_before} -> {dim_after}")
    return MultiRouteResult(True, dimension_equal, before, after, dim_before, dim_after)


def _route_rectangle(m: int, n: int, steps: List[Tuple[int, int]]) -> Parity:
    steps.append((m, n))
    if m > n:
        m, n = n, m
    if m == 0:
        return Parity.ODD
    if m == n:
        return Parity.EVEN
    g = GridRegion.rectangle(m, n).graph
    # black vertices of column m-1 against the white ones of column m
    cut = [((m - 1, y), (m, y)) for y in range(m) if (m - 1 + y) % 2 == 0]
    routed = multi_route(g, cut)
    left = _route_rectangle(m, m - 1, steps)
    right = _route_rectangle(m, n - m - 1, steps)
    combined = Parity.ODD if left is Parity.ODD and right is Parity.ODD else Parity.EVEN
    if routed.parity_after is not combined:
        raise InvariantError(f"bridges of R{m}x{n} do not split into R{m}x{m - 1} and R{m}x{n - m - 1}")
    return combined


def rectangle_parity_by_routing(m: int, n: int) -> RectangleRouting:
    """Parity of m(R_{m x n}) by cutting off an R_{m x (m-1)} block and recursing; checked against gcd(m+1, n+1)."""
    if m < 0 or n < 0:
        raise PreconditionError(f"rectangle sides must be non-negative, got {m}x{n}")
    steps: List[Tuple[int, int]] = []
    parity = _route_rectangle(m, n, steps)
    if (parity is Parity.ODD) != (math.gcd(m + 1, n + 1) == 1):
        raise InvariantError(f"R{m}x{n}: routed parity {parity.value} disagrees with gcd({m + 1}, {n + 1})")
    return RectangleRouting(m, n, parity, steps)


def canonical_pairing(g: Graph, c: ChannelLike) -> PairingFunction:
    """At each vertex, edges into c in neighbour order (parallel copies by index), paired off consecutively."""
    members = _members(c)
    if not is_channel(g, members):
        raise PreconditionError("pairing needs a channel")
    pairs: Dict[Vertex, Dict[EdgeRef, EdgeRef]] = {}
    for v in g.vertices:
        into = [g.edge_ref(v, x, k) for x in g.neighbors(v) if x in members for k in range(g.multiplicity(v, x))]
        table: Dict[EdgeRef, EdgeRef] = {}
        for a, b in zip(into[::2], into[1::2]):
            table[a] = b
            table[b] = a
        pairs[v] = table
    return PairingFunction(pairs)


def _other(e: EdgeRef, v: Vertex) -> Vertex:
    return e[1] if e[0] == v else e[0]


def cycle_flip(
    g: Graph,
    matching: Matching,
    c: ChannelLike,
    v0: Optional[Vertex] = None,
    pairing: Optional[PairingFunction] = None,
) -> CycleFlip:
    """Alternate matched edges and paired channel edges from v0 until a vertex repeats; flip the cycle found."""
    g.require_coloring()
    members = _members(c)
    if not members:
        raise PreconditionError("cycle flip needs a nonempty channel")
    if not is_perfect_matching(g, matching):
        raise PreconditionError("not a perfect matching")
    if v0 is None:
        v0 = min(members, key=g.index)
    elif v0 not in members:
        raise PreconditionError(f"start vertex {v0!r} is not in the channel")
    if pairing is None:
        pairing = canonical_pairing(g, members)

    walk: List[Vertex] = [v0]
    steps: List[EdgeRef] = []
    seen = {v0: 0}
    while True:
        v = walk[-1]
        if len(steps) % 2 == 0:
            e = matching.partner(v)[1]
        else:
            e = pairing(v, steps[-1])
        nxt = _other(e, v)
        steps.append(e)
        walk.append(nxt)
        if nxt in seen:
            start = seen[nxt]
            break
        seen[nxt] = len(walk) - 1

    cycle = steps[start:]
    if len(cycle) % 2 or start % 2:
        raise InvariantError(f"walk from {v0!r} closed on an odd cycle")
    if any((e in matching.edges) != (i % 2 == 0) for i, e in enumerate(cycle)):
        raise InvariantError("cycle does not alternate with the matching")
    flipped = symmetric_difference(matching, cycle)
    if not is_perfect_matching(g, flipped):
        raise InvariantError("flipped edge set is not a perfect matching")
    return CycleFlip(cycle, walk, flipped)


def check_flip_involution(g: Graph, matchings: Sequence[Matching], c: ChannelLike,
                          v0: Optional[Vertex] = None) -> int:
    """Flip every matching twice; returns the number of matchings, which is then even."""
    members = _members(c)
    pairing = canonical_pairing(g, members)
    known = set(m.edges for m in matchings)
    for m in matchings:
        first = cycle_flip(g, m, members, v0, pairing)
        if first.matching.edges == m.edges:
            raise InvariantError("cycle flip has a fixed point")
        if first.matching.edges not in known:
            raise InvariantError("cycle flip left the matching set")
        back = cycle_flip(g, first.matching, members, v0, pairing)
        if back.matching.edges != m.edges or set(back.cycle) != set(first.cycle):
            raise InvariantError("cycle flip is not an involution")
    if len(matchings) % 2:
        raise InvariantError(f"odd number of matchings ({len(matchings)}) despite a nonempty channel")
    return len(matchings)
