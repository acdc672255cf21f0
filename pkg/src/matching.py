from __future__ import annotations

import logging
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import CapExceededError, PreconditionError
from .gf2 import adjacency_mod2, bipartite_adjacency_mod2, det_mod2
from .graph import Graph
from .models import EdgeRef, Matching, Parity
from .utils import load_config

logger = logging.getLogger(__name__)


def _caps() -> Tuple[int, int]:
    oracle = load_config()["oracle"]
    return int(oracle["enumerate_max_vertices"]), int(oracle["count_max_vertices"])


class _Brancher:
    """Vertex-removal recursion over bitmasks of remaining vertices."""

    def __init__(self, g: Graph):
        self.g = g
        self.n = len(g)
        self.nbrs: List[List[Tuple[int, int]]] = []
        for v in g.vertices:
            row = sorted((g.index(w), m) for w, m in g.adjacency(v).items())
            self.nbrs.append(row)
        self.memo: Dict[int, int] = {0: 1}

    def branch_vertex(self, mask: int) -> Tuple[int, int]:
        """Minimum current degree (with multiplicity), ties by vertex order."""
        best, best_deg = -1, -1
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            deg = sum(mult for j, mult in self.nbrs[i] if mask >> j & 1)
            if best < 0 or deg < best_deg:
                best, best_deg = i, deg
                if deg == 0:
                    break
        return best, best_deg

    def count(self, mask: int) -> int:
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        if bin(mask).count("1") % 2:
            self.memo[mask] = 0
            return 0
        v, deg = self.branch_vertex(mask)
        total = 0
        if deg > 0:
            rest = mask & ~(1 << v)
            for w, mult in self.nbrs[v]:
                if rest >> w & 1:
                    total += mult * self.count(rest & ~(1 << w))
        self.memo[mask] = total
        return total

    def enumerate(self, mask: int) -> Iterator[List[Tuple[int, int, int]]]:
        if mask == 0:
            yield []
            return
        if self.count(mask) == 0:
            return
        v, _ = self.branch_vertex(mask)
        rest = mask & ~(1 << v)
        for w, mult in self.nbrs[v]:
            if not rest >> w & 1:
                continue
            sub = rest & ~(1 << w)
            if self.count(sub) == 0:
                continue
            for k in range(mult):
                for tail in self.enumerate(sub):
                    yield [(v, w, k)] + tail


def _full_mask(n: int) -> int:
    return (1 << n) - 1


def count_matchings(g: Graph, cap: Optional[int] = None) -> int:
    """Exact number of perfect matchings (parallel edges counted separately)."""
    if cap is None:
        cap = _caps()[1]
    if len(g) > cap:
        raise CapExceededError(f"{len(g)} vertices exceeds the counting cap of {cap}")
    br = _Brancher(g)
    total = br.count(_full_mask(br.n))
    logger.debug("count_matchings %s: %d (memo %d states)", g.name or "graph", total, len(br.memo))
    return total


def enumerate_matchings(g: Graph, cap: Optional[int] = None) -> List[Matching]:
    if cap is None:
        cap = _caps()[0]
    if len(g) > cap:
        raise CapExceededError(f"{len(g)} vertices exceeds the enumeration cap of {cap}")
    br = _Brancher(g)
    verts = g.vertices
    out = []
    for raw in br.enumerate(_full_mask(br.n)):
        out.append(Matching(frozenset(g.edge_ref(verts[i], verts[j], k) for i, j, k in raw)))
    return out


def matching_parity(g: Graph) -> Parity:
    """Parity of m_G from the determinant of the adjacency matrix mod 2."""
    if len(g) % 2:
        return Parity.EVEN
    if g.is_colored():
        if len(g.black()) != len(g.white()):
            return Parity.EVEN
        det = det_mod2(bipartite_adjacency_mod2(g))
    else:
        det = det_mod2(adjacency_mod2(g))
    return Parity.ODD if det else Parity.EVEN


def is_perfect_matching(g: Graph, matching: Matching) -> bool:
    covered = set()
    for u, v, k in matching.edges:
        if k >= g.multiplicity(u, v) or u in covered or v in covered:
            return False
        covered.update((u, v))
    return covered == set(g.vertices)


def deletion_identities(g: Graph, u, v) -> Tuple[int, int, int]:
    """(m_G, m_{G-e}, m_{G-{u,v}}) for one copy e of the edge u-v."""
    if g.multiplicity(u, v) == 0:
        raise PreconditionError(f"{u!r}-{v!r} is not an edge")
    return (
        count_matchings(g),
        count_matchings(g.without_edge(u, v)),
        count_matchings(g.without_vertices([u, v])),
    )


def matching_edges(g: Graph, pairs) -> Matching:
    """Matching from plain vertex pairs (first parallel copy of each)."""
    return Matching(frozenset(g.edge_ref(u, v, 0) for u, v in pairs))


def symmetric_difference(a: Matching, edges: List[EdgeRef]) -> Matching:
    return Matching(frozenset(a.edges.symmetric_difference(edges)))
