"""
Channel-preserving rewrites and the reducer built on them.

VC contracts a 2-valent vertex, ED deletes a doubled edge, FV removes a
forced pair (a leaf and its neighbour). Each leaves dim C, dim C_B and dim C_W
unchanged; removing an isolated vertex drops the dimension for its colour by one.
"""

from __future__ import annotations

import heapq
import logging
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .errors import InvariantError, PreconditionError
from .graph import Embedding, Graph, GridRegion, embedding_of
from .matching import count_matchings
from .models import DiagonalContraction, EdgeRef, Move, MoveKind, ParityRecord, ReductionTrace, Vertex

logger = logging.getLogger(__name__)

_Queue = List[Tuple[int, Vertex]]


class _Workspace:
    """A multigraph rewritten in place, keeping the vertex order of the graph it came from.

    With track=True it also keeps three heaps keyed by that order: leaves,
    vertices on a doubled edge and VC candidates. Entries go stale as moves
    apply and are dropped when they reach the top.
    """

    def __init__(self, g: Graph, track: bool = False):
        self.source = g
        self.order: Dict[Vertex, int] = {v: i for i, v in enumerate(g.vertices)}
        self.adj: Dict[Vertex, Dict[Vertex, int]] = {v: dict(g.adjacency(v)) for v in g.vertices}
        self.deg: Dict[Vertex, int] = {v: g.degree(v) for v in g.vertices}
        self.track = track
        self.leaves: _Queue = []
        self.doubled: _Queue = []
        self.twos: _Queue = []
        if track:
            for v in g.vertices:
                self._queue(v)

    # conditions

    def _require(self, v: Vertex) -> None:
        if v not in self.adj:
            raise PreconditionError(f"unknown vertex {v!r}")

    def is_leaf(self, v: Vertex) -> bool:
        return v in self.adj and self.deg[v] == 1

    def has_doubled(self, v: Vertex) -> bool:
        return v in self.adj and any(m >= 2 for m in self.adj[v].values())

    def is_two(self, v: Vertex) -> bool:
        return v in self.adj and self.deg[v] == 2 and len(self.adj[v]) == 2

    def _queue(self, v: Vertex) -> None:
        if not self.track or v not in self.adj:
            return
        key = (self.order[v], v)
        if self.is_leaf(v):
            heapq.heappush(self.leaves, key)
        if self.has_doubled(v):
            heapq.heappush(self.doubled, key)
        if self.is_two(v):
            heapq.heappush(self.twos, key)

    def _first(self, heap: _Queue, valid: Callable[[Vertex], bool]) -> Optional[Vertex]:
        while heap and not valid(heap[0][1]):
            heapq.heappop(heap)
        return heap[0][1] if heap else None

    def sorted_neighbors(self, v: Vertex) -> List[Vertex]:
        return sorted(self.adj[v], key=self.order.__getitem__)

    # edits

    def _drop_vertex(self, v: Vertex) -> Set[Vertex]:
        touched = set()
        for w, m in self.adj.pop(v).items():
            del self.adj[w][v]
            self.deg[w] -= m
            touched.add(w)
        del self.deg[v]
        return touched

    def _add_edges(self, u: Vertex, w: Vertex, m: int) -> None:
        self.adj[u][w] = self.adj[u].get(w, 0) + m
        self.adj[w][u] = self.adj[w].get(u, 0) + m
        self.deg[u] += m
        self.deg[w] += m

    def _requeue(self, vertices: Iterable[Vertex]) -> None:
        for v in vertices:
            self._queue(v)

    # moves

    def vc(self, v: Vertex) -> Move:
        self._require(v)
        if self.deg[v] != 2:
            raise PreconditionError(f"VC needs degree 2 at {v!r}, found {self.deg[v]}")
        if len(self.adj[v]) != 2:
            raise PreconditionError(f"VC at {v!r}: both edges go to the same neighbour")
        keep, drop = self.sorted_neighbors(v)
        between = self.adj[keep].get(drop, 0)
        touched = self._drop_vertex(v)
        if between:
            del self.adj[keep][drop], self.adj[drop][keep]
            self.deg[keep] -= between
            self.deg[drop] -= between
        moved = self.adj[drop]
        for w, m in list(moved.items()):
            del self.adj[w][drop]
            self.deg[w] -= m
            self._add_edges(keep, w, m)
            touched.add(w)
        del self.adj[drop], self.deg[drop]
        touched.discard(drop)
        touched.add(keep)
        self._requeue(touched)
        return Move(MoveKind.VC, {"v": v, "kept": keep, "merged": drop},
                    vertex_delta=-2, edge_delta=-(2 + between))

    def ed(self, u: Vertex, v: Vertex) -> Move:
        self._require(u)
        self._require(v)
        mult = self.adj[u].get(v, 0)
        if mult < 2:
            raise PreconditionError(f"ED needs two copies of {u!r}-{v!r} (multiplicity {mult})")
        a, b = sorted((u, v), key=self.order.__getitem__)
        if mult == 2:
            del self.adj[a][b], self.adj[b][a]
        else:
            self.adj[a][b] -= 2
            self.adj[b][a] -= 2
        self.deg[a] -= 2
        self.deg[b] -= 2
        self._requeue((a, b))
        return Move(MoveKind.ED, {"u": a, "v": b}, vertex_delta=0, edge_delta=-2)

    def fv(self, v1: Vertex, v2: Vertex) -> Move:
        self._require(v1)
        self._require(v2)
        if self.deg[v1] != 1:
            raise PreconditionError(f"FV needs degree 1 at {v1!r}, found {self.deg[v1]}")
        if self.adj[v1].get(v2, 0) != 1:
            raise PreconditionError(f"FV: {v1!r} is not adjacent to {v2!r}")
        lost = self.deg[v2]
        touched = self._drop_vertex(v1) | self._drop_vertex(v2)
        touched -= {v1, v2}
        self._requeue(touched)
        return Move(MoveKind.FV, {"v1": v1, "v2": v2}, vertex_delta=-2, edge_delta=-lost)

    def isolated(self, v: Vertex) -> Move:
        self._require(v)
        if self.deg[v] != 0:
            raise PreconditionError(f"{v!r} is not isolated")
        self._drop_vertex(v)
        return Move(MoveKind.ISOLATED, {"v": v}, vertex_delta=-1)

    def next_move(self) -> Optional[Move]:
        """FV at the first leaf, else ED at the first doubled edge, else VC at the first candidate."""
        v = self._first(self.leaves, self.is_leaf)
        if v is not None:
            return self.fv(v, next(iter(self.adj[v])))
        u = self._first(self.doubled, self.has_doubled)
        if u is not None:
            w = next(x for x in self.sorted_neighbors(u) if self.adj[u][x] >= 2)
            return self.ed(u, w)
        v = self._first(self.twos, self.is_two)
        if v is not None:
            return self.vc(v)
        return None

    def graph(self) -> Graph:
        g = self.source
        order = self.order
        vertices = [v for v in g.vertices if v in self.adj]
        edges = [(u, w, m) for u in vertices for w, m in self.adj[u].items() if order[w] > order[u]]
        coloring = {v: g.coloring[v] for v in vertices} if g.coloring is not None else None
        return Graph(vertices, edges, coloring, name=g.name)


def _single(g: Graph, apply: Callable[[_Workspace], Move]) -> Tuple[Graph, Move]:
    ws = _Workspace(g)
    move = apply(ws)
    return ws.graph(), move


def vc_move(g: Graph, v: Vertex) -> Tuple[Graph, Move]:
    return _single(g, lambda ws: ws.vc(v))


def apply_vc(g: Graph, v: Vertex) -> Graph:
    return vc_move(g, v)[0]


def _ed_pair(g: Graph, e1: EdgeRef, e2: EdgeRef) -> Tuple[Vertex, Vertex]:
    u, v, k1 = e1
    u2, v2, k2 = e2
    if {u, v} != {u2, v2}:
        raise PreconditionError(f"ED needs two copies of one edge, got {u!r}-{v!r} and {u2!r}-{v2!r}")
    mult = g.multiplicity(u, v)
    if k1 == k2 or not (0 <= k1 < mult and 0 <= k2 < mult):
        raise PreconditionError(f"ED needs two distinct copies of {u!r}-{v!r} (multiplicity {mult})")
    return u, v


def ed_move(g: Graph, e1: EdgeRef, e2: EdgeRef) -> Tuple[Graph, Move]:
    u, v = _ed_pair(g, e1, e2)
    return _single(g, lambda ws: ws.ed(u, v))


def apply_ed(g: Graph, e1: EdgeRef, e2: EdgeRef) -> Graph:
    return ed_move(g, e1, e2)[0]


def fv_move(g: Graph, v1: Vertex, v2: Vertex) -> Tuple[Graph, Move]:
    return _single(g, lambda ws: ws.fv(v1, v2))


def apply_fv(g: Graph, v1: Vertex, v2: Vertex) -> Graph:
    return fv_move(g, v1, v2)[0]


def isolated_move(g: Graph, v: Vertex) -> Tuple[Graph, Move]:
    return _single(g, lambda ws: ws.isolated(v))


def remove_isolated(g: Graph, v: Vertex) -> Graph:
    return isolated_move(g, v)[0]


def reduce(g: Graph) -> ReductionTrace:
    """Apply FV, then ED, then VC (first vertex in graph order each time) until none applies."""
    ws = _Workspace(g, track=True)
    trace = ReductionTrace(terminal=g)
    while True:
        move = ws.next_move()
        if move is None:
            break
        trace.moves.append(move)
        logger.debug("reduce %s: %s %s", g.name or "graph", move.kind.value, move.params)
    trace.terminal = ws.graph()
    if not trace.fully_reduced:
        logger.info("irreducible remainder: %d vertices, %d edges", len(trace.terminal), trace.terminal.edge_count)
    return trace


def _param(value: Any) -> Any:
    return tuple(value) if isinstance(value, list) else value


def apply_trace(g: Graph, moves: Iterable[Union[Move, Dict[str, Any]]]) -> Graph:
    """Replay a move list (Move objects or their JSON dicts)."""
    ws = _Workspace(g)
    for m in moves:
        if isinstance(m, dict):
            kind = MoveKind(m["kind"])
            params = {k: _param(v) for k, v in m.get("params", {}).items()}
        else:
            kind, params = m.kind, m.params
        if kind is MoveKind.VC:
            ws.vc(params["v"])
        elif kind is MoveKind.ED:
            ws.ed(params["u"], params["v"])
        elif kind is MoveKind.FV:
            ws.fv(params["v1"], params["v2"])
        elif kind is MoveKind.ISOLATED:
            ws.isolated(params["v"])
        else:
            raise PreconditionError(f"move kind {kind.value} is not replayable on its own")
    return ws.graph()


def reducible_inner_eulerian(g: Graph) -> bool:
    """True when the reducer leaves only isolated vertices."""
    return reduce(g).fully_reduced


# planar corner lemma


def external_degree_bound(host: Union[GridRegion, Embedding]) -> Tuple[int, int]:
    """(D, b): total degree of the external vertices and their number; D <= 3b - 4."""
    emb = embedding_of(host)
    g = emb.graph
    if len(g) < 2 or not g.is_connected():
        raise PreconditionError("needs a connected graph with at least two vertices")
    for v in emb.internal:
        if g.degree(v) < 4:
            raise PreconditionError(f"internal vertex {v!r} has degree {g.degree(v)} < 4")
    for key, verts in emb.faces.faces.items():
        if len(verts) < 4:
            raise PreconditionError(f"internal face {key!r} has degree {len(verts)} < 4")
    ext = [v for v in g.vertices if v in emb.external]
    return sum(g.degree(v) for v in ext), len(ext)


def find_low_degree_external(host: Union[GridRegion, Embedding]) -> Vertex:
    emb = embedding_of(host)
    external_degree_bound(emb)
    g = emb.graph
    for v in g.vertices:
        if v in emb.external and g.degree(v) <= 2:
            return v
    raise InvariantError("no external vertex of degree below 3")


# diagonal contraction


def _two_neighbors(g: Graph, v: Vertex) -> Tuple[Vertex, Vertex]:
    if g.degree(v) != 2:
        raise PreconditionError(f"VC needs degree 2 at {v!r}, found {g.degree(v)}")
    nbrs = g.neighbors(v)
    if len(nbrs) != 2:
        raise PreconditionError(f"VC at {v!r}: both edges go to the same neighbour")
    return nbrs[0], nbrs[1]


def _opposite(g: Graph, cur: Vertex, a: Vertex, b: Vertex) -> Optional[Vertex]:
    """The fourth corner of the square face cur-a-?-b, if there is one."""
    common = [w for w in g.neighbors(a) if w != cur and g.multiplicity(b, w)]
    if len(common) > 1:
        raise PreconditionError(f"diagonal through {cur!r} is ambiguous ({len(common)} candidate squares)")
    return common[0] if common else None


def _require_corner(g: Graph, corner: Vertex) -> None:
    a, b = _two_neighbors(g, corner)
    pts = (corner, a, b)
    if all(isinstance(p, tuple) and len(p) == 2 for p in pts):
        da = (a[0] - corner[0], a[1] - corner[1])
        db = (b[0] - corner[0], b[1] - corner[1])
        if abs(da[0]) + abs(da[1]) == 1 and abs(db[0]) + abs(db[1]) == 1 and da[0] * db[0] + da[1] * db[1] != 0:
            raise PreconditionError(f"{corner!r} is not a corner: its two edges are parallel")


def diagonal_contract(target: Union[GridRegion, Graph], corner: Vertex) -> DiagonalContraction:
    """Contract the diagonal from a degree-2 corner by VC/ED steps, ending with FV, VC or isolated removal.

    delta is 1 exactly when the last diagonal vertex ends isolated (original degree 2);
    the channel dimension for the corner's colour then drops by one.
    """
    g = target.graph if isinstance(target, GridRegion) else target
    g.index(corner)
    _require_corner(g, corner)
    original = g
    moves: List[Move] = []
    cur = corner
    delta = 0
    while True:
        a, b = _two_neighbors(g, cur)
        nxt = _opposite(g, cur, a, b)
        g, move = vc_move(g, cur)
        moves.append(move)
        if nxt is None:
            end = cur
            break
        kept = move.params["kept"]
        g, move = ed_move(g, (kept, nxt, 0), (kept, nxt, 1))
        moves.append(move)
        cur = nxt
        deg = g.degree(cur)
        if deg == 2 and len(g.adjacency(cur)) == 2:
            fa, fb = g.neighbors(cur)
            if _opposite(g, cur, fa, fb) is not None:
                continue
        end = cur
        if deg == 0:
            g, move = isolated_move(g, cur)
            delta = 1
        elif deg == 1:
            g, move = fv_move(g, cur, g.neighbors(cur)[0])
        elif deg == 2:
            g, move = vc_move(g, cur)
        else:
            raise PreconditionError(f"diagonal is not contractible at {cur!r} (degree {original.degree(cur)})")
        moves.append(move)
        break
    logger.debug("diagonal from %r ends at %r after %d moves, delta %d", corner, end, len(moves), delta)
    return DiagonalContraction(g, delta, corner, end, original.degree(end), moves)


def _collinear(points: Sequence[Vertex]) -> bool:
    (x0, y0), (x1, y1) = points[0], points[1]
    step = (x1 - x0, y1 - y0)
    if abs(step[0]) + abs(step[1]) != 1:
        return False
    return all(points[i] == (x0 + i * step[0], y0 + i * step[1]) for i in range(len(points)))


def parity_theorem(region: GridRegion, v1: Vertex, v2: Vertex, v3: Vertex, v4: Vertex,
                   cap: Optional[int] = None) -> ParityRecord:
    """m_G = 2^de * m(G_e') + 2^dv * m(G_v') mod 2 for a boundary run v1 v2 v3 v4."""
    g = region.graph
    run = (v1, v2, v3, v4)
    for v in run:
        g.index(v)
    if not _collinear(run):
        raise PreconditionError("v1..v4 must be consecutive collinear lattice points")
    emb = Embedding.of_region(region)
    for v in run:
        if v not in emb.external:
            raise PreconditionError(f"{v!r} is not an external vertex")
    for v in (v2, v3):
        if g.degree(v) != 3:
            raise PreconditionError(f"{v!r} must have degree 3, found {g.degree(v)}")
    ge = diagonal_contract(g.without_edge(v1, v2), v2)
    gv = diagonal_contract(g.without_vertices([v1, v2]), v3)
    record = ParityRecord(
        m_G=count_matchings(g, cap),
        m_Ge=count_matchings(ge.graph, cap),
        m_Gv=count_matchings(gv.graph, cap),
        delta_e=ge.delta,
        delta_v=gv.delta,
    )
    if not record.holds:
        raise InvariantError(
            f"parity relation fails: {record.m_G} vs 2^{record.delta_e}*{record.m_Ge} + 2^{record.delta_v}*{record.m_Gv}"
        )
    return record
