from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import ColoringError, PreconditionError, RegionParseError, UnsupportedInputError
from .models import Color, EdgeRef, FaceKey, Point, Vertex, vertex_json
from .utils import graph_id

logger = logging.getLogger(__name__)

Dart = Tuple[Vertex, Vertex, int]

# counterclockwise lattice directions: E, N, W, S
LATTICE_DIRECTIONS: Tuple[Point, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))


def lattice_color(p: Point) -> Color:
    return Color.BLACK if (p[0] + p[1]) % 2 == 0 else Color.WHITE


class Graph:
    """Finite undirected multigraph without self-loops, optionally 2-colored.

    Vertex order is the order given at construction; it fixes matrix indices,
    tie-breaking and every basis this package reports.
    """

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Sequence] = (),
        coloring: Optional[Mapping[Vertex, Color]] = None,
        name: str = "",
    ):
        self.vertices: Tuple[Vertex, ...] = tuple(vertices)
        self._index: Dict[Vertex, int] = {}
        for i, v in enumerate(self.vertices):
            if v in self._index:
                raise PreconditionError(f"duplicate vertex id {v!r}")
            self._index[v] = i
        self._adj: Dict[Vertex, Dict[Vertex, int]] = {v: {} for v in self.vertices}
        for e in edges:
            u, v = e[0], e[1]
            mult = int(e[2]) if len(e) > 2 else 1
            if u == v:
                raise PreconditionError(f"self-loop at {u!r}")
            if u not in self._index or v not in self._index:
                raise PreconditionError(f"edge {u!r}-{v!r} uses an unknown vertex")
            if mult < 0:
                raise PreconditionError(f"negative multiplicity on {u!r}-{v!r}")
            if mult == 0:
                continue
            self._adj[u][v] = self._adj[u].get(v, 0) + mult
            self._adj[v][u] = self._adj[v].get(u, 0) + mult
        self.coloring: Optional[Dict[Vertex, Color]] = None
        if coloring is not None:
            self.coloring = {v: Color(coloring[v]) for v in self.vertices if v in coloring}
            if len(self.coloring) != len(self.vertices):
                missing = [v for v in self.vertices if v not in self.coloring]
                raise ColoringError(f"coloring misses vertices {missing[:5]!r}")
            for u, v, _ in self.edges():
                if self.coloring[u] == self.coloring[v]:
                    raise ColoringError(f"edge {u!r}-{v!r} joins two {self.coloring[u].name} vertices")
        self.name = name

    # basic queries

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def __repr__(self) -> str:
        return f"Graph(name={self.name!r}, |V|={len(self.vertices)}, |E|={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and self._adj == other._adj
            and (self.coloring or None) == (other.coloring or None)
        )

    __hash__ = None  # type: ignore[assignment]

    def index(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise PreconditionError(f"unknown vertex {v!r}") from None

    def adjacency(self, v: Vertex) -> Mapping[Vertex, int]:
        """Neighbor -> multiplicity. Read-only view; do not mutate."""
        return self._adj[v]

    def neighbors(self, v: Vertex) -> List[Vertex]:
        idx = self._index
        return sorted(self._adj[v], key=idx.__getitem__)

    def degree(self, v: Vertex) -> int:
        return sum(self._adj[v].values())

    def multiplicity(self, u: Vertex, v: Vertex) -> int:
        return self._adj[u].get(v, 0)

    @property
    def edge_count(self) -> int:
        return sum(self.degree(v) for v in self.vertices) // 2

    def edges(self) -> List[Tuple[Vertex, Vertex, int]]:
        """(u, v, multiplicity) with u before v, sorted by vertex order."""
        idx = self._index
        out = []
        for u in self.vertices:
            iu = idx[u]
            for v, m in self._adj[u].items():
                if idx[v] > iu:
                    out.append((u, v, m))
        out.sort(key=lambda e: (idx[e[0]], idx[e[1]]))
        return out

    def edge_ref(self, u: Vertex, v: Vertex, k: int = 0) -> EdgeRef:
        if self._index[u] > self._index[v]:
            u, v = v, u
        return (u, v, k)

    def edge_refs(self) -> List[EdgeRef]:
        return [(u, v, k) for u, v, m in self.edges() for k in range(m)]

    def is_colored(self) -> bool:
        return self.coloring is not None

    def color(self, v: Vertex) -> Color:
        if self.coloring is None:
            raise ColoringError("graph has no coloring")
        return self.coloring[v]

    def black(self) -> List[Vertex]:
        return [v for v in self.vertices if self.color(v) is Color.BLACK]

    def white(self) -> List[Vertex]:
        return [v for v in self.vertices if self.color(v) is Color.WHITE]

    def require_coloring(self) -> None:
        if self.coloring is None:
            raise ColoringError(f"{self.name or 'graph'} has no bipartite coloring")

    # derived graphs

    def _derived(self, vertices: Iterable[Vertex], edges: Iterable[Sequence], name: Optional[str] = None) -> "Graph":
        vertices = list(vertices)
        coloring = {v: self.coloring[v] for v in vertices} if self.coloring is not None else None
        return Graph(vertices, edges, coloring, name=self.name if name is None else name)

    def induced(self, keep: Iterable[Vertex], name: Optional[str] = None) -> "Graph":
        keep_set = set(keep)
        vs = [v for v in self.vertices if v in keep_set]
        es = [(u, v, m) for u, v, m in self.edges() if u in keep_set and v in keep_set]
        return self._derived(vs, es, name)

    def without_vertices(self, drop: Iterable[Vertex]) -> "Graph":
        drop_set = set(drop)
        for v in drop_set:
            self.index(v)
        return self.induced(v for v in self.vertices if v not in drop_set)

    def without_edge(self, u: Vertex, v: Vertex, count: int = 1) -> "Graph":
        if self.multiplicity(u, v) < count:
            raise PreconditionError(f"graph has fewer than {count} edge(s) {u!r}-{v!r}")
        es = []
        for a, b, m in self.edges():
            if {a, b} == {u, v}:
                m -= count
            es.append((a, b, m))
        return self._derived(self.vertices, es)

    def relabeled(self, mapping: Mapping[Vertex, Vertex]) -> "Graph":
        vs = [mapping.get(v, v) for v in self.vertices]
        es = [(mapping.get(u, u), mapping.get(v, v), m) for u, v, m in self.edges()]
        coloring = None
        if self.coloring is not None:
            coloring = {mapping.get(v, v): c for v, c in self.coloring.items()}
        return Graph(vs, es, coloring, name=self.name)

    # interop

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for u, v, m in self.edges():
            for _ in range(m):
                g.add_edge(u, v)
        return g

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return nx.is_connected(self.to_networkx())

    def components(self) -> List[List[Vertex]]:
        idx = self._index
        comps = [sorted(c, key=idx.__getitem__) for c in nx.connected_components(self.to_networkx())]
        comps.sort(key=lambda c: idx[c[0]])
        return comps

    def canonical(self) -> str:
        parts = [",".join(_id_key(v) for v in self.vertices)]
        parts.append(";".join(f"{_id_key(u)}-{_id_key(v)}x{m}" for u, v, m in self.edges()))
        if self.coloring is not None:
            parts.append("".join(self.coloring[v].value for v in self.vertices))
        return "|".join(parts)

    @property
    def id(self) -> str:
        return graph_id(self.canonical(), self.name)

    def to_json_dict(self) -> dict:
        out = {
            "vertices": [vertex_json(v) for v in self.vertices],
            "edges": [[vertex_json(u), vertex_json(v), m] for u, v, m in self.edges()],
        }
        if self.coloring is not None:
            out["colors"] = {_id_key(v): self.coloring[v].value for v in self.vertices}
        if self.name:
            out["name"] = self.name
        return out


def _id_key(v: Vertex) -> str:
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return str(v)


def _json_vertex(v) -> Vertex:
    if isinstance(v, list):
        return tuple(v)
    return v


def graph_from_json(text_or_obj: Union[str, dict], name: str = "") -> Graph:
    """Graph-JSON: {vertices: [id...], colors: {id: "B"|"W"}, edges: [[id, id, multiplicity]...]}."""
    try:
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    except json.JSONDecodeError as e:
        raise RegionParseError(f"invalid graph JSON: {e.msg}", line=e.lineno, column=e.colno) from None
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise RegionParseError("graph JSON needs a 'vertices' array")
    vertices = [_json_vertex(v) for v in obj["vertices"]]
    edges = []
    for e in obj.get("edges", []):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise RegionParseError(f"bad edge entry {e!r}")
        edges.append((_json_vertex(e[0]), _json_vertex(e[1]), e[2] if len(e) == 3 else 1))
    coloring = None
    colors = obj.get("colors")
    if colors:
        by_key = {_id_key(v): v for v in vertices}
        coloring = {}
        for k, c in colors.items():
            if k not in by_key:
                raise RegionParseError(f"color given for unknown vertex {k!r}")
            if c not in ("B", "W"):
                raise RegionParseError(f"color of {k!r} must be 'B' or 'W'")
            coloring[by_key[k]] = Color(c)
    try:
        return Graph(vertices, edges, coloring, name=obj.get("name", name))
    except PreconditionError as e:
        raise RegionParseError(str(e)) from None


def graph_to_json(g: Graph) -> str:
    return json.dumps(g.to_json_dict(), sort_keys=True)


class GridRegion:
    """Finite set of lattice points with all unit-length edges between them.

    Vertices are the points themselves, ordered row by row from the top line
    of the region file (decreasing y, then increasing x); Black iff x + y is even.
    """

    def __init__(self, points: Iterable[Point], name: str = ""):
        self.points: FrozenSet[Point] = frozenset((int(x), int(y)) for x, y in points)
        self.name = name
        self._graph: Optional[Graph] = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridRegion):
            return NotImplemented
        return self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self.points

    def __repr__(self) -> str:
        return f"GridRegion(name={self.name!r}, points={len(self.points)})"

    @property
    def ordered(self) -> List[Point]:
        return sorted(self.points, key=lambda p: (-p[1], p[0]))

    @property
    def graph(self) -> Graph:
        if self._graph is None:
            pts = self.ordered
            edges = []
            for x, y in pts:
                for q in ((x + 1, y), (x, y + 1)):
                    if q in self.points:
                        edges.append(((x, y), q))
            self._graph = Graph(pts, edges, {p: lattice_color(p) for p in pts}, name=self.name)
        return self._graph

    def has_cell(self, ll: Point) -> bool:
        x, y = ll
        pts = self.points
        return (x, y) in pts and (x + 1, y) in pts and (x, y + 1) in pts and (x + 1, y + 1) in pts

    def cells(self) -> List[Point]:
        """Lower-left corners of the unit squares with all 4 corners present, in (x, y) order."""
        return sorted(p for p in self.points if self.has_cell(p))

    def bbox(self) -> Tuple[int, int, int, int]:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)

    def translate(self, dx: int, dy: int) -> "GridRegion":
        return GridRegion(((x + dx, y + dy) for x, y in self.points), name=self.name)

    def normalized(self) -> "GridRegion":
        if not self.points:
            return self
        x0, y0, _, _ = self.bbox()
        return self.translate(-x0, -y0)

    def inner(self) -> "GridRegion":
        emb = Embedding.of_region(self)
        return GridRegion(emb.internal, name=self.name)

    def with_name(self, name: str) -> "GridRegion":
        return GridRegion(self.points, name=name)

    # constructors

    @classmethod
    def rectangle(cls, m: int, n: int, x0: int = 0, y0: int = 0) -> "GridRegion":
        """R_{m x n}: m rows of n vertices."""
        return cls(((x0 + x, y0 + y) for x in range(n) for y in range(m)), name=f"R{m}x{n}")

    @classmethod
    def box(cls, x0: int, y0: int, x1: int, y1: int) -> "GridRegion":
        return cls((x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1))

    @classmethod
    def union(cls, *regions: "GridRegion", name: str = "") -> "GridRegion":
        pts: set = set()
        for r in regions:
            pts |= r.points
        return cls(pts, name=name)

    @classmethod
    def from_cells(cls, cells: Iterable[Point], name: str = "") -> "GridRegion":
        pts = set()
        for x, y in cells:
            pts.update(((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)))
        return cls(pts, name=name)

    @classmethod
    def aztec_diamond(cls, n: int) -> "GridRegion":
        """Rank-n Aztec diamond: points with |x - 1/2| + |y - 1/2| <= n."""
        pts = [
            (x, y)
            for x in range(-n, n + 2)
            for y in range(-n, n + 2)
            if abs(2 * x - 1) + abs(2 * y - 1) <= 2 * n
        ]
        return cls(pts, name=f"aztec{n}")


def from_region_file(text: str, name: str = "") -> GridRegion:
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    points = []
    for r, line in enumerate(lines):
        for c, ch in enumerate(line):
            if ch == "#":
                points.append((c, len(lines) - 1 - r))
            elif ch != ".":
                raise RegionParseError(f"illegal character {ch!r}", line=r + 1, column=c + 1)
    if not points:
        raise RegionParseError("region has no '#' cells")
    return GridRegion(points, name=name)


def to_region_file(region: GridRegion) -> str:
    if not region.points:
        return ""
    x0, y0, x1, y1 = region.bbox()
    rows = []
    for y in range(y1, y0 - 1, -1):
        rows.append("".join("#" if (x, y) in region.points else "." for x in range(x0, x1 + 1)))
    return "\n".join(rows)


@dataclass
class RotationSystem:
    """Counterclockwise cyclic order of outgoing darts at every vertex.

    A dart (u, v, k) is copy k of edge u-v traversed from u. The face to the
    left of a dart is the one swept counterclockwise from it to the next dart.
    `outer` is any dart with the external face on its left.
    """

    order: Dict[Vertex, List[Dart]]
    outer: Optional[Dart] = None
    _pos: Dict[Dart, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._pos = {}
        for v, darts in self.order.items():
            for i, d in enumerate(darts):
                if d[0] != v:
                    raise PreconditionError(f"dart {d!r} listed at {v!r}")
                self._pos[d] = i

    def next_dart(self, d: Dart) -> Dart:
        """Face walk step: after arriving along d, leave along the clockwise neighbor of its reverse."""
        u, v, k = d
        rev = (v, u, k)
        darts = self.order[v]
        return darts[self._pos[rev] - 1]

    def insert_after(self, anchor: Dart, new: Dart) -> None:
        v = anchor[0]
        darts = self.order[v]
        darts.insert(self._pos[anchor] + 1, new)
        for i, d in enumerate(darts):
            self._pos[d] = i

    def add_vertex(self, v: Vertex, darts: List[Dart]) -> None:
        self.order[v] = list(darts)
        for i, d in enumerate(self.order[v]):
            self._pos[d] = i

    def check(self, g: Graph) -> None:
        expected = {(u, v, k) for u, v, m in g.edges() for k in range(m)}
        expected |= {(v, u, k) for u, v, k in expected}
        if set(self._pos) != expected:
            raise PreconditionError("rotation system darts do not match the graph's edges")

    @classmethod
    def from_positions(
        cls, g: Graph, positions: Optional[Mapping[Vertex, Tuple[float, float]]] = None
    ) -> "RotationSystem":
        """Angular order from straight-line coordinates (vertex ids are used when no positions are given)."""
        pos = positions or {v: v for v in g.vertices}
        order: Dict[Vertex, List[Dart]] = {}
        for v in g.vertices:
            px, py = pos[v]
            darts = []
            for w, m in g.adjacency(v).items():
                qx, qy = pos[w]
                angle = math.atan2(qy - py, qx - px)
                for k in range(m):
                    darts.append((angle, k, (v, w, k)))
            darts.sort(key=lambda t: (t[0], t[1]))
            order[v] = [d for _, _, d in darts]
        outer = None
        live = [v for v in g.vertices if order[v]]
        if live:
            v0 = min(live, key=lambda v: (pos[v][0], pos[v][1]))
            # at the leftmost-lowest vertex the external face opens westwards,
            # just counterclockwise of the dart with the largest angle
            outer = order[v0][-1]
        return cls(order, outer)

    @classmethod
    def of_region(cls, region: GridRegion) -> "RotationSystem":
        return cls.from_positions(region.graph)


def trace_faces(g: Graph, rotation: RotationSystem) -> List[List[Dart]]:
    """Closed face walks; each dart lies on exactly one walk."""
    seen = set()
    walks = []
    for v in g.vertices:
        for d in rotation.order.get(v, []):
            if d in seen:
                continue
            walk = []
            cur = d
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = rotation.next_dart(cur)
            walks.append(walk)
    return walks


@dataclass
class FaceSet:
    faces: Dict[FaceKey, Tuple[Vertex, ...]] = field(default_factory=dict)
    external_degree: int = 0

    def __len__(self) -> int:
        return len(self.faces)

    def keys(self) -> List[FaceKey]:
        return list(self.faces)

    def degree(self, key: FaceKey) -> int:
        return len(self.faces[key])


@dataclass
class Embedding:
    """Faces of a plane graph plus, around every vertex, the counterclockwise
    sequence of sectors labelled by internal face key (None = not internal)."""

    graph: Graph
    faces: FaceSet
    sectors: Dict[Vertex, Tuple[Optional[FaceKey], ...]]
    internal: FrozenSet[Vertex]
    external: FrozenSet[Vertex]
    external_walk: Tuple[Dart, ...] = ()
    region: Optional[GridRegion] = None

    def internal_faces_at(self, v: Vertex) -> List[FaceKey]:
        return [f for f in self.sectors[v] if f is not None]

    def is_pinched(self, v: Vertex) -> bool:
        fs = self.internal_faces_at(v)
        return len(fs) != len(set(fs))

    @classmethod
    def of_region(cls, region: GridRegion) -> "Embedding":
        g = region.graph
        cells = region.cells()
        cell_set = set(cells)
        faces = {ll: (ll, (ll[0] + 1, ll[1]), (ll[0] + 1, ll[1] + 1), (ll[0], ll[1] + 1)) for ll in cells}
        # quadrant cell between direction i and direction i+1 (counterclockwise)
        quadrant = ((0, 0), (-1, 0), (-1, -1), (0, -1))
        sectors: Dict[Vertex, Tuple[Optional[FaceKey], ...]] = {}
        internal = set()
        for p in g.vertices:
            x, y = p
            present = [i for i, (dx, dy) in enumerate(LATTICE_DIRECTIONS) if (x + dx, y + dy) in region.points]
            row: List[Optional[FaceKey]] = []
            for j, i in enumerate(present):
                nxt = present[(j + 1) % len(present)]
                key = None
                if len(present) > 1 and nxt == (i + 1) % 4:
                    qx, qy = quadrant[i]
                    ll = (x + qx, y + qy)
                    key = ll if ll in cell_set else None
                row.append(key)
            sectors[p] = tuple(row)
            if len(row) == 4 and all(k is not None for k in row):
                internal.add(p)
        external = frozenset(g.vertices) - internal
        ext_degree = 2 * g.edge_count - 4 * len(cells)
        return cls(g, FaceSet(faces, ext_degree), sectors, frozenset(internal), external, (), region)

    @classmethod
    def of_rotation(cls, g: Graph, rotation: RotationSystem) -> "Embedding":
        if not g.is_connected():
            raise PreconditionError("face data needs a connected graph")
        rotation.check(g)
        walks = trace_faces(g, rotation)
        if walks and rotation.outer is None:
            raise UnsupportedInputError("rotation system does not mark the external face")
        dart_face: Dict[Dart, Optional[FaceKey]] = {}
        faces: Dict[FaceKey, Tuple[Vertex, ...]] = {}
        external_walk: Tuple[Dart, ...] = ()
        for walk in walks:
            if rotation.outer in walk:
                external_walk = tuple(walk)
                key = None
            else:
                key = len(faces)
                faces[key] = tuple(d[0] for d in walk)
            for d in walk:
                dart_face[d] = key
        sectors = {v: tuple(dart_face[d] for d in rotation.order.get(v, [])) for v in g.vertices}
        internal = frozenset(v for v in g.vertices if sectors[v] and all(k is not None for k in sectors[v]))
        external = frozenset(g.vertices) - internal
        return cls(g, FaceSet(faces, len(external_walk)), sectors, internal, external, external_walk)


HostLike = Union[GridRegion, Embedding, Graph, Tuple[Graph, RotationSystem]]


def embedding_of(host: HostLike) -> Embedding:
    """Face data for a region, an embedding, a (graph, rotation) pair, or a graph labelled by lattice points."""
    if isinstance(host, Embedding):
        return host
    if isinstance(host, GridRegion):
        return Embedding.of_region(host)
    if isinstance(host, tuple):
        g, rotation = host
        return Embedding.of_rotation(g, rotation)
    if isinstance(host, Graph):
        return Embedding.of_rotation(host, RotationSystem.from_positions(host))
    raise PreconditionError(f"cannot embed {type(host).__name__}")


def internal_faces(region: GridRegion) -> FaceSet:
    return Embedding.of_region(region).faces


def classify_vertices(host: HostLike) -> Tuple[FrozenSet[Vertex], FrozenSet[Vertex]]:
    """(internal, external) vertex sets."""
    emb = embedding_of(host)
    if not emb.graph.is_connected():
        raise PreconditionError("vertex classification needs a connected region")
    return emb.internal, emb.external


def inner_subgraph(host: HostLike) -> Graph:
    emb = embedding_of(host)
    return emb.graph.induced(emb.internal)


def outer_subgraph(host: HostLike) -> Graph:
    emb = embedding_of(host)
    return emb.graph.induced(emb.external)


def outer_subgraph_is_simple_cycle(host: HostLike) -> bool:
    outer = outer_subgraph(host)
    if len(outer) < 3:
        return False
    for u, v, m in outer.edges():
        if m != 1:
            return False
    if any(outer.degree(v) != 2 for v in outer.vertices):
        return False
    return outer.is_connected()
