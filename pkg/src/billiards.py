"""
Billiard nests on inner semi-Eulerian plane graphs.

A nest is a set of internal faces that, around every internal black vertex,
takes all, none or every second face, and around every external black vertex
all or none. The path basis is the set of connected components of the face
graph G_B; for square-lattice regions it is also found from two sorts of the
boundary black vertices along the two diagonal directions.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .channels import channel_count_exponent
from .errors import InvariantError, PreconditionError, UnsupportedInputError
from .graph import (
    Embedding,
    Graph,
    GridRegion,
    HostLike,
    RotationSystem,
    embedding_of,
    inner_subgraph,
    outer_subgraph_is_simple_cycle,
)
from .models import (
    BilliardPathBasis,
    BilliardTrajectory,
    Channel,
    Color,
    ColorRestriction,
    FaceKey,
    FastBasisSummary,
    Parity,
    Point,
    RectangleFacts,
    Vertex,
)
from .utils import UnionFind

logger = logging.getLogger(__name__)

# prefix of the cycle vertices added by outer_completion
COMPLETION_TAG = "Y"


def _black_vertices(emb: Embedding) -> List[Vertex]:
    emb.graph.require_coloring()
    return emb.graph.black()


def is_inner_semi_eulerian(host: HostLike) -> bool:
    emb = embedding_of(host)
    g = emb.graph
    for b in _black_vertices(emb):
        if b in emb.internal and g.degree(b) % 2:
            logger.debug("internal black vertex %r has odd degree %d", b, g.degree(b))
            return False
    return True


def _faces_around(emb: Embedding, b: Vertex) -> List[FaceKey]:
    fs = emb.internal_faces_at(b)
    if b in emb.internal and len(fs) != len(set(fs)):
        raise UnsupportedInputError(f"face incidence repeats around internal black vertex {b!r}")
    return fs


def validate_nest(host: HostLike, faces: Iterable[FaceKey]) -> bool:
    emb = embedding_of(host)
    nest = frozenset(faces)
    unknown = nest - set(emb.faces.faces)
    if unknown:
        raise PreconditionError(f"unknown face id(s) {sorted(map(repr, unknown))[:3]}")
    for b in _black_vertices(emb):
        fs = _faces_around(emb, b)
        if not fs:
            continue
        bits = [f in nest for f in fs]
        if all(bits) or not any(bits):
            continue
        if b not in emb.internal:
            return False
        if len(bits) % 2 or any(bits[i] == bits[(i + 1) % len(bits)] for i in range(len(bits))):
            return False
    return True


def _sorted_groups(uf: UnionFind, order: Dict[FaceKey, int]) -> List[FrozenSet[FaceKey]]:
    groups = [sorted(g, key=order.__getitem__) for g in uf.groups()]
    groups.sort(key=lambda g: order[g[0]])
    return [frozenset(g) for g in groups]


def path_basis(host: HostLike) -> BilliardPathBasis:
    """Connected components of G_B, ordered by their first face."""
    emb = embedding_of(host)
    if not is_inner_semi_eulerian(emb):
        raise PreconditionError("host is not inner semi-Eulerian")
    order = {f: i for i, f in enumerate(emb.faces.keys())}
    uf = UnionFind(order)
    for b in _black_vertices(emb):
        fs = _faces_around(emb, b)
        if b in emb.internal:
            for i in range(len(fs)):
                uf.union(fs[i], fs[(i + 2) % len(fs)])
        else:
            for f in fs[1:]:
                uf.union(fs[0], f)
    basis = BilliardPathBasis(_sorted_groups(uf, order))
    logger.debug("path basis: %d faces, %d paths", len(order), basis.d)
    return basis


def nest_span(basis: BilliardPathBasis, subset: Iterable[int]) -> FrozenSet[FaceKey]:
    out: set = set()
    for i in set(subset):
        if not 0 <= i < basis.d:
            raise PreconditionError(f"path index {i} outside 0..{basis.d - 1}")
        out |= basis.paths[i]
    return frozenset(out)


def nest_to_channel(host: HostLike, nest: Iterable[FaceKey]) -> Channel:
    """ch(B): internal black vertices with exactly half of their faces in B."""
    emb = embedding_of(host)
    nest = frozenset(nest)
    if not validate_nest(emb, nest):
        raise PreconditionError("face set is not a billiard nest")
    inner = emb.graph.induced(emb.internal)
    members = []
    for b in _black_vertices(emb):
        if b not in emb.internal:
            continue
        fs = emb.internal_faces_at(b)
        if 2 * sum(1 for f in fs if f in nest) == len(fs):
            members.append(b)
    return Channel(frozenset(members), inner.id)


# lattice regions


def _boundary_walk(region: GridRegion) -> Tuple[Embedding, RotationSystem]:
    g = region.graph
    if not g.vertices:
        raise PreconditionError("empty region")
    if not g.is_connected():
        raise PreconditionError(f"region {region.name or '(unnamed)'} is not connected")
    rotation = RotationSystem.of_region(region)
    return Embedding.of_rotation(g, rotation), rotation


def require_simple_filled(region: GridRegion) -> None:
    """Boundary is a simple cycle and every bounded face is a unit cell."""
    emb, _ = _boundary_walk(region)
    seen = set()
    for u, _, _ in emb.external_walk:
        if u in seen:
            raise PreconditionError(f"boundary passes twice through {u!r}")
        seen.add(u)
    if len(seen) < 4:
        raise PreconditionError("region has no unit cell")
    for key, verts in emb.faces.faces.items():
        if len(verts) != 4:
            raise PreconditionError(f"bounded face through {verts[0]!r} is not a unit cell")


def is_simple_filled(region: GridRegion) -> bool:
    try:
        require_simple_filled(region)
    except PreconditionError:
        return False
    return True


def _boundary_black(region: GridRegion) -> List[Point]:
    emb = Embedding.of_region(region)
    return [p for p in region.graph.black() if p in emb.external]


def _diagonal_links(points: Sequence[Point]) -> Tuple[List[Tuple[Point, Point]], List[Tuple[Point, Point]]]:
    """Consecutive pairs of the (b+, b-) and (b-, b+) sorts."""
    plus = sorted(points, key=lambda p: (p[1] - p[0], p[1] + p[0]))
    minus = sorted(points, key=lambda p: (p[1] + p[0], p[1] - p[0]))
    return list(zip(plus, plus[1:])), list(zip(minus, minus[1:]))


def fast_path_basis(region: GridRegion) -> FastBasisSummary:
    require_simple_filled(region)
    boundary = _boundary_black(region)
    uf = UnionFind(boundary)
    up_right, up_left = _diagonal_links(boundary)
    for v, nxt in up_right:
        if region.has_cell(v):
            if nxt[1] - nxt[0] != v[1] - v[0]:
                raise InvariantError(f"diagonal from {v!r} leaves no boundary vertex on its line")
            uf.union(v, nxt)
    for v, nxt in up_left:
        if region.has_cell((v[0] - 1, v[1])):
            if nxt[1] + nxt[0] != v[1] + v[0]:
                raise InvariantError(f"anti-diagonal from {v!r} leaves no boundary vertex on its line")
            uf.union(v, nxt)
    components = uf.groups()
    logger.debug("fast path basis on %s: %d boundary black vertices, %d components",
                 region.name or "region", len(boundary), len(components))
    return FastBasisSummary(len(components), components)


def outer_completion(h: Graph, rotation: Optional[RotationSystem] = None) -> Tuple[Graph, RotationSystem]:
    """Surround h by a cycle Y, one Y vertex per step of the external face walk.

    Every odd-degree external vertex is joined to the Y vertex of its first
    appearance on the walk. If no vertex needs one, the first white vertex of
    the walk is joined instead so the result stays connected.
    """
    h.require_coloring()
    if not h.is_connected():
        raise PreconditionError("outer completion needs a connected graph")
    if rotation is None:
        rotation = RotationSystem.from_positions(h)
    emb = Embedding.of_rotation(h, rotation)
    walk = emb.external_walk
    if not walk:
        raise PreconditionError("outer completion needs at least one edge")
    n = len(walk)
    tails = [d[0] for d in walk]
    ys: List[Vertex] = [(COMPLETION_TAG, i) for i in range(max(n, 4))]
    clash = [y for y in ys if y in h]
    if clash:
        raise PreconditionError(f"vertex id {clash[0]!r} is reserved for the completion cycle")
    coloring = {v: h.color(v) for v in h.vertices}
    for i, y in enumerate(ys):
        if i < n:
            coloring[y] = h.color(tails[i]).opposite
        else:
            coloring[y] = coloring[ys[i - 1]].opposite

    first: Dict[Vertex, int] = {}
    for i, u in enumerate(tails):
        first.setdefault(u, i)
    joins = [i for u, i in first.items() if h.degree(u) % 2]
    if not joins:
        joins = [next(i for u, i in first.items() if h.color(u) is Color.WHITE)]
    joins.sort()

    order = {v: list(darts) for v, darts in rotation.order.items()}
    completed = RotationSystem(order, outer=(ys[0], ys[1], 0))
    for i in joins:
        completed.insert_after(walk[i], (tails[i], ys[i], 0))
    joined = set(joins)
    m = len(ys)
    for i, y in enumerate(ys):
        darts = [(y, ys[(i + 1) % m], 0), (y, ys[i - 1], 0)]
        if i in joined:
            darts.append((y, tails[i], 0))
        completed.add_vertex(y, darts)

    edges = list(h.edges())
    edges += [(ys[i], ys[(i + 1) % m], 1) for i in range(m)]
    edges += [(tails[i], ys[i], 1) for i in joins]
    big = Graph(list(h.vertices) + ys, edges, coloring, name=f"{h.name}-completion" if h.name else "completion")
    completed.check(big)

    check = Embedding.of_rotation(big, completed)
    if check.internal != frozenset(h.vertices):
        raise InvariantError("completion leaves a vertex of h on the external face")
    if not outer_subgraph_is_simple_cycle(check):
        raise InvariantError("completion boundary is not a simple cycle")
    if not is_inner_semi_eulerian(check):
        raise InvariantError("completion is not inner semi-Eulerian")
    logger.debug("outer completion: walk %d, cycle %d, %d joins", n, m, len(joins))
    return big, completed


def fast_path_basis_outer(region: GridRegion) -> FastBasisSummary:
    """Components of the face graph of an outer completion; dim C_B(region) = d - 1."""
    require_simple_filled(region)
    big, rotation = outer_completion(region.graph, RotationSystem.of_region(region))
    emb = Embedding.of_rotation(big, rotation)
    cell_key: Dict[Point, FaceKey] = {}
    for key, verts in emb.faces.faces.items():
        if len(verts) == 4 and all(v in region.points for v in verts):
            cell_key[min(verts)] = key

    boundary = _boundary_black(region)
    uf = UnionFind()
    for b in boundary:
        fs = _faces_around(emb, b)
        if len(fs) % 2:
            raise InvariantError(f"boundary black vertex {b!r} has odd degree in the completion")
        for f in fs:
            uf.add(f)
        for i in range(len(fs)):
            uf.union(fs[i], fs[(i + 2) % len(fs)])
    for y in big.black():
        if y in region.points:
            continue
        fs = emb.internal_faces_at(y)
        for f in fs:
            uf.add(f)
        for f in fs[1:]:
            uf.union(fs[0], f)

    def cell(p: Point) -> FaceKey:
        try:
            return cell_key[p]
        except KeyError:
            raise InvariantError(f"expected a unit cell with lower-left corner {p!r}") from None

    up_right, up_left = _diagonal_links(boundary)
    for v, nxt in up_right:
        if region.has_cell(v):
            uf.union(cell(v), cell((nxt[0] - 1, nxt[1] - 1)))
    for v, nxt in up_left:
        if region.has_cell((v[0] - 1, v[1])):
            uf.union(cell((v[0] - 1, v[1])), cell((nxt[0], nxt[1] - 1)))
    components = uf.groups()
    return FastBasisSummary(len(components), components)


def bounce_check(host: HostLike) -> bool:
    """Number of billiard paths equals dim C_B of the inner subgraph plus one."""
    if isinstance(host, GridRegion):
        require_simple_filled(host)
    emb = embedding_of(host)
    if not isinstance(host, GridRegion) and not outer_subgraph_is_simple_cycle(emb):
        raise PreconditionError("outer subgraph is not a simple cycle")
    d = path_basis(emb).d
    dim = channel_count_exponent(inner_subgraph(emb), ColorRestriction.BLACK_ONLY)
    if d != dim + 1:
        logger.warning("bounce relation fails: %d paths, dim C_B(G') = %d", d, dim)
    return d == dim + 1


# rectangles


def rectangle_formulas(m: int, n: int) -> RectangleFacts:
    """Closed forms: path count of R_{m+1 x n+1}; channel dimension, 2-power and parity of R_{m-1 x n-1}."""
    if m < 1 or n < 1:
        raise PreconditionError("rectangle sides must be at least 1")
    g = math.gcd(m, n)
    facts = RectangleFacts(m, n)
    notes = []
    if ((m + 1) * (n + 1)) % 2 == 0:
        facts.path_basis_size = (g + 1) // 2
    else:
        notes.append(f"R{m + 1}x{n + 1} has an odd number of vertices")
    if ((m - 1) * (n - 1)) % 2 == 0:
        facts.black_channel_dim = (g - 1) // 2
        facts.guaranteed_valuation = facts.black_channel_dim
    else:
        notes.append(f"R{m - 1}x{n - 1} has an odd number of vertices, no matchings")
    facts.parity = Parity.ODD if g == 1 else Parity.EVEN
    facts.notes = "; ".join(notes)
    return facts


def billiard_trajectory(width: int, height: int) -> BilliardTrajectory:
    """45 degree path from (0, 0) in a width x height box, reflecting off the walls until a corner."""
    if width < 1 or height < 1:
        raise PreconditionError("box sides must be at least 1")
    x, y, dx, dy = 0, 0, 1, 1
    points = [(0, 0)]
    corners = {(0, 0), (width, 0), (0, height), (width, height)}
    while True:
        x, y = x + dx, y + dy
        points.append((x, y))
        if (x, y) in corners:
            break
        if x in (0, width):
            dx = -dx
        if y in (0, height):
            dy = -dy
    return BilliardTrajectory(width, height, points)


def rectangle_facts(m: int, n: int) -> RectangleFacts:
    """Closed forms for R_{m x n} itself: channel dimension, 2-power, parity and billiard path count."""
    if m < 1 or n < 1:
        raise PreconditionError("rectangle sides must be at least 1")
    own = rectangle_formulas(m + 1, n + 1)
    facts = RectangleFacts(m, n, black_channel_dim=own.black_channel_dim,
                           guaranteed_valuation=own.guaranteed_valuation, parity=own.parity)
    notes = []
    if own.black_channel_dim is None:
        notes.append(f"R{m}x{n} has an odd number of vertices, no matchings")
    if min(m, n) < 2:
        facts.path_basis_size = 0
    else:
        facts.path_basis_size = rectangle_formulas(m - 1, n - 1).path_basis_size
    facts.notes = "; ".join(notes)
    return facts
