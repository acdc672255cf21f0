from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx

from .channels import channel_count_exponent
from .errors import InvariantError, MatchParityError, UnbalancedError, UnsupportedInputError
from .gf2 import GF2Matrix
from .graph import Graph, GridRegion, RotationSystem, trace_faces
from .matching import count_matchings, matching_parity
from .models import ColorRestriction, DivisibilityReport, GuaranteeStatus, SmithDecomposition
from .utils import graph_id, load_config, two_adic_valuation

logger = logging.getLogger(__name__)

IntMatrix = List[List[int]]

# two_nullity cross-checks against the Smith form up to this size
SNF_CROSS_CHECK_MAX = 60


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)] for row in a]


def bareiss_determinant(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free elimination; every intermediate division is exact."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise UnsupportedInputError("determinant of a non-square matrix")
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


class _SmithState:
    """A = S . M . T maintained through every elementary operation on M."""

    def __init__(self, a: Sequence[Sequence[int]]):
        self.rows = len(a)
        self.cols = len(a[0]) if self.rows else 0
        self.M = [list(r) for r in a]
        self.S = identity(self.rows)
        self.T = identity(self.cols)

    def row_add(self, i: int, j: int, c: int) -> None:
        # row_i += c * row_j
        self.M[i] = [x + c * y for x, y in zip(self.M[i], self.M[j])]
        for r in self.S:
            r[j] -= c * r[i]

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        self.M[i], self.M[j] = self.M[j], self.M[i]
        for r in self.S:
            r[i], r[j] = r[j], r[i]

    def row_negate(self, i: int) -> None:
        self.M[i] = [-x for x in self.M[i]]
        for r in self.S:
            r[i] = -r[i]

    def col_add(self, i: int, j: int, c: int) -> None:
        # col_j += c * col_i
        for r in self.M:
            r[j] += c * r[i]
        self.T[i] = [x - c * y for x, y in zip(self.T[i], self.T[j])]

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for r in self.M:
            r[i], r[j] = r[j], r[i]
        self.T[i], self.T[j] = self.T[j], self.T[i]

    def min_entry(self, t: int) -> Optional[Tuple[int, int]]:
        best = None
        best_abs = 0
        for i in range(t, self.rows):
            row = self.M[i]
            for j in range(t, self.cols):
                v = row[j]
                if v and (best is None or abs(v) < best_abs):
                    best, best_abs = (i, j), abs(v)
                    if best_abs == 1:
                        return best
        return best


def smith_normal_form(a: Sequence[Sequence[int]]) -> SmithDecomposition:
    """A = S . D . T with unimodular S, T and d_1 | d_2 | ... (zeros last, nonnegative)."""
    st = _SmithState(a)
    for t in range(min(st.rows, st.cols)):
        while True:
            pos = st.min_entry(t)
            if pos is None:
                return SmithDecomposition(st.S, st.M, st.T)
            st.row_swap(t, pos[0])
            st.col_swap(t, pos[1])
            p = st.M[t][t]
            dirty = False
            for i in range(t + 1, st.rows):
                if st.M[i][t]:
                    st.row_add(i, t, -(st.M[i][t] // p))
                    dirty = dirty or st.M[i][t] != 0
            for j in range(t + 1, st.cols):
                if st.M[t][j]:
                    st.col_add(t, j, -(st.M[t][j] // p))
                    dirty = dirty or st.M[t][j] != 0
            if dirty:
                continue
            # divisibility chain repair: pull an offending row into the pivot row
            bad = next(
                (i for i in range(t + 1, st.rows) if any(st.M[i][j] % p for j in range(t + 1, st.cols))),
                None,
            )
            if bad is not None:
                st.row_add(t, bad, 1)
                continue
            if p < 0:
                st.row_negate(t)
            break
    return SmithDecomposition(st.S, st.M, st.T)


def two_nullity(a: Sequence[Sequence[int]]) -> int:
    """Nullity of a mod 2; square inputs are cross-checked against the Smith diagonal."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    reduced = [[x % 2 for x in row] for row in a]
    nullity = cols - (GF2Matrix.from_dense(reduced).rank() if rows and cols else 0)
    if rows == cols and 0 < rows <= SNF_CROSS_CHECK_MAX:
        evens = sum(1 for d in smith_normal_form(a).diagonal() if d % 2 == 0)
        if evens != nullity:
            raise InvariantError(f"GF(2) nullity {nullity} != even Smith entries {evens}")
    return nullity


def is_lattice_graph(g: Graph) -> bool:
    """Vertices are lattice points and every edge is a single unit step."""
    for v in g.vertices:
        if not (isinstance(v, tuple) and len(v) == 2 and all(isinstance(c, int) for c in v)):
            return False
    for u, v, m in g.edges():
        if m != 1 or abs(u[0] - v[0]) + abs(u[1] - v[1]) != 1:
            return False
    return True


def _percus_sign(u, v, faulty: bool = False) -> int:
    if u[1] == v[1]:
        return 1
    if faulty:
        return 1
    return -1 if min(u[0], v[0]) % 2 else 1


def _check_faces(g: Graph, faulty: bool) -> None:
    rotation = RotationSystem.from_positions(g)
    for walk in trace_faces(g, rotation):
        pts = [d[0] for d in walk]
        area2 = sum(pts[i][0] * pts[(i + 1) % len(pts)][1] - pts[(i + 1) % len(pts)][0] * pts[i][1]
                    for i in range(len(pts)))
        if area2 <= 0:
            continue
        half = len(walk) // 2
        product = 1
        for u, v, _ in walk:
            product *= _percus_sign(u, v, faulty)
        if product != (-1) ** (half + 1):
            raise UnsupportedInputError(f"lattice signing fails on the face through {pts[0]!r} (length {len(walk)})")


def percus_matrix(g: Graph, validate: bool = True, faulty: bool = False) -> Tuple[IntMatrix, list, list]:
    """(H, whites, blacks): horizontal edges +1, vertical edge in column x weighted (-1)^x."""
    g.require_coloring()
    if not is_lattice_graph(g):
        raise UnsupportedInputError("signed matrices are only built for square-lattice subgraphs")
    whites, blacks = g.white(), g.black()
    col = {b: j for j, b in enumerate(blacks)}
    row = {w: i for i, w in enumerate(whites)}
    h = [[0] * len(blacks) for _ in whites]
    for u, v, _ in g.edges():
        w, b = (u, v) if u in row else (v, u)
        h[row[w]][col[b]] = _percus_sign(u, v, faulty)
    if validate:
        _check_faces(g, faulty)
    return h, whites, blacks


def kasteleyn_sign_grid(region: GridRegion) -> IntMatrix:
    g = region.graph
    if len(g.black()) != len(g.white()):
        raise UnbalancedError(f"{len(g.black())} black vs {len(g.white())} white vertices")
    return percus_matrix(g)[0]


def count_matchings_kasteleyn(target: Union[GridRegion, Graph], faulty: bool = False) -> int:
    """|det H| for a lattice subgraph; equals the number of perfect matchings."""
    g = target.graph if isinstance(target, GridRegion) else target
    g.require_coloring()
    if len(g.black()) != len(g.white()):
        raise UnbalancedError(f"{len(g.black())} black vs {len(g.white())} white vertices")
    h, _, _ = percus_matrix(g, validate=not faulty, faulty=faulty)
    return abs(bareiss_determinant(h))


def rectangle_count(m: int, n: int) -> int:
    if (m * n) % 2:
        return 0
    return count_matchings_kasteleyn(GridRegion.rectangle(m, n))


def _planar(g: Graph) -> bool:
    simple = nx.Graph()
    simple.add_nodes_from(g.vertices)
    simple.add_edges_from((u, v) for u, v, _ in g.edges())
    return nx.check_planarity(simple)[0]


def divisibility_report(target: Union[GridRegion, Graph], name: str = "", count_cap: Optional[int] = None) -> DivisibilityReport:
    g = target.graph if isinstance(target, GridRegion) else target
    cfg = load_config()
    cap = int(cfg["oracle"]["count_max_vertices"]) if count_cap is None else count_cap
    report = DivisibilityReport(graph_id=graph_id(g.canonical(), name or g.name), dim_C=channel_count_exponent(g))
    lattice = g.is_colored() and is_lattice_graph(g)
    planar = lattice or _planar(g)
    if g.is_colored():
        report.dim_C_B = channel_count_exponent(g, ColorRestriction.BLACK_ONLY)
        report.dim_C_W = channel_count_exponent(g, ColorRestriction.WHITE_ONLY)
        report.guaranteed_exponent = report.dim_C_B
        report.guarantee_target = "m_G"
    else:
        report.guaranteed_exponent = report.dim_C
        report.guarantee_target = "m_G^2"
    if lattice:
        report.guarantee_status = GuaranteeStatus.PROVEN
    elif planar:
        report.guarantee_status = GuaranteeStatus.SIGNING_ASSUMED
        report.caveat = "requires Kasteleyn signing: planar host, signing assumed not constructed"
    else:
        report.guarantee_status = GuaranteeStatus.INVALID
        report.caveat = "non-planar host: no Kasteleyn signing, the power of 2 is not guaranteed"
    report.parity = matching_parity(g)

    notes = []
    balanced = not g.is_colored() or len(g.black()) == len(g.white())
    if len(g) % 2 or not balanced:
        report.exact_count = 0
    elif lattice and len(g) <= int(cfg["kasteleyn"]["max_vertices"]):
        try:
            report.exact_count = count_matchings_kasteleyn(g)
        except UnsupportedInputError as e:
            notes.append(f"kasteleyn skipped: {e}")
    if report.exact_count is None and len(g) % 2 == 0 and balanced:
        if len(g) <= cap:
            try:
                report.exact_count = count_matchings(g, cap)
            except MatchParityError as e:
                notes.append(f"{e.code}: {e}")
        else:
            logger.info("exact count skipped for %s: %d vertices over caps", report.graph_id, len(g))
            notes.append("exact count skipped: size over caps")
    if report.exact_count is not None:
        report.exact_valuation = two_adic_valuation(report.exact_count)
        holds = report.guarantee_holds()
        if holds is False and report.guarantee_status is not GuaranteeStatus.INVALID:
            notes.append("guarantee violated")
            logger.warning("guarantee 2^%s fails on %s", report.guaranteed_exponent, report.graph_id)
    report.notes = "; ".join(notes)
    return report
