from __future__ import annotations

import pytest
from hypothesis import strategies as st

from src.graph import Graph, GridRegion
from src.models import Color


@pytest.fixture
def channel_example() -> Graph:
    """Six vertices; nonempty channels {a,c,d,e}, {b,d}, {a,b,c,e}."""
    edges = [("a", "c"), ("c", "d"), ("d", "a"), ("a", "b"), ("b", "c"), ("b", "f"), ("e", "f"), ("f", "d")]
    return Graph("abcdef", edges, name="channel-example")


@pytest.fixture
def cube() -> Graph:
    """Q3: two squares joined corner to corner; no move applies."""
    vertices = list(range(8))
    edges = [(v, v ^ (1 << i)) for v in vertices for i in range(3) if v < v ^ (1 << i)]
    coloring = {v: Color.BLACK if bin(v).count("1") % 2 == 0 else Color.WHITE for v in vertices}
    return Graph(vertices, edges, coloring, name="cube")


@pytest.fixture
def unitsq_region() -> GridRegion:
    left = GridRegion.box(0, 0, 3, 4)
    right = GridRegion.box(4, 1, 4, 4)
    return GridRegion.union(left, right, name="unitsq")


@pytest.fixture
def graphno2_region() -> GridRegion:
    return GridRegion.rectangle(5, 4).with_name("graphno2")


@pytest.fixture
def l_region() -> GridRegion:
    return GridRegion.union(GridRegion.box(0, 0, 3, 5), GridRegion.box(0, 0, 5, 3), name="L")


@pytest.fixture
def parity_host() -> GridRegion:
    return GridRegion.rectangle(3, 6)


@st.composite
def multigraphs(draw, max_vertices: int = 8, colored: bool = False):
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    coloring = None
    if colored:
        coloring = {v: draw(st.sampled_from([Color.BLACK, Color.WHITE])) for v in range(n)}
    raw = draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, 3)),
        max_size=2 * n,
    ))
    edges = [(u, v, m) for u, v, m in raw if u != v and (coloring is None or coloring[u] != coloring[v])]
    return Graph(range(n), edges, coloring)


@st.composite
def polyominoes(draw, max_cells: int = 8):
    cells = [(0, 0)]
    steps = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for _ in range(draw(st.integers(0, max_cells - 1))):
        x, y = draw(st.sampled_from(cells))
        dx, dy = draw(st.sampled_from(steps))
        if (x + dx, y + dy) not in cells:
            cells.append((x + dx, y + dy))
    return GridRegion.from_cells(cells).normalized()
