"""Seeded random inputs for the verify suite."""

from __future__ import annotations

from typing import List, Set

import numpy as np

from ..billiards import is_simple_filled
from ..graph import Graph, GridRegion
from ..models import Color, Point

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def random_multigraph(rng: np.random.Generator, n: int, colored: bool = False, max_mult: int = 3) -> Graph:
    """n vertices 0..n-1; with colored=True edges only join opposite colours."""
    vertices = list(range(n))
    coloring = None
    if colored:
        coloring = {v: Color.BLACK if rng.random() < 0.5 else Color.WHITE for v in vertices}
    edges = []
    for _ in range(int(rng.integers(0, 2 * n + 1))):
        u, v = (int(x) for x in rng.integers(0, n, size=2)) if n > 1 else (0, 0)
        if u == v or (coloring and coloring[u] == coloring[v]):
            continue
        mult = 1 if rng.random() < 0.7 else int(rng.integers(2, max_mult + 1))
        edges.append((u, v, mult))
    return Graph(vertices, edges, coloring, name=f"random{n}")


def random_polyomino(rng: np.random.Generator, cells: int) -> GridRegion:
    grown: List[Point] = [(0, 0)]
    taken: Set[Point] = {(0, 0)}
    while len(grown) < cells:
        x, y = grown[int(rng.integers(0, len(grown)))]
        dx, dy = _STEPS[int(rng.integers(0, 4))]
        c = (x + dx, y + dy)
        if c not in taken:
            taken.add(c)
            grown.append(c)
    return GridRegion.from_cells(grown).normalized()


def random_simple_region(rng: np.random.Generator, cells: int, tries: int = 50) -> GridRegion:
    """A polyomino with a simple boundary and only unit-cell faces; a rectangle when none turns up."""
    for _ in range(tries):
        region = random_polyomino(rng, max(1, cells))
        if is_simple_filled(region):
            return region.with_name(f"poly{cells}")
    w = int(rng.integers(2, max(3, cells) + 1))
    return GridRegion.rectangle(2, w)
