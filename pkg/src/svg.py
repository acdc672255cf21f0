from __future__ import annotations

import logging
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from bs4 import BeautifulSoup

from .errors import PreconditionError
from .graph import Embedding, GridRegion, lattice_color
from .models import BilliardPathBasis, Color, FaceKey
from .utils import load_config

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"

Node = Tuple[Hashable, ...]


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def _path_graph(emb: Embedding, path: FrozenSet[FaceKey]) -> Dict[Node, List[Tuple[Node, int]]]:
    """Cells of one path joined through the black corners they bounce off or cross.

    An internal black vertex is split in two, one node per pair of opposite
    cells, so crossing diagonals stay apart.
    """
    if not path:
        raise PreconditionError("cannot draw an empty path")
    unknown = [f for f in path if f not in emb.faces.faces]
    if unknown:
        raise PreconditionError(f"path face {unknown[0]!r} is not a cell of the region")
    adj: Dict[Node, List[Tuple[Node, int]]] = {}
    edge = 0
    for b in emb.graph.black():
        fs = emb.internal_faces_at(b)
        internal = b in emb.internal
        for i, f in enumerate(fs):
            if f not in path:
                continue
            corner = ("corner", b, i % 2 if internal else 0)
            cell = ("cell", f)
            adj.setdefault(cell, []).append((corner, edge))
            adj.setdefault(corner, []).append((cell, edge))
            edge += 1
    return adj


def _cover_walk(adj: Dict[Node, List[Tuple[Node, int]]]) -> List[Node]:
    """One walk over every link, retracing branches; starts at an end of the path when there is one."""
    start = next((n for n, links in adj.items() if len(links) == 1), next(iter(adj)))
    used = set()
    ptr = {n: 0 for n in adj}
    stack = [start]
    out = [start]
    keep = 1
    while stack:
        u = stack[-1]
        links = adj[u]
        while ptr[u] < len(links) and links[ptr[u]][1] in used:
            ptr[u] += 1
        if ptr[u] < len(links):
            w, e = links[ptr[u]]
            used.add(e)
            stack.append(w)
            out.append(w)
            keep = len(out)
        else:
            stack.pop()
            if stack:
                out.append(stack[-1])
    return out[:keep]


def _position(node: Node) -> Tuple[float, float]:
    if node[0] == "cell":
        x, y = node[1]
        return x + 0.5, y + 0.5
    return node[1]


def billiard_svg(
    region: GridRegion,
    basis: BilliardPathBasis,
    palette: Optional[Sequence[str]] = None,
    scale: Optional[float] = None,
) -> str:
    """Region edges, one 45 degree polyline per basis path, vertices as filled (black) or open (white) dots."""
    if not region.points:
        raise PreconditionError("cannot draw an empty region")
    cfg = load_config()["billiards"]
    palette = list(palette or cfg["svg_palette"])
    scale = float(scale or cfg["svg_scale"])
    x0, y0, x1, y1 = region.bbox()
    pad = 0.5

    def sx(x: float) -> str:
        return _fmt((x - x0 + pad) * scale)

    def sy(y: float) -> str:
        return _fmt((y1 - y + pad) * scale)

    soup = BeautifulSoup(features="xml")
    width, height = (x1 - x0 + 2 * pad) * scale, (y1 - y0 + 2 * pad) * scale
    svg = soup.new_tag("svg", attrs={
        "xmlns": SVG_NS,
        "width": _fmt(width),
        "height": _fmt(height),
        "viewBox": f"0 0 {_fmt(width)} {_fmt(height)}",
    })
    soup.append(svg)

    edges = soup.new_tag("g", attrs={"class": "edges", "stroke": "#999999", "stroke-width": _fmt(scale / 20)})
    for u, v, _ in region.graph.edges():
        edges.append(soup.new_tag("line", attrs={"x1": sx(u[0]), "y1": sy(u[1]), "x2": sx(v[0]), "y2": sy(v[1])}))
    svg.append(edges)

    emb = Embedding.of_region(region)
    for i, path in enumerate(basis.paths):
        walk = [_position(n) for n in _cover_walk(_path_graph(emb, path))]
        svg.append(soup.new_tag("polyline", attrs={
            "class": "billiard-path",
            "data-index": str(i),
            "data-faces": str(len(path)),
            "points": " ".join(f"{sx(x)},{sy(y)}" for x, y in walk),
            "fill": "none",
            "stroke": palette[i % len(palette)],
            "stroke-width": _fmt(scale / 8),
            "stroke-linecap": "round",
            "stroke-linejoin": "round",
        }))

    dots = soup.new_tag("g", attrs={"class": "vertices", "stroke": "#000000", "stroke-width": _fmt(scale / 25)})
    for p in region.ordered:
        fill = "#000000" if lattice_color(p) is Color.BLACK else "#ffffff"
        dots.append(soup.new_tag("circle", attrs={"cx": sx(p[0]), "cy": sy(p[1]), "r": _fmt(scale / 8), "fill": fill}))
    svg.append(dots)
    logger.debug("svg: %d paths, %d vertices", basis.d, len(region))
    return str(soup)


def save_svg(text: str, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
