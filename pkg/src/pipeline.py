from __future__ import annotations

import logging
import os
import time
from typing import List, Optional, Union

from .billiards import fast_path_basis, is_simple_filled, path_basis
from .divisibility import divisibility_report
from .errors import MatchParityError
from .graph import Graph, GridRegion, from_region_file, graph_from_json
from .models import AnalysisOutput
from .moves import reduce
from .utils import load_config

logger = logging.getLogger(__name__)

Host = Union[GridRegion, Graph]


def parse_source(text: str, name: str = "") -> Host:
    """Graph-JSON when the text opens with '{', otherwise a '#'/'.' region file."""
    if text.lstrip().startswith("{"):
        return graph_from_json(text, name=name)
    return from_region_file(text, name=name)


def load_source(path: str) -> Host:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_source(text, name=stem)


def _summary(host: Host) -> dict:
    g = host.graph if isinstance(host, GridRegion) else host
    out = {"vertices": len(g), "edges": g.edge_count}
    if g.is_colored():
        out["black"] = len(g.black())
        out["white"] = len(g.white())
    if isinstance(host, GridRegion):
        out["cells"] = len(host.cells())
    return out


def analyze(host: Host, source: str = "", max_count_vertices: Optional[int] = None) -> AnalysisOutput:
    """Report, billiard summary (simple filled regions) and reduction summary for one host."""
    started = time.perf_counter()
    g = host.graph if isinstance(host, GridRegion) else host
    out = AnalysisOutput(source=source or g.name, region=_summary(host))
    out.report = divisibility_report(g, name=g.name or source, count_cap=max_count_vertices)
    if isinstance(host, GridRegion) and is_simple_filled(host):
        fast = fast_path_basis(host)
        basis = path_basis(host)
        out.billiards = {"d": str(fast.d), "sizes": [str(s) for s in basis.sizes()]}
    trace = reduce(g)
    out.reduction = {
        "fully_reduced": trace.fully_reduced,
        "isolated_count": str(trace.isolated_count),
        "moves": str(len(trace.moves)),
    }
    notes = [out.report.notes] if out.report.notes else []
    if not trace.fully_reduced:
        notes.append("irreducible remainder")
    out.notes = "; ".join(notes)
    out.seconds = time.perf_counter() - started
    return out


def analyze_sources(paths: List[str], max_count_vertices: Optional[int] = None) -> List[AnalysisOutput]:
    out = []
    cfg = load_config()
    logger.debug("analyzing %d source(s), count cap %s", len(paths),
                 max_count_vertices or cfg["oracle"]["count_max_vertices"])
    for path in paths:
        try:
            out.append(analyze(load_source(path), source=path, max_count_vertices=max_count_vertices))
        except (MatchParityError, OSError) as e:
            code = getattr(e, "code", "io_error")
            logger.warning("analysis of %s failed: %s", path, e)
            out.append(AnalysisOutput(
                source=path,
                notes=f"error={type(e).__name__}: {e}",
                error=code,
            ))
    return out
