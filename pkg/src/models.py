from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Hashable, List, Optional, Tuple

Vertex = Hashable
Point = Tuple[int, int]
# (u, v, k): u precedes v in host order, k indexes parallel copies
EdgeRef = Tuple[Hashable, Hashable, int]
FaceKey = Hashable

INFINITE_VALUATION = math.inf


class Color(str, Enum):
    BLACK = "B"
    WHITE = "W"

    @property
    def opposite(self) -> "Color":
        return Color.WHITE if self is Color.BLACK else Color.BLACK


class ColorRestriction(str, Enum):
    ALL = "all"
    BLACK_ONLY = "black"
    WHITE_ONLY = "white"


class Parity(str, Enum):
    ODD = "odd"
    EVEN = "even"


class GuaranteeStatus(str, Enum):
    PROVEN = "proven"
    SIGNING_ASSUMED = "signing-assumed"
    INVALID = "invalid"


class MoveKind(str, Enum):
    VC = "VC"
    ED = "ED"
    FV = "FV"
    DIAGONAL = "DiagonalContraction"
    ISOLATED = "IsolatedRemoval"


def num(value: Any) -> Any:
    """Decimal-string form of integers for JSON output; infinity becomes "inf"."""
    if value is None:
        return None
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    return value


def vertex_json(v: Vertex) -> Any:
    return list(v) if isinstance(v, tuple) else v


@dataclass(frozen=True)
class Channel:
    vertices: FrozenSet[Vertex] = frozenset()
    host_id: str = ""

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices

    def is_empty(self) -> bool:
        return not self.vertices


@dataclass
class ChannelBasis:
    host_id: str
    color_restriction: ColorRestriction
    basis: List[Channel] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_dict(self, order: Optional[Dict[Vertex, int]] = None) -> dict:
        def key(v):
            return order[v] if order else v

        return {
            "host": self.host_id,
            "color_restriction": self.color_restriction.value,
            "dimension": num(self.dimension),
            "basis": [[vertex_json(v) for v in sorted(c.vertices, key=key)] for c in self.basis],
        }


@dataclass(frozen=True)
class Matching:
    edges: FrozenSet[EdgeRef] = frozenset()

    def partner(self, v: Vertex) -> Tuple[Vertex, EdgeRef]:
        for e in self.edges:
            if e[0] == v:
                return e[1], e
            if e[1] == v:
                return e[0], e
        raise KeyError(v)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class SmithDecomposition:
    S: List[List[int]]
    D: List[List[int]]
    T: List[List[int]]

    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


@dataclass
class DivisibilityReport:
    graph_id: str
    dim_C: int
    dim_C_B: Optional[int] = None
    dim_C_W: Optional[int] = None
    guaranteed_exponent: Optional[int] = None
    # "m_G" for colored hosts, "m_G^2" for the general statement
    guarantee_target: str = "m_G"
    guarantee_status: GuaranteeStatus = GuaranteeStatus.PROVEN
    caveat: str = ""
    exact_count: Optional[int] = None
    exact_valuation: Optional[float] = None
    parity: Optional[Parity] = None
    notes: str = ""

    def guarantee_holds(self) -> Optional[bool]:
        if self.exact_count is None or self.guaranteed_exponent is None:
            return None
        value = self.exact_count ** 2 if self.guarantee_target == "m_G^2" else self.exact_count
        return value % (2 ** self.guaranteed_exponent) == 0

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "dim_C": num(self.dim_C),
            "dim_C_B": num(self.dim_C_B),
            "dim_C_W": num(self.dim_C_W),
            "guaranteed_exponent": num(self.guaranteed_exponent),
            "guarantee_target": self.guarantee_target,
            "guarantee_status": self.guarantee_status.value,
            "caveat": self.caveat,
            "exact_count": num(self.exact_count),
            "exact_valuation": num(self.exact_valuation),
            "parity": self.parity.value if self.parity else None,
            "notes": self.notes,
        }


@dataclass
class BilliardPathBasis:
    paths: List[FrozenSet[FaceKey]] = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.paths)

    def sizes(self) -> List[int]:
        return [len(p) for p in self.paths]

    def faces(self) -> FrozenSet[FaceKey]:
        out: set = set()
        for p in self.paths:
            out |= p
        return frozenset(out)

    def to_dict(self) -> dict:
        return {"d": num(self.d), "sizes": [num(s) for s in self.sizes()]}


@dataclass
class FastBasisSummary:
    d: int
    # boundary black vertices (plain variant) or face keys (outer variant)
    components: List[list] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"d": num(self.d), "component_sizes": [num(len(c)) for c in self.components]}


@dataclass
class BilliardTrajectory:
    width: int
    height: int
    points: List[Point] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.points) - 1

    @property
    def end(self) -> Point:
        return self.points[-1]


@dataclass
class Move:
    kind: MoveKind
    params: Dict[str, Any] = field(default_factory=dict)
    vertex_delta: int = 0
    edge_delta: int = 0

    def to_dict(self) -> dict:
        params = {k: vertex_json(v) if isinstance(v, tuple) else v for k, v in self.params.items()}
        return {"kind": self.kind.value, "params": params,
                "vertex_delta": self.vertex_delta, "edge_delta": self.edge_delta}


@dataclass
class ReductionTrace:
    moves: List[Move] = field(default_factory=list)
    terminal: Any = None
    delta: int = 0

    @property
    def fully_reduced(self) -> bool:
        g = self.terminal
        return g is not None and all(g.degree(v) == 0 for v in g.vertices)

    @property
    def isolated_count(self) -> int:
        g = self.terminal
        return sum(1 for v in g.vertices if g.degree(v) == 0) if g is not None else 0

    def to_dict(self) -> dict:
        return {
            "fully_reduced": self.fully_reduced,
            "isolated_count": num(self.isolated_count),
            "terminal_vertices": num(len(self.terminal.vertices)) if self.terminal is not None else None,
            "delta": num(self.delta),
            "moves": [m.to_dict() for m in self.moves],
        }


@dataclass
class PairingFunction:
    pairs: Dict[Vertex, Dict[EdgeRef, EdgeRef]] = field(default_factory=dict)

    def __call__(self, v: Vertex, e: EdgeRef) -> EdgeRef:
        return self.pairs[v][e]


@dataclass
class CycleFlip:
    cycle: List[EdgeRef]
    walk: List[Vertex]
    matching: Matching


@dataclass
class DiagonalContraction:
    graph: Any
    delta: int
    corner: Vertex
    end: Vertex
    end_degree: int
    moves: List[Move] = field(default_factory=list)


@dataclass
class ParityRecord:
    m_G: int
    m_Ge: int
    m_Gv: int
    delta_e: int
    delta_v: int

    @property
    def holds(self) -> bool:
        return (self.m_G - (2 ** self.delta_e) * self.m_Ge - (2 ** self.delta_v) * self.m_Gv) % 2 == 0


@dataclass
class RoutingResult:
    dim_before: int
    dim_after: int
    f_images: List[Channel] = field(default_factory=list)
    g_images: List[Channel] = field(default_factory=list)


@dataclass
class MultiRouteResult:
    parity_equal: bool
    dimension_equal: Optional[bool]
    parity_before: Parity
    parity_after: Parity
    dim_before: int
    dim_after: int


@dataclass
class RectangleFacts:
    m: int
    n: int
    path_basis_size: Optional[int] = None
    black_channel_dim: Optional[int] = None
    guaranteed_valuation: Optional[int] = None
    parity: Optional[Parity] = None
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "m": num(self.m),
            "n": num(self.n),
            "path_basis_size": num(self.path_basis_size),
            "black_channel_dim": num(self.black_channel_dim),
            "guaranteed_valuation": num(self.guaranteed_valuation),
            "parity": self.parity.value if self.parity else None,
            "notes": self.notes,
        }


@dataclass
class AnalysisOutput:
    source: str
    region: Dict[str, Any] = field(default_factory=dict)
    report: Optional[DivisibilityReport] = None
    billiards: Optional[Dict[str, Any]] = None
    reduction: Optional[Dict[str, Any]] = None
    seconds: float = 0.0
    notes: str = ""
    # error code of a failed item, None on success
    error: Optional[str] = None

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "source": self.source,
            "region": {k: num(v) for k, v in self.region.items()},
            "report": self.report.to_dict() if self.report else None,
            "billiards": self.billiards,
            "reduction": self.reduction,
            "notes": self.notes,
            "error": self.error,
        }
        if timing:
            out["seconds"] = f"{self.seconds:.6f}"
        return out


@dataclass
class RectangleRouting:
    m: int
    n: int
    parity: Parity
    # every rectangle visited by the recursion, in visiting order
    steps: List[Tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "m": num(self.m),
            "n": num(self.n),
            "parity": self.parity.value,
            "steps": [[num(a), num(b)] for a, b in self.steps],
        }
