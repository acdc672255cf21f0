"""
Dense GF(2) linear algebra on bit-packed rows.

Rows are stored as little-endian uint64 words (column j is bit j % 64 of
word j // 64), and elimination XORs whole rows at once.
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import PreconditionError
from .graph import Graph

logger = logging.getLogger(__name__)

__all__ = [
    "GF2Matrix",
    "adjacency_mod2",
    "bipartite_adjacency_mod2",
    "nullspace",
    "det_mod2",
    "rank_mod2",
    "solve_mod2",
]

_WORD = 64


def _words(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


class GF2Matrix:
    def __init__(self, rows: int, cols: int, bits: np.ndarray | None = None):
        self.rows = rows
        self.cols = cols
        if bits is None:
            bits = np.zeros((rows, _words(cols)), dtype="<u8")
        self.bits = bits

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __repr__(self) -> str:
        return f"GF2Matrix({self.rows}x{self.cols})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.to_dense(), other.to_dense())

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray) -> "GF2Matrix":
        arr = np.asarray(dense, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(dense), -1) if len(dense) else np.zeros((0, 0), dtype=np.int64)
        rows, cols = arr.shape
        padded = np.zeros((rows, _words(cols) * _WORD), dtype=np.uint8)
        padded[:, :cols] = (arr % 2).astype(np.uint8)
        packed = np.packbits(padded, axis=1, bitorder="little")
        return cls(rows, cols, packed.view("<u8").copy())

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        unpacked = np.unpackbits(self.bits.view(np.uint8), axis=1, bitorder="little")
        return unpacked[:, : self.cols]

    def get(self, i: int, j: int) -> int:
        w, b = divmod(j, _WORD)
        return int((int(self.bits[i, w]) >> b) & 1)

    def flip(self, i: int, j: int) -> None:
        w, b = divmod(j, _WORD)
        self.bits[i, w] ^= np.uint64(1) << np.uint64(b)

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix.from_dense(self.to_dense().T)

    def apply(self, vec: Sequence[int] | np.ndarray) -> np.ndarray:
        """M . vec over GF(2)."""
        v = np.asarray(vec, dtype=np.int64) % 2
        return (self.to_dense().astype(np.int64) @ v) % 2

    def rref(self) -> Tuple[np.ndarray, List[int]]:
        """Reduced row echelon form (leftmost pivot, topmost row) and pivot columns."""
        a = self.bits.copy()
        pivots: List[int] = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            w, b = divmod(c, _WORD)
            mask = np.uint64(1) << np.uint64(b)
            hits = np.flatnonzero(a[r:, w] & mask)
            if hits.size == 0:
                continue
            p = r + int(hits[0])
            if p != r:
                a[[r, p]] = a[[p, r]]
            col = (a[:, w] & mask) != 0
            col[r] = False
            a[col] ^= a[r]
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self) -> int:
        return len(self.rref()[1])


def rank_mod2(m: GF2Matrix) -> int:
    return m.rank()


def nullspace(m: GF2Matrix) -> List[np.ndarray]:
    """Kernel basis, one vector per free column in increasing order; empty iff injective."""
    reduced, pivots = m.rref()
    dense = GF2Matrix(m.rows, m.cols, reduced).to_dense()
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        vec = np.zeros(m.cols, dtype=np.uint8)
        vec[f] = 1
        for i, p in enumerate(pivots):
            vec[p] = dense[i, f]
        basis.append(vec)
    logger.debug("nullspace of %dx%d: rank %d, nullity %d", m.rows, m.cols, len(pivots), len(basis))
    return basis


def det_mod2(m: GF2Matrix) -> int:
    if m.rows != m.cols:
        raise PreconditionError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    return 1 if m.rank() == m.rows else 0


def _pack(rows: int, cols: int, entries: Iterable[Tuple[int, int]]) -> GF2Matrix:
    mat = GF2Matrix(rows, cols)
    for i, j in entries:
        mat.flip(i, j)
    return mat


def adjacency_mod2(g: Graph) -> GF2Matrix:
    n = len(g)
    entries = []
    for u, v, mult in g.edges():
        if mult % 2:
            i, j = g.index(u), g.index(v)
            entries.append((i, j))
            entries.append((j, i))
    return _pack(n, n, entries)


def bipartite_adjacency_mod2(g: Graph) -> GF2Matrix:
    """Rows are white vertices, columns black vertices, both in vertex order."""
    g.require_coloring()
    whites = {v: i for i, v in enumerate(g.white())}
    blacks = {v: j for j, v in enumerate(g.black())}
    entries = []
    for u, v, mult in g.edges():
        if mult % 2 == 0:
            continue
        w, b = (u, v) if u in whites else (v, u)
        entries.append((whites[w], blacks[b]))
    return _pack(len(whites), len(blacks), entries)


def solve_mod2(m: GF2Matrix, rhs: Sequence[int]) -> Optional[np.ndarray]:
    """One solution x of M x = rhs over GF(2) (free variables zero), or None."""
    dense = m.to_dense().astype(np.uint8)
    b = (np.asarray(rhs, dtype=np.int64) % 2).astype(np.uint8).reshape(-1, 1)
    aug = GF2Matrix.from_dense(np.hstack([dense, b]))
    reduced, pivots = aug.rref()
    if pivots and pivots[-1] == m.cols:
        return None
    rows = GF2Matrix(aug.rows, aug.cols, reduced).to_dense()
    x = np.zeros(m.cols, dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = rows[i, m.cols]
    return x
