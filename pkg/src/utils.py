from __future__ import annotations

import copy
import hashlib
import logging
import os
from typing import Any, Dict, Hashable, Iterable, List, Optional

import yaml
from slugify import slugify

logger = logging.getLogger(__name__)

CONFIG_PATH = "config.yaml"

DEFAULT_CONFIG: Dict[str, Any] = {
    "oracle": {"enumerate_max_vertices": 36, "count_max_vertices": 40},
    "kasteleyn": {"max_vertices": 400},
    "billiards": {
        "svg_palette": ["#1f4fb4", "#2e8b57", "#c0392b", "#8e44ad", "#d68910", "#17a589"],
        "svg_scale": 40,
    },
    "verify": {"default_seed": 0, "default_sizes": [4, 6, 8], "cases_per_size": 20},
    "logging": {"level": "WARNING"},
}


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in (extra or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """YAML config merged over defaults; env vars win over both."""
    path = path or os.environ.get("MATCHPARITY_CONFIG") or CONFIG_PATH
    loaded: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.debug("no config at %s, using defaults", path)
    except yaml.YAMLError as e:
        logger.warning("ignoring unreadable config %s: %s", path, e)
    cfg = _merge(DEFAULT_CONFIG, loaded)

    cap = os.environ.get("MATCHPARITY_MAX_VERTICES")
    if cap and cap.strip().isdigit():
        cfg["oracle"]["count_max_vertices"] = int(cap)
        cfg["oracle"]["enumerate_max_vertices"] = min(cfg["oracle"]["enumerate_max_vertices"], int(cap))
    level = os.environ.get("MATCHPARITY_LOG_LEVEL")
    if level:
        cfg["logging"]["level"] = level.strip().upper()
    return cfg


def configure_logging(level: str = "WARNING") -> None:
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def short_hash(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:8]


def shorten_id(value: str, max_len: int = 30) -> str:
    value = (value or "").strip()
    if len(value) <= max_len:
        return value
    h = short_hash(value)
    return f"{value[:max_len - 1 - len(h)]}-{h}"


def graph_id(canonical: str, name: str = "") -> str:
    stem = slugify(name)[:40] if name else "graph"
    return f"{stem or 'graph'}-{short_hash(canonical)}"


def two_adic_valuation(n: int) -> float:
    """Exponent of 2 in n; infinite for 0."""
    n = abs(int(n))
    if n == 0:
        return float("inf")
    return (n & -n).bit_length() - 1


class UnionFind:
    """Union-find with path compression and union by rank over hashable items."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self._parent: Dict[Hashable, Hashable] = {}
        self._rank: Dict[Hashable, int] = {}
        self._order: Dict[Hashable, int] = {}
        for x in items:
            self.add(x)

    def add(self, x: Hashable) -> None:
        if x not in self._parent:
            self._parent[x] = x
            self._rank[x] = 0
            self._order[x] = len(self._order)

    def find(self, x: Hashable) -> Hashable:
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        # path compression
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: Hashable, b: Hashable) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1

    def groups(self) -> List[List[Hashable]]:
        """Components in insertion order of their first member; members in insertion order."""
        by_root: Dict[Hashable, List[Hashable]] = {}
        for x in self._order:
            by_root.setdefault(self.find(x), []).append(x)
        return list(by_root.values())

    def __len__(self) -> int:
        return len({self.find(x) for x in self._parent})
