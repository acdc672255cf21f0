import time

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from conftest import multigraphs
from src.channels import channel_count_exponent
from src.checks.generators import random_simple_region
from src.errors import PreconditionError
from src.graph import Graph, GridRegion
from src.matching import count_matchings
from src.moves import (
    apply_ed,
    apply_fv,
    apply_trace,
    apply_vc,
    diagonal_contract,
    ed_move,
    external_degree_bound,
    find_low_degree_external,
    fv_move,
    parity_theorem,
    reduce,
    reducible_inner_eulerian,
    vc_move,
)
from src.models import ColorRestriction, MoveKind


def _cycle(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def test_vc_merges_the_two_neighbours():
    g, move = vc_move(_cycle(4), 0)
    assert g.vertices == (1, 2)
    assert g.multiplicity(1, 2) == 2
    assert move.params == {"v": 0, "kept": 1, "merged": 3}
    assert move.edge_delta == -2


def test_vc_preconditions():
    with pytest.raises(PreconditionError):
        apply_vc(GridRegion.rectangle(3, 3).graph, (1, 1))
    with pytest.raises(PreconditionError):
        apply_vc(Graph("uv", [("u", "v", 2)]), "u")


def test_ed_removes_two_copies():
    g = apply_ed(Graph("uv", [("u", "v", 3)]), ("u", "v", 0), ("v", "u", 2))
    assert g.multiplicity("u", "v") == 1
    with pytest.raises(PreconditionError):
        apply_ed(Graph("uv", [("u", "v", 3)]), ("u", "v", 1), ("u", "v", 1))


def test_fv_removes_a_forced_pair():
    path = Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    g = apply_fv(path, "a", "b")
    assert g.vertices == ("c", "d")
    assert g.edge_count == 1
    with pytest.raises(PreconditionError):
        apply_fv(path, "b", "c")


def test_reduce_channel_example(channel_example):
    trace = reduce(channel_example)
    assert trace.fully_reduced
    assert trace.isolated_count == channel_count_exponent(channel_example) == 2
    assert [m.kind for m in trace.moves][0] is MoveKind.FV


def test_reduce_square():
    trace = reduce(GridRegion.rectangle(2, 2).graph)
    assert trace.fully_reduced
    assert trace.isolated_count == 2
    assert reducible_inner_eulerian(GridRegion.rectangle(2, 2).graph)


def test_cube_is_irreducible(cube):
    trace = reduce(cube)
    assert trace.moves == []
    assert not trace.fully_reduced
    assert trace.to_dict()["isolated_count"] == "0"


def test_trace_replays_from_json():
    g = GridRegion.rectangle(2, 3).graph
    trace = reduce(g)
    assert apply_trace(g, trace.moves) == trace.terminal
    assert apply_trace(g, [m.to_dict() for m in trace.moves]) == trace.terminal


@settings(max_examples=80, deadline=None)
@given(multigraphs(max_vertices=9))
def test_reduction_keeps_the_channel_dimension(g):
    trace = reduce(g)
    assert channel_count_exponent(trace.terminal) == channel_count_exponent(g)
    if trace.fully_reduced:
        assert trace.isolated_count == channel_count_exponent(g)


@settings(max_examples=60, deadline=None)
@given(multigraphs(max_vertices=9, colored=True))
def test_reduction_keeps_the_black_dimension(g):
    trace = reduce(g)
    for restriction in (ColorRestriction.BLACK_ONLY, ColorRestriction.WHITE_ONLY):
        assert channel_count_exponent(trace.terminal, restriction) == channel_count_exponent(g, restriction)


def test_diagonal_of_a_square_ends_isolated():
    g = GridRegion.rectangle(3, 3).graph
    result = diagonal_contract(g, (0, 0))
    assert result.delta == 1
    assert result.end == (2, 2)
    assert result.end_degree == 2
    assert channel_count_exponent(result.graph) == channel_count_exponent(g) - 1


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 4), (4, 4), (4, 6), (5, 3)])
def test_diagonal_contraction_drops_dimension_by_delta(m, n):
    g = GridRegion.rectangle(m, n).graph
    result = diagonal_contract(GridRegion.rectangle(m, n), (0, 0))
    assert channel_count_exponent(result.graph) == channel_count_exponent(g) - result.delta
    if result.delta == 0:
        assert count_matchings(result.graph) % 2 == count_matchings(g) % 2


def test_diagonal_needs_a_corner():
    with pytest.raises(PreconditionError):
        diagonal_contract(GridRegion.rectangle(3, 3), (1, 0))


def test_corner_lemma_on_rectangle():
    d, b = external_degree_bound(GridRegion.rectangle(3, 4))
    assert (d, b) == (26, 10)
    assert d <= 3 * b - 4
    assert find_low_degree_external(GridRegion.rectangle(3, 4)) == (0, 2)


def test_parity_theorem_on_rectangle(parity_host):
    record = parity_theorem(parity_host, (1, 0), (2, 0), (3, 0), (4, 0))
    assert (record.m_G, record.m_Ge, record.delta_e, record.delta_v) == (41, 11, 0, 1)
    assert record.holds


def test_parity_theorem_preconditions(parity_host):
    with pytest.raises(PreconditionError):
        parity_theorem(parity_host, (0, 0), (1, 0), (2, 0), (4, 0))
    with pytest.raises(PreconditionError):
        parity_theorem(parity_host, (0, 1), (1, 1), (2, 1), (3, 1))


def _scan_reduce(g: Graph):
    """Reducer that rescans the whole graph before every move."""
    moves = []
    while True:
        leaf = next((v for v in g.vertices if g.degree(v) == 1), None)
        doubled = next(((u, w) for u in g.vertices for w in g.neighbors(u) if g.multiplicity(u, w) >= 2), None)
        two = next((v for v in g.vertices if g.degree(v) == 2 and len(g.adjacency(v)) == 2), None)
        if leaf is not None:
            g, move = fv_move(g, leaf, g.neighbors(leaf)[0])
        elif doubled is not None:
            u, w = doubled
            g, move = ed_move(g, (u, w, 0), (u, w, 1))
        elif two is not None:
            g, move = vc_move(g, two)
        else:
            return g, moves
        moves.append(move)


@settings(max_examples=150, deadline=None)
@given(multigraphs(max_vertices=12))
def test_reduce_picks_moves_in_graph_order(g):
    terminal, moves = _scan_reduce(g)
    trace = reduce(g)
    assert trace.moves == moves
    assert trace.terminal == terminal


@settings(max_examples=100, deadline=None)
@given(multigraphs(max_vertices=12, colored=True))
def test_reduce_picks_moves_in_graph_order_colored(g):
    terminal, moves = _scan_reduce(g)
    trace = reduce(g)
    assert trace.moves == moves
    assert trace.terminal == terminal


def test_reduce_large_rectangle():
    g = GridRegion.rectangle(60, 60).graph
    start = time.perf_counter()
    trace = reduce(g)
    assert time.perf_counter() - start < 30
    assert trace.moves
    assert apply_trace(g, trace.moves) == trace.terminal


def test_inner_eulerian_regions_reduce_fully():
    rng = np.random.default_rng(7)
    for _ in range(200):
        region = random_simple_region(rng, int(rng.integers(1, 31)))
        g = region.graph
        trace = reduce(g)
        assert trace.fully_reduced, region.name
        assert trace.isolated_count == channel_count_exponent(g), region.name


@pytest.mark.parametrize("n", [2, 3])
def test_aztec_diamond_contracts_to_the_next_smaller_one(n):
    first = diagonal_contract(GridRegion.aztec_diamond(n), (0, 1 - n))
    assert first.delta == 1
    smaller = GridRegion.aztec_diamond(n - 1).graph.to_networkx()
    matches = []
    for corner in first.graph.vertices:
        if first.graph.degree(corner) != 2:
            continue
        try:
            second = diagonal_contract(first.graph, corner)
        except PreconditionError:
            continue
        if second.delta == 1 and nx.is_isomorphic(second.graph.to_networkx(), smaller):
            matches.append(corner)
    assert matches
