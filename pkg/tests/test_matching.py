import pytest
from hypothesis import given, settings

from conftest import multigraphs
from src.errors import CapExceededError
from src.graph import Graph, GridRegion
from src.matching import (
    count_matchings,
    deletion_identities,
    enumerate_matchings,
    is_perfect_matching,
    matching_edges,
    matching_parity,
)
from src.models import Parity


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 2), (3, 3), (4, 5), (5, 8), (6, 13)])
def test_two_row_strips_count_fibonacci(n, expected):
    assert count_matchings(GridRegion.rectangle(2, n).graph) == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_aztec_diamond_counts(n):
    assert count_matchings(GridRegion.aztec_diamond(n).graph) == 2 ** (n * (n + 1) // 2)


def test_three_by_six_rectangle(parity_host):
    assert count_matchings(parity_host.graph) == 41


def test_enumeration_agrees_with_count(channel_example):
    matchings = enumerate_matchings(channel_example)
    assert len(matchings) == count_matchings(channel_example) == 2
    assert all(is_perfect_matching(channel_example, m) for m in matchings)


def test_parallel_copies_are_distinct_matchings():
    g = Graph("uv", [("u", "v", 3)])
    assert count_matchings(g) == 3
    assert sorted(e for m in enumerate_matchings(g) for e in m.edges) == [("u", "v", k) for k in range(3)]


def test_odd_graphs_have_no_matchings():
    g = GridRegion.rectangle(3, 3).graph
    assert count_matchings(g) == 0
    assert matching_parity(g) is Parity.EVEN


def test_cap_is_enforced():
    with pytest.raises(CapExceededError):
        count_matchings(GridRegion.rectangle(4, 4).graph, cap=10)


def test_deletion_identity():
    g = GridRegion.rectangle(3, 4).graph
    m_g, m_e, m_v = deletion_identities(g, (0, 0), (1, 0))
    assert m_g == m_e + m_v


def test_matching_from_pairs():
    g = GridRegion.rectangle(2, 2).graph
    m = matching_edges(g, [((1, 0), (0, 0)), ((0, 1), (1, 1))])
    assert is_perfect_matching(g, m)
    assert not is_perfect_matching(g, matching_edges(g, [((0, 0), (1, 0))]))


@settings(max_examples=80, deadline=None)
@given(multigraphs(max_vertices=10))
def test_determinant_parity_matches_oracle(g):
    expected = Parity.ODD if count_matchings(g) % 2 else Parity.EVEN
    assert matching_parity(g) is expected


@settings(max_examples=80, deadline=None)
@given(multigraphs(max_vertices=10, colored=True))
def test_bipartite_determinant_parity_matches_oracle(g):
    expected = Parity.ODD if count_matchings(g) % 2 else Parity.EVEN
    assert matching_parity(g) is expected
