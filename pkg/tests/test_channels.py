import itertools
import math

import pytest
from hypothesis import given, settings

from conftest import multigraphs
from src.channels import (
    black_channel_space,
    channel_count_exponent,
    channel_matrix_equivalence,
    channel_space,
    channel_sum,
    dimension_identity_check,
    is_black_channel,
    is_channel,
    is_independent,
    make_channel,
    split_by_color,
    step_diagonal_channels,
    step_diagonal_edges,
    step_diagonal_graph,
    white_channel_space,
)
from src.divisibility import count_matchings_kasteleyn
from src.errors import PreconditionError
from src.graph import GridRegion
from src.models import ColorRestriction
from src.utils import two_adic_valuation

EXAMPLE_CHANNELS = [set("acde"), set("bd"), set("abce")]


def test_example_channels(channel_example):
    assert channel_space(channel_example).dimension == 2
    for c in EXAMPLE_CHANNELS:
        assert is_channel(channel_example, c)
    assert not is_channel(channel_example, {"a"})


def test_sum_of_two_channels_is_the_third(channel_example):
    a, b, c = (make_channel(channel_example, s) for s in EXAMPLE_CHANNELS)
    assert channel_sum(a, b).vertices == c.vertices
    assert is_independent(channel_example, [a, b])
    assert not is_independent(channel_example, [a, b, c])


def test_channel_space_basis_is_valid(channel_example):
    basis = channel_space(channel_example)
    assert all(is_channel(channel_example, c) for c in basis.basis)
    assert basis.to_dict()["dimension"] == "2"


def test_rectangle_black_channels():
    g = GridRegion.rectangle(4, 9).graph
    black = black_channel_space(g)
    assert black.dimension == 2
    assert all(is_black_channel(g, c) for c in black.basis)
    assert white_channel_space(g).dimension == 2


def test_colour_split_of_a_channel():
    g = GridRegion.rectangle(2, 2).graph
    c = make_channel(g, g.vertices)
    black, white = split_by_color(g, c)
    assert is_channel(g, black) and is_channel(g, white)
    assert len(black) == len(white) == 2


def test_dimension_identity_on_unbalanced_square():
    g = GridRegion.rectangle(3, 3).graph
    assert dimension_identity_check(g)
    assert (channel_count_exponent(g, ColorRestriction.BLACK_ONLY)
            - channel_count_exponent(g, ColorRestriction.WHITE_ONLY)) == 1


@settings(max_examples=80, deadline=None)
@given(multigraphs(max_vertices=10, colored=True))
def test_bipartite_dimension_identities(g):
    assert dimension_identity_check(g)
    assert channel_matrix_equivalence(g)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_step_diagonal_channels_hit_one_step_vertex_each(r):
    channels = step_diagonal_channels(r)
    steps = {u for u, _ in step_diagonal_edges(r)}
    assert len(channels) == r
    for t, c in enumerate(channels):
        assert c.vertices & steps == {(t, t)}


def test_step_diagonal_graph_deletes_edges():
    assert step_diagonal_graph(2).edge_count == 24
    assert step_diagonal_graph(2, [0, 1]).edge_count == 22
    with pytest.raises(PreconditionError):
        step_diagonal_graph(2, [2])


RECTANGLE_SIDES = [(m, n) for m in range(2, 14) for n in range(2, 14) if ((m - 1) * (n - 1)) % 2 == 0]


@pytest.mark.parametrize("m,n", RECTANGLE_SIDES)
def test_black_channel_dimension_of_rectangles(m, n):
    g = GridRegion.rectangle(m - 1, n - 1).graph
    assert channel_count_exponent(g, ColorRestriction.BLACK_ONLY) == (math.gcd(m, n) - 1) // 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_aztec_diamond_channel_dimension(n):
    assert channel_space(GridRegion.aztec_diamond(n).graph).dimension == 2 * n


@pytest.mark.parametrize("r", [1, 2, 3])
def test_step_diagonal_deletions(r):
    channels = step_diagonal_channels(r)
    for k in range(r + 1):
        for deleted in itertools.combinations(range(r), k):
            g = step_diagonal_graph(r, deleted)
            surviving = [i for i, c in enumerate(channels) if is_channel(g, c)]
            assert surviving == [i for i in range(r) if i not in deleted]
            assert two_adic_valuation(count_matchings_kasteleyn(g)) >= r - k
