import numpy as np
import pytest

from src.billiards import (
    billiard_trajectory,
    bounce_check,
    fast_path_basis,
    fast_path_basis_outer,
    is_inner_semi_eulerian,
    is_simple_filled,
    nest_span,
    nest_to_channel,
    outer_completion,
    path_basis,
    rectangle_facts,
    rectangle_formulas,
    validate_nest,
)
from src.channels import black_channel_space, channel_count_exponent, is_black_channel
from src.checks.generators import random_simple_region
from src.errors import PreconditionError
from src.graph import GridRegion, inner_subgraph, outer_subgraph_is_simple_cycle
from src.matching import count_matchings, matching_parity
from src.models import ColorRestriction, Parity


def test_unitsq_has_two_paths(unitsq_region):
    assert path_basis(unitsq_region).d == 2
    assert fast_path_basis(unitsq_region).d == 2
    assert bounce_check(unitsq_region)


def test_single_path_regions(graphno2_region):
    assert path_basis(graphno2_region).d == 1
    assert path_basis(GridRegion.rectangle(5, 8)).d == 1
    assert fast_path_basis(GridRegion.rectangle(5, 8)).d == 1


def test_l_region_fast_basis(l_region):
    fast = fast_path_basis(l_region)
    assert fast.d == 2
    assert fast.d == path_basis(l_region).d
    assert fast.to_dict()["d"] == "2"


def test_paths_cover_every_face_once(unitsq_region):
    basis = path_basis(unitsq_region)
    assert sum(basis.sizes()) == len(basis.faces()) == len(unitsq_region.cells())


def test_nests_give_black_channels_of_the_inner_graph(unitsq_region):
    basis = path_basis(unitsq_region)
    inner = inner_subgraph(unitsq_region)
    for i in range(basis.d):
        nest = nest_span(basis, [i])
        assert validate_nest(unitsq_region, nest)
        assert is_black_channel(inner, nest_to_channel(unitsq_region, nest))
    with pytest.raises(PreconditionError):
        nest_span(basis, [basis.d])


def test_single_face_is_not_a_nest():
    region = GridRegion.rectangle(4, 4)
    assert not validate_nest(region, [(0, 0)])


@pytest.mark.parametrize("m", range(2, 6))
@pytest.mark.parametrize("n", range(2, 6))
def test_rectangle_formulas_against_computation(m, n):
    facts = rectangle_formulas(m, n)
    big = GridRegion.rectangle(m + 1, n + 1)
    if facts.path_basis_size is not None:
        assert path_basis(big).d == facts.path_basis_size
    small = GridRegion.rectangle(m - 1, n - 1).graph
    if facts.black_channel_dim is not None:
        assert channel_count_exponent(small, ColorRestriction.BLACK_ONLY) == facts.black_channel_dim
    assert matching_parity(small) is facts.parity


@pytest.mark.parametrize("region", [
    GridRegion.rectangle(2, 2),
    GridRegion.rectangle(4, 9),
    GridRegion.rectangle(5, 6),
    GridRegion.union(GridRegion.box(0, 0, 3, 5), GridRegion.box(0, 0, 5, 3)),
])
def test_outer_fast_basis_counts_black_channels(region):
    assert fast_path_basis_outer(region).d - 1 == black_channel_space(region.graph).dimension


def test_outer_completion_of_a_square():
    big, rotation = outer_completion(GridRegion.rectangle(2, 2).graph)
    assert len(big) == 8
    assert big.edge_count == 9
    assert is_inner_semi_eulerian((big, rotation))
    assert outer_subgraph_is_simple_cycle((big, rotation))


def test_outer_completion_rejects_disconnected_graph():
    region = GridRegion.union(GridRegion.rectangle(2, 2), GridRegion.rectangle(2, 2, x0=5))
    with pytest.raises(PreconditionError):
        outer_completion(region.graph)


def test_simple_filled_detection():
    assert is_simple_filled(GridRegion.rectangle(3, 4))
    ring = GridRegion([(x, y) for x in range(5) for y in range(5) if (x, y) != (2, 2)])
    assert not is_simple_filled(ring)
    with pytest.raises(PreconditionError):
        fast_path_basis(ring)


def test_trajectory_reflects_until_a_corner():
    path = billiard_trajectory(3, 2)
    assert path.steps == 6
    assert path.end == (0, 2)
    assert billiard_trajectory(2, 2).points == [(0, 0), (1, 1), (2, 2)]


@pytest.mark.parametrize("m,n,valuation,parity", [(4, 9, 2, Parity.EVEN), (2, 3, 0, Parity.ODD), (8, 8, 4, Parity.EVEN)])
def test_rectangle_facts(m, n, valuation, parity):
    facts = rectangle_facts(m, n)
    assert facts.guaranteed_valuation == valuation
    assert facts.parity is parity


def test_rectangle_facts_for_odd_rectangle():
    facts = rectangle_facts(1, 1)
    assert facts.notes == "R1x1 has an odd number of vertices, no matchings"
    assert facts.path_basis_size == 0
    assert facts.guaranteed_valuation is None


def test_l_region_inner_channel(l_region):
    inner = inner_subgraph(l_region)
    assert black_channel_space(inner).dimension == 1
    assert is_black_channel(inner, {(1, 1), (1, 3), (2, 4), (3, 1), (4, 2)})


def test_fast_path_basis_agrees_on_random_simple_regions():
    rng = np.random.default_rng(2024)
    for _ in range(300):
        region = random_simple_region(rng, int(rng.integers(1, 41)))
        d = fast_path_basis(region).d
        assert d == path_basis(region).d, region.name
        inner = inner_subgraph(region)
        assert d == channel_count_exponent(inner, ColorRestriction.BLACK_ONLY) + 1, region.name


def test_outer_completion_of_bridged_squares():
    squares = [(x, y) for x in (0, 1, 3, 4) for y in (0, 1)]
    h = GridRegion(squares + [(2, 1), (2, 2)]).graph
    big, rotation = outer_completion(h)
    cycle = [v for v in big.vertices if v not in h]
    assert len(cycle) == 14
    assert big.edge_count == h.edge_count + 14 + 4
    assert inner_subgraph((big, rotation)) == h
    assert is_inner_semi_eulerian((big, rotation))
    assert outer_subgraph_is_simple_cycle((big, rotation))


def test_unitsq_inner_graph_has_an_even_count(unitsq_region):
    inner = inner_subgraph(unitsq_region)
    assert len(inner) == 8
    assert channel_count_exponent(inner, ColorRestriction.BLACK_ONLY) == 1
    assert count_matchings(inner) == 4
