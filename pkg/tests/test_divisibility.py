import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from conftest import polyominoes
from src.divisibility import (
    bareiss_determinant,
    count_matchings_kasteleyn,
    divisibility_report,
    kasteleyn_sign_grid,
    matmul,
    percus_matrix,
    rectangle_count,
    smith_normal_form,
    two_nullity,
)
from src.errors import UnbalancedError, UnsupportedInputError
from src.graph import Graph, GridRegion
from src.matching import count_matchings, matching_parity
from src.models import Color, GuaranteeStatus, Parity

square_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
)


def _hexagon() -> Graph:
    names = "abcdef"
    coloring = {v: Color.BLACK if i % 2 == 0 else Color.WHITE for i, v in enumerate(names)}
    edges = [(names[i], names[(i + 1) % 6]) for i in range(6)]
    return Graph(names, edges, coloring, name="hexagon")


def _k33() -> Graph:
    blacks, whites = ["b0", "b1", "b2"], ["w0", "w1", "w2"]
    coloring = {**{b: Color.BLACK for b in blacks}, **{w: Color.WHITE for w in whites}}
    return Graph(blacks + whites, [(b, w) for b in blacks for w in whites], coloring, name="K33")


@settings(max_examples=100, deadline=None)
@given(square_matrices)
def test_bareiss_matches_sympy(a):
    assert bareiss_determinant(a) == Matrix(a).det()


@settings(max_examples=100, deadline=None)
@given(square_matrices)
def test_smith_decomposition(a):
    snf = smith_normal_form(a)
    assert matmul(matmul(snf.S, snf.D), snf.T) == a
    diag = snf.diagonal()
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert diag[:len(nonzero)] == nonzero
    assert all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))
    product = 1
    for d in diag:
        product *= d
    assert product == abs(bareiss_determinant(a))


def test_smith_known_example():
    a = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert smith_normal_form(a).diagonal() == [2, 6, 12]
    expected = sympy_snf(Matrix(a), domain=ZZ)
    assert [abs(expected[i, i]) for i in range(3)] == [2, 6, 12]


def test_two_nullity():
    assert two_nullity([[2, 0], [0, 3]]) == 1
    assert two_nullity([[1, 1], [1, 1]]) == 1
    assert two_nullity([[0, 0, 0]]) == 3


@pytest.mark.parametrize("m,n,expected", [(2, 3, 3), (3, 6, 41), (4, 4, 36), (4, 9, 6336), (8, 8, 12988816), (3, 3, 0)])
def test_rectangle_counts(m, n, expected):
    assert rectangle_count(m, n) == expected


def test_aztec_diamond_by_determinant():
    assert count_matchings_kasteleyn(GridRegion.aztec_diamond(3)) == 64


def test_sign_grid_needs_balance():
    with pytest.raises(UnbalancedError):
        kasteleyn_sign_grid(GridRegion.rectangle(3, 3))
    assert len(kasteleyn_sign_grid(GridRegion.rectangle(2, 2))) == 2


def test_signed_matrix_needs_lattice_graph():
    with pytest.raises(UnsupportedInputError):
        percus_matrix(_hexagon())


def test_faulty_signing_breaks_the_count():
    assert count_matchings_kasteleyn(GridRegion.rectangle(2, 2), faulty=True) == 0


@settings(max_examples=60, deadline=None)
@given(polyominoes(max_cells=8))
def test_determinant_count_matches_oracle(region):
    g = region.graph
    assume(len(g.black()) == len(g.white()))
    assert count_matchings_kasteleyn(region) == count_matchings(g)


def test_report_on_rectangle():
    report = divisibility_report(GridRegion.rectangle(4, 9), name="R4x9")
    assert report.dim_C_B == 2
    assert report.guaranteed_exponent == 2
    assert report.exact_count == 6336
    assert report.exact_valuation == 6
    assert report.parity is Parity.EVEN
    assert report.guarantee_status is GuaranteeStatus.PROVEN
    assert report.guarantee_holds() is True
    assert report.to_dict()["exact_count"] == "6336"


def test_report_on_odd_rectangle():
    report = divisibility_report(GridRegion.rectangle(2, 3))
    assert report.parity is Parity.ODD
    assert report.dim_C_B == 0
    assert report.exact_count == 3


def test_report_on_uncoloured_graph(channel_example):
    report = divisibility_report(channel_example)
    assert report.guarantee_target == "m_G^2"
    assert report.guaranteed_exponent == report.dim_C == 2
    assert report.dim_C_B is None
    assert report.guarantee_holds() is True
    assert report.guarantee_status is GuaranteeStatus.SIGNING_ASSUMED


def test_report_on_planar_non_lattice_graph():
    report = divisibility_report(_hexagon())
    assert report.guarantee_status is GuaranteeStatus.SIGNING_ASSUMED
    assert "Kasteleyn" in report.caveat
    assert report.exact_count == 2
    assert report.dim_C_B == 1


def test_report_on_non_planar_graph():
    report = divisibility_report(_k33())
    assert report.guarantee_status is GuaranteeStatus.INVALID
    assert report.exact_count == 6
    assert report.dim_C_B == 2
    assert report.guarantee_holds() is False
    assert "guarantee violated" not in report.notes


def test_report_skips_large_counts():
    report = divisibility_report(_hexagon(), count_cap=4)
    assert report.exact_count is None
    assert "skipped" in report.notes


def test_report_on_unbalanced_region():
    report = divisibility_report(GridRegion.rectangle(3, 3))
    assert report.exact_count == 0
    assert report.exact_valuation == float("inf")


@pytest.mark.parametrize("m", range(1, 9))
def test_rectangle_parity_law(m):
    for n in range(1, 9):
        count = rectangle_count(m, n)
        odd = math.gcd(m + 1, n + 1) == 1
        assert (count % 2 == 1) == odd
        g = GridRegion.rectangle(m, n).graph
        assert matching_parity(g) is (Parity.ODD if odd else Parity.EVEN)
        if m * n <= 20:
            assert count_matchings(g) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_aztec_diamond_counts_by_determinant(n):
    assert count_matchings_kasteleyn(GridRegion.aztec_diamond(n)) == 2 ** (n * (n + 1) // 2)


larger_matrices = st.integers(1, 10).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=200, deadline=None)
@given(larger_matrices)
def test_two_nullity_power_divides_determinant(a):
    k = two_nullity(a)
    assert bareiss_determinant(a) % 2 ** k == 0
    assert k == sum(1 for d in smith_normal_form(a).diagonal() if d % 2 == 0)
