import pytest

from dtcrc.enumeration import (
    Legs, ThreeDPartition, cell_counts, colored_generating_function, count_plane_partitions_cells,
    count_plane_partitions_layers, leg_constant, leg_constant_boxed, oracle_vertex,
    renormalized_color_count, slice_counts,
)
from dtcrc.partitions import ColoredPartition, Partition as P, PartitionError
from dtcrc.series import LaurentSeries, first_mismatch
from dtcrc.vertex import orbifold_vertex_operator, q_table

MACMAHON = [1, 1, 3, 6, 13, 24]


def test_plane_partitions_two_ways():
    assert [count_plane_partitions_layers(d) for d in range(6)] == MACMAHON
    assert [count_plane_partitions_cells(d) for d in range(6)] == MACMAHON


def test_unreduced_empty_vertex():
    f = colored_generating_function((), (), (), 1, 5, reduced=False)
    assert [f.coefficient({"q0": d}) for d in range(6)] == MACMAHON


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reduced_empty_vertex_is_one(n):
    v = oracle_vertex((), (), (), n, 5).value
    assert v.terms == {(0,) * n: 1}


def test_renormalized_counts():
    assert renormalized_color_count(ThreeDPartition(), 4) == (0, 0, 0, 0)
    assert renormalized_color_count(ThreeDPartition({(0, 0, 0)}), 3) == (1, 0, 0)
    assert renormalized_color_count(ThreeDPartition(legs=Legs(c=(1,))), 2) == (0, 0)


def test_three_d_partition_rejects_floating_cell():
    with pytest.raises(ValueError):
        ThreeDPartition({(0, 0, 1)})


LEG_CASES = [((1,), (), ()), ((2,), (1, 1), ()), ((1,), (1,), (1,)), ((2, 1), (1,), (2,))]


@pytest.mark.parametrize("legs", LEG_CASES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_slice_counts_match_cell_search(legs, n):
    lg = Legs(*legs)
    assert slice_counts(lg, n, 3) == cell_counts(lg, n, 3)


@pytest.mark.parametrize("legs", LEG_CASES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_leg_constant_stabilizes(legs, n):
    lg = Legs(*legs)
    N = n * (lg.extent() + 2)
    assert leg_constant_boxed(lg, n, N) == leg_constant(lg, n)
    assert leg_constant_boxed(lg, n, N + n) == leg_constant(lg, n)


def test_oracle_matches_operator_one_leg():
    a = oracle_vertex((1,), (), (), 1, 4).value
    b = orbifold_vertex_operator((1,), (), (), 1, 4).value
    assert first_mismatch(a, b) is None


@pytest.mark.parametrize("case", [((2,), (1, 1), (2,), 2), ((1,), (2,), (1, 1, 1), 3),
                                  ((2, 1), (), (3, 1), 2)])
def test_oracle_matches_operator_asymmetric(case):
    rp, rm, lam, n = case
    a = oracle_vertex(rp, rm, lam, n, 4, relative=True).value
    b = orbifold_vertex_operator(rp, rm, lam, n, 4, relative=True).value
    assert a.window == b.window
    assert first_mismatch(a, b) is None


def test_oracle_rejects_unbalanced():
    with pytest.raises(PartitionError):
        oracle_vertex((), (), (1,), 2, 3)
