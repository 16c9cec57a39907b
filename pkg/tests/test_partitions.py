import pytest
from hypothesis import given, settings, strategies as st

from dtcrc.partitions import (
    ColoredPartition, Partition, PartitionError, add_box_strip, all_strip_signs,
    balanced_partitions, chi_over_dim, conjugate, diagonal_length, from_colored, interlaces,
    quotient_tuples, slope, to_colored,
)

P = Partition


def test_conjugate_examples():
    # (3,3,2,1) has column lengths 4,3,2
    assert conjugate(P((3, 3, 2, 1))) == P((4, 3, 2))
    assert conjugate(P()) == P()
    assert conjugate(P((5,))) == P((1, 1, 1, 1, 1))


def test_partition_rejects_increasing():
    with pytest.raises(PartitionError):
        P((1, 2))


def test_diagonal_length():
    lam = P((3, 3, 2, 1))
    assert diagonal_length(lam, 0) == 2
    assert diagonal_length(lam, 2) == 1
    assert diagonal_length(P(), 0) == 0


def test_slope_sequence_3321():
    lam = P((3, 3, 2, 1))
    got = tuple(slope(lam, t) for t in range(-5, 5))
    assert got == (1, -1, 1, -1, 1, -1, 1, 1, -1, -1)


def test_slope_small():
    assert all(slope(P(), t) == 1 for t in range(-6, 0))
    assert all(slope(P(), t) == -1 for t in range(0, 6))
    assert slope(P((1,)), 0) == 1
    assert slope(P((1,)), -1) == -1


def test_interlaces():
    assert interlaces(P((3, 1)), P((2, 1)))
    assert not interlaces(P((2, 2)), P((3,)))
    assert all(interlaces(P((m,)), P()) for m in range(5))


def test_chi_over_dim_examples():
    assert chi_over_dim(ColoredPartition(P((2,)), 2)) == 1
    assert chi_over_dim(ColoredPartition(P((1, 1)), 2)) == -1
    big = ColoredPartition(P((10, 7, 2, 2, 1, 1, 1)), 4)
    signs = all_strip_signs(big.shape, 4)
    assert len(signs) == 1
    assert chi_over_dim(big) in signs


def test_chi_over_dim_unbalanced_names_color():
    with pytest.raises(PartitionError, match="colou?r"):
        chi_over_dim(ColoredPartition(P((1,)), 2))


def test_quotient_examples():
    q = from_colored(ColoredPartition(P((9, 9, 3, 3, 2, 2, 1, 1)), 5))
    assert q == (P((1,)), P(), P((2, 1)), P((2,)), P())
    q = from_colored(ColoredPartition(P((10, 7, 2, 2, 1, 1, 1)), 4))
    assert q == (P(), P((3, 3)), P(), P())
    assert to_colored((P(),) * 3).shape == P()


def test_from_colored_rejects_core():
    with pytest.raises(PartitionError):
        from_colored(ColoredPartition(P((2,)), 3))


def test_add_box_strip_example():
    q = (P((1,)), P(), P((2, 1)), P((2,)), P())
    new, cells, height = add_box_strip(q, 2, (1, 1))
    assert new.shape == P((9, 9, 5, 4, 4, 2, 1, 1))
    assert len(cells) == 5
    # the colour-0 strip cell sits on diagonal n*(j - i) = 0
    zero = [c for c in cells if (c[1] - c[0]) % 5 == 0]
    assert [c[1] - c[0] for c in zero] == [0]
    # the north-eastern-most cell has colour k
    ne = min(cells, key=lambda c: (c[0], -c[1]))
    assert (ne[1] - ne[0]) % 5 == 2
    assert height == len({i for i, _ in cells}) - 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_add_box_strip_from_empty(n):
    # component 0 gives the first column, component n-1 the first row
    new, cells, height = add_box_strip((P(),) * n, 0, (0, 0))
    assert new.shape == P((1,) * n)
    assert cells == [(i, 0) for i in range(n)]
    assert height == n - 1
    new, cells, height = add_box_strip((P(),) * n, n - 1, (0, 0))
    assert new.shape == P((n,))
    assert cells == [(0, j) for j in range(n)]
    assert height == 0


def test_add_box_strip_invalid():
    with pytest.raises(PartitionError):
        add_box_strip((P(), P()), 0, (1, 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_balanced_partitions_are_balanced(n):
    for w in range(3):
        for cp in balanced_partitions(n, w):
            assert cp.is_balanced()
            assert cp.shape.size == n * w


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 4), st.data())
def test_quotient_roundtrip(n, total, data):
    tuples = quotient_tuples(n, total)
    q = data.draw(st.sampled_from(tuples))
    cp = to_colored(q)
    assert cp.is_balanced()
    assert from_colored(cp) == q
    assert chi_over_dim(cp) in (1, -1)
    assert all_strip_signs(cp.shape, n) == {chi_over_dim(cp)}


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 8), max_size=7))
def test_conjugate_involution(parts):
    p = P(sorted(parts, reverse=True))
    assert conjugate(conjugate(p)) == p
    assert conjugate(p).size == p.size
    assert sum(diagonal_length(p, l) for l in range(-len(p), p.part(0) + 1)) == p.size
