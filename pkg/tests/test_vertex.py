import pytest

from dtcrc.enumeration import oracle_vertex
from dtcrc.partitions import ColoredPartition, Partition as P, PartitionError, partitions_up_to
from dtcrc.series import LaurentSeries, VariableTable, Window, first_mismatch
from dtcrc.vertex import (
    check_operator_window, complete_homogeneous, content_monomial, frak, graded_vertex,
    loop_schur, normalized_vertex, orbifold_vertex_operator, orbifold_vertex_schur, q_table,
    resolution_vertex, skew_schur, skew_schur_jacobi_trudi, y_table,
)


def geometric(table, window, exps):
    """1 / (1 - m) for a monomial m of positive degree."""
    one = LaurentSeries.one(table, window)
    return (one - LaurentSeries.from_exps(exps, table, window)).invert()


def test_frak():
    assert frak(0, 3) == (0, 0, 0)
    assert frak(-1, 3) == (-1, 0, 0)
    assert frak(2, 3) == (0, 1, 1)
    assert frak(4, 3) == (1, 2, 1)


@pytest.mark.parametrize("dq", [0, 3, 6])
def test_empty_vertex_is_one(dq):
    v = orbifold_vertex_operator((), (), (), 2, dq).value
    assert v.terms == {(0, 0): 1}
    assert orbifold_vertex_schur((), (), (), 2, dq).value.terms == {(0, 0): 1}


def test_operator_matches_oracle_z2():
    a = orbifold_vertex_operator((), (), (2,), 2, 4).value
    b = oracle_vertex((), (), (2,), 2, 4).value
    assert first_mismatch(a, b) is None and not a.is_zero()


def test_one_leg_n1():
    v = orbifold_vertex_operator((1,), (), (), 1, 4).value
    assert first_mismatch(v, oracle_vertex((1,), (), (), 1, 4).value) is None
    # the q0^-1 prefactor cancels the q from the only pairing, leaving 1/(1-q)
    assert v.leading_term() == ((0,), 1)
    assert first_mismatch(v, geometric(q_table(1), v.window, (1,))) is None


def test_skew_schur_examples():
    t = VariableTable(["x1", "x2", "x3"])
    w = Window(6)
    x = [(1, 0, 0), (0, 1, 0)]
    lin = LaurentSeries(t, w, {(1, 0, 0): 1, (0, 1, 0): 1})
    assert skew_schur((1,), (), x, t, w) == lin
    assert skew_schur((2,), (1,), x, t, w) == lin
    assert skew_schur((1,), (2,), x, t, w).is_zero()
    x3 = x + [(0, 0, 1)]
    a = skew_schur((2, 1), (), x3, t, w)
    b = skew_schur_jacobi_trudi((2, 1), (), x3, t, w)
    assert a == b
    # s_21(x1,x2,x3) has 8 tableaux, 2 of them of weight x1 x2 x3
    assert sum(a.terms.values()) == 8 and a.terms[(1, 1, 1)] == 2


@pytest.mark.parametrize("rho", [P((3, 1)), P((2, 2, 1)), P((3, 2))])
@pytest.mark.parametrize("omega", [P(), P((1,)), P((2, 1))])
def test_jacobi_trudi_on_geometric_alphabet(rho, omega):
    t = VariableTable(["q"])
    w = Window(9)
    alphabet = [(k,) for k in range(10)]
    assert skew_schur(rho, omega, alphabet, t, w) == \
        skew_schur_jacobi_trudi(rho, omega, alphabet, t, w)


def test_complete_homogeneous_counts():
    t = VariableTable(["a", "b"])
    h = complete_homogeneous(3, [(1, 0), (0, 1)], t, Window(5))
    assert h.terms == {(3, 0): 1, (2, 1): 1, (1, 2): 1, (0, 3): 1}


@pytest.mark.parametrize("case", [((), (), (2,), 2), ((1,), (1,), (), 1),
                                  ((2,), (1, 1), (1, 1, 1), 3)])
def test_schur_matches_operator(case):
    rp, rm, lam, n = case
    a = orbifold_vertex_operator(rp, rm, lam, n, 5).value
    b = orbifold_vertex_schur(rp, rm, lam, n, 5).value
    assert a == b


@pytest.mark.parametrize("lam,n", [((), 1), ((1,), 1), ((2, 1, 1), 2), ((3,), 3), ((2, 2), 2)])
def test_loop_schur_back_solved(lam, n):
    s = loop_schur(lam, n, 5)
    p = orbifold_vertex_operator((), (), lam, n, 8).value
    mono = content_monomial(P(lam), n)
    back = p.shift(tuple(-x for x in mono), Window(8, 0, -20))
    assert first_mismatch(s.rewindow(Window(5, 0, -20)), back) is None
    if not lam:
        assert s.terms == {(0,) * n: 1}


def test_loop_schur_single_box():
    s = loop_schur((1,), 1, 5)
    assert first_mismatch(s, geometric(q_table(1), s.window, (1,))) is None


def test_normalized_vertex_examples():
    assert normalized_vertex((), (), (), 2, 4).value.terms == {(0, 0): 1}
    p = orbifold_vertex_operator((1,), (), (1, 1), 2, 6, relative=True).value
    pt = normalized_vertex((1,), (), (1, 1), 2, 6, relative=True).value
    assert first_mismatch(pt, -(p.shift((0, 1)))) is None
    p = orbifold_vertex_operator((1,), (), (2,), 2, 6, relative=True).value
    pt = normalized_vertex((1,), (), (2,), 2, 6, relative=True).value
    assert first_mismatch(pt, p) is None


def test_unbalanced_rejected():
    with pytest.raises(PartitionError):
        orbifold_vertex_operator((), (), (1,), 2, 3)
    with pytest.raises(PartitionError):
        orbifold_vertex_schur((), (), (2,), 3, 3)


@pytest.mark.parametrize("case", [((1,), (2,), (2,), 2, 4), ((2, 1), (1,), (1, 1, 1), 3, 3)])
def test_operator_window_stable(case):
    assert check_operator_window(*case)


def test_resolution_vertex_empty():
    v = resolution_vertex((), (), ((), ()), 2, 4, 0)
    assert v.terms == {(0, 0): 1}


def test_resolution_vertex_one_box():
    # D_v = 0 keeps only tau = empty: P1_{0,0,(1)} * P1_{0,0,0} = 1/(1-q)
    v = resolution_vertex((), (), ((1,), ()), 2, 5, 0)
    t = y_table(2)
    assert first_mismatch(v, geometric(t, v.window, t.exps({"q": 1}))) is None


def test_resolution_vertex_novikov_zero_part():
    # the v-free part of any chain sum is the tau = empty product
    full = resolution_vertex((1,), (), ((), (1,)), 2, 4, 2)
    zero = resolution_vertex((1,), (), ((), (1,)), 2, 4, 0)
    t = full.table
    part = {e: c for e, c in full.terms.items() if t.novikov_degree(e) == 0}
    assert part == zero.terms


@pytest.mark.parametrize("case", [((1,), (), (2,), 2), ((), (1,), (1, 1), 2),
                                  ((1,), (1,), (1, 1, 1), 3)])
def test_graded_vertex_identity_embedding(case):
    rp, rm, lam, n = case
    matrix = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    g = graded_vertex(P(rp), P(rm), P(lam), n, q_table(n), matrix, 5)
    a = orbifold_vertex_operator(rp, rm, lam, n, 5).value
    assert first_mismatch(g, a) is None
