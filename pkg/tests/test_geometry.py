import json
from pathlib import Path

import pytest

from dtcrc.geometry import (
    DiagramError, Edge, WebDiagram, dt_series, edge_term_orbifold, edge_term_resolution_chain,
    edge_term_resolution_nontrivial, edge_term_resolution_via_gluing, f_framings, flip_edge,
    infer_deltas, relabel_flipped, require_valid, resolve, validate_diagram,
)
from dtcrc.partitions import (
    ColoredPartition, Partition as P, PartitionError, balanced_partitions, conjugate,
    partitions_of, quotient_tuples,
)
from dtcrc.series import LaurentSeries, Window, first_mismatch
from dtcrc.vertex import orbifold_vertex_operator, overline, q_table, resolution_vertex, y_table

DATA = Path(__file__).parent / "data"


def load(name):
    return WebDiagram.load(DATA / f"{name}.json")


def one_edge(n=1, m=-1, mprime=-1, **flags):
    """Two vertices joined by a compact edge e, four outer legs."""
    legs = [{"id": x, "tail": v} for x, v in (("a1", "v0"), ("a2", "v0"), ("b1", "v1"),
                                                ("b2", "v1"))]
    return WebDiagram.from_dict({
        "vertices": [{"id": "v0", "edges": ["a1", "a2", "e"]},
                     {"id": "v1", "edges": ["b1", "b2", "e"]}],
        "edges": [{"id": "e", "tail": "v0", "head": "v1", "n": n, "m": m, "mprime": mprime,
                   **flags}] + legs,
    })


# -- validation -------------------------------------------------------------------

def test_valid_framings():
    assert validate_diagram(one_edge(m=0, mprime=-2)).ok
    assert validate_diagram(one_edge(m=-1, mprime=-1)).ok


def test_cy_violation_names_edge():
    rep = validate_diagram(one_edge(m=-1, mprime=-1, d0=1))
    assert not rep.ok
    assert any(where == "edge e" and "Calabi-Yau" in msg for where, msg in rep.problems)
    with pytest.raises(DiagramError):
        require_valid(one_edge(m=-1, mprime=-1, d0=1))


def test_orbifold_edge_must_be_e3():
    d = one_edge(n=2).to_dict()
    d["vertices"][0]["edges"] = ["e", "a1", "a2"]
    rep = validate_diagram(WebDiagram.from_dict(d))
    assert any("not e3" in msg for _, msg in rep.problems)


def test_orbifold_edge_needs_zero_deltas():
    rep = validate_diagram(one_edge(n=2, m=-1, mprime=0, d0=1))
    assert any("delta" in msg for _, msg in rep.problems)


def test_delta_pair_bound():
    rep = validate_diagram(one_edge(m=0, mprime=0, d0=1, d0p=1))
    assert any("d0 + d0p" in msg for _, msg in rep.problems)


def test_json_roundtrip(tmp_path):
    d = load("z2chain")
    path = tmp_path / "d.json"
    path.write_text(d.dumps())
    assert WebDiagram.load(path).to_dict() == d.to_dict()


# -- edge terms --------------------------------------------------------------------

def test_edge_term_examples():
    t = edge_term_orbifold(Edge("e", "a", "b"), ColoredPartition(P(), 1))
    assert (t.sign, t.colors, t.novikov) == (1, (0,), 0)
    t = edge_term_orbifold(Edge("e", "a", "b", 1, 0, -2), ColoredPartition(P((1,)), 1))
    assert (t.sign, t.colors, t.novikov) == (1, (1,), 1)
    t = edge_term_orbifold(Edge("e", "a", "b", 1, -1, -1), ColoredPartition(P((2,)), 1))
    assert (t.sign, t.colors, t.novikov) == (1, (3,), 2)


def test_edge_term_odd_sign():
    t = edge_term_orbifold(Edge("e", "a", "b", 1, -1, -1), ColoredPartition(P((1,)), 1))
    assert t.sign == -1


def test_edge_term_rejects_unbalanced():
    with pytest.raises(PartitionError):
        edge_term_orbifold(Edge("e", "a", "b", 2, -1, -1), ColoredPartition(P((1,)), 2))


def test_resolution_edge_term_examples():
    assert edge_term_resolution_nontrivial(2, -1, ((), ())) == (1, 0, (0, 0))
    assert edge_term_resolution_nontrivial(2, -1, ((1,), ())) == (1, 1, (1, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("m", [-2, -1, 0])
def test_resolution_edge_term_matches_gluing(n, m):
    for total in range(4):
        for lams in quotient_tuples(n, total):
            assert edge_term_resolution_nontrivial(n, m, lams) == \
                edge_term_resolution_via_gluing(n, m, lams)


def test_chain_edge_term():
    assert edge_term_resolution_chain(()) == 0
    assert edge_term_resolution_chain((1,)) == 1
    assert edge_term_resolution_chain((2, 1)) == 3


# -- resolution ------------------------------------------------------------------

def test_resolve_n1_is_copy():
    d = load("conifold")
    rd = resolve(d)
    assert rd.diagram.to_dict() == d.to_dict()
    assert rd.provenance == {}


def test_resolve_z2_ladder():
    m = -1
    rd = resolve(one_edge(n=2, m=m, mprime=m))
    p = rd.provenance["e"]
    assert len(p["f"]) == 2 and len(p["g"]) == 1 and len(p["h"]) == 1
    f0, f1 = (rd.diagram.edge(x) for x in p["f"])
    assert (f0.m, f0.mprime) == (2 * m + 2, -2 * m - 4)
    assert (f1.m, f1.mprime) == (2 * m, -2 * m - 2)
    assert all(x.n == 1 for x in rd.diagram.edges)
    assert validate_diagram(rd.diagram).ok


def test_resolve_z4_ladder():
    m = -1
    rd = resolve(one_edge(n=4, m=m, mprime=-2 - m))
    p = rd.provenance["e"]
    assert (len(p["f"]), len(p["g"]), len(p["h"])) == (4, 3, 3)
    rel = dict(rd.relations())
    for g, h in zip(p["g"], p["h"]):
        assert rel[g] == {h: 1}
    for k in range(1, 4):
        want = {p["f"][0]: 1}
        want.update({p["g"][l - 1]: 2 * l - 8 - 4 * m for l in range(1, k + 1)})
        assert rel[p["f"][k]] == want
    # Hirzebruch indices 4m+6, 4m+4, 4m+2 appear as the rung exponents
    assert [-(2 * l - 8 - 4 * m) for l in (1, 2, 3)] == [4 * m + 6, 4 * m + 4, 4 * m + 2]
    assert validate_diagram(rd.diagram).ok


def test_rung_deltas_match_crossed_reading():
    rd = resolve(load("z3edge"))
    for eid in rd.provenance["e"]["g"] + rd.provenance["e"]["h"]:
        e = rd.diagram.edge(eid)
        flags = {"d0": e.d0, "d0p": e.d0p, "dinf": e.dinf, "dinfp": e.dinfp}
        assert infer_deltas(rd.diagram, eid) == flags


def test_f_framings_cy():
    for n in range(1, 5):
        for m in range(-3, 2):
            for k in range(n):
                a, b = f_framings(n, m, k)
                assert a + b == -2


# -- dt series -------------------------------------------------------------------

@pytest.mark.parametrize("name", ["conifold", "z2edge", "z3edge", "z2chain"])
def test_dt_novikov_zero_is_one(name):
    s = dt_series(load(name), 4, 0)
    assert s.terms == {(0,) * len(s.table): 1}


def conifold_product(table, window):
    """prod_k (1 - (-q)^k v)^k, the resolved conifold."""
    one = LaurentSeries.one(table, window)
    out = one
    for k in range(1, window.dq + 1):
        term = LaurentSeries.monomial({"q": k, "v_e": 1}, table, window, (-1) ** k)
        out = out * (one - term) ** k
    return out


def test_conifold_closed_form():
    s = dt_series(load("conifold"), 8, 2)
    assert first_mismatch(s, conifold_product(s.table, s.window)) is None
    assert any(s.table.novikov_degree(e) == 2 for e in s.terms)


@pytest.mark.parametrize("name,top", [("z2edge", 6), ("z3edge", 9)])
def test_single_orbifold_edge_by_hand(name, top):
    """Novikov degree 1: glue the balanced partitions of weight 1 by hand."""
    d = load(name)
    e = d.edge("e")
    n = e.n
    s = dt_series(d, top, 1)
    tn, w = q_table(n), Window(top * n, 0, -top * n)
    rules = {"q0": {"q": 1, **{f"q_e_{i}": -1 for i in range(1, n)}}}
    rules.update({f"q{i}": {f"q_e_{i}": 1} for i in range(1, n)})
    want = LaurentSeries.zero(s.table, s.window)
    for cp in balanced_partitions(n, 1):
        et = edge_term_orbifold(e, cp)
        edge = LaurentSeries.from_exps(et.colors, tn, w, et.sign)
        p0 = orbifold_vertex_operator((), (), cp.shape, n, top * n).value.rewindow(w)
        p1 = orbifold_vertex_operator((), (), conjugate(cp.shape), n, top * n).value
        p1 = overline(p1.rewindow(w), n)
        local = (edge * p0 * p1).substitute({"q0": (-1, {"q0": 1})})
        glued = local.substitute(rules, target=s.table, window=s.window)
        want = want + glued.shift(s.table.exps({"v_e": 1}), s.window)
    got = LaurentSeries(s.table, s.window,
                        {x: c for x, c in s.terms.items() if s.table.novikov_degree(x) == 1})
    assert not got.is_zero()
    assert first_mismatch(got, want) is None


@pytest.mark.parametrize("name", ["conifold", "z2edge", "z3edge", "z2chain"])
def test_orientation_independence_fixtures(name):
    d = load(name)
    for e in d.compact_edges():
        a = dt_series(d, 3, 1)
        b = relabel_flipped(dt_series(flip_edge(d, e.id), 3, 1), e.id, e.n)
        assert first_mismatch(a, b) is None


@pytest.mark.parametrize("m,mprime", [(0, -2), (-2, 0), (1, -3)])
def test_orientation_independence_asymmetric_z3(m, mprime):
    d = one_edge(n=3, m=m, mprime=mprime)
    a = dt_series(d, 9, 1)
    flipped = dt_series(flip_edge(d, "e"), 9, 1)
    assert first_mismatch(a, relabel_flipped(flipped, "e", 3)) is None
    # the relabelling is needed: the raw flipped series differs
    assert first_mismatch(a, flipped) is not None


LEG_CASES = [((), (), None), ((1,), (), None), ((1,), (1,), None), ((2,), (1,), None)]


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("case", LEG_CASES)
def test_resolution_chain_equivalence(n, case):
    rp, rm, _ = case
    lams = tuple(P((1,)) if k in (0, n - 1) else P() for k in range(n))
    rd = resolve(load(f"local_z{n}"))
    legs = {"a1": rp, "a2": rm}
    legs.update({f"e.f{k}": lams[k] for k in range(n)})
    s = dt_series(rd.diagram, 4, 2, legs, signed=False)
    rules = {f"v_e.g{i}": {f"v{i}": 1} for i in range(1, n)}
    got = s.substitute(rules, target=y_table(n), window=s.window)
    want = resolution_vertex(rp, rm, lams, n, 4, 2)
    assert first_mismatch(got, want) is None


def test_threads_do_not_change_result(monkeypatch):
    d = load("z2chain")
    monkeypatch.setenv("DTCRC_THREADS", "1")
    a = dt_series(d, 5, 2)
    monkeypatch.setenv("DTCRC_THREADS", "3")
    b = dt_series(d, 5, 2)
    assert a == b and a.to_text() == b.to_text()
