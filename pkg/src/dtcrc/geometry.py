"""Web diagrams, edge terms, the resolution ladder and the gluing sum.

A web diagram is a trivalent graph whose vertices carry an ordered
counterclockwise edge triple (e1, e2, e3).  Edges carry the orbifold order
n, the framing integers m, m' and the four delta flags.  An n > 1 edge is
always the e3 edge at each of its endpoints.

The gluing sum runs over partitions on the compact edges.  Each assignment
contributes a product of edge terms and reduced vertices.  Everything is
expanded in a *target grading*: a variable table together with linear
embeddings of each vertex's and each edge's local variables.  The same
engine serves the orbifold series, the resolution series and the global
correspondence check.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from itertools import product

from .partitions import (
    ColoredPartition, EMPTY, Partition, PartitionError, balanced_partitions, conjugate,
    partitions_of,
)
from .series import BOX, NOVIKOV, LaurentSeries, SeriesError, VariableTable, Window
from .vertex import (
    _p1, _p1_lead, degree_floor, embed, graded_vertex, graded_vertex_floor, graded_vertex_lead,
)


class DiagramError(ValueError):
    """Invalid diagram input; carries the validation report."""

    def __init__(self, report):
        super().__init__(report.to_text())
        self.report = report


# -- diagram records -----------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    tail: str | None = None
    head: str | None = None
    n: int = 1
    m: int = 0
    mprime: int = -2
    d0: int = 0
    d0p: int = 0
    dinf: int = 0
    dinfp: int = 0

    @property
    def compact(self):
        return self.tail is not None and self.head is not None

    def endpoints(self):
        return [v for v in (self.tail, self.head) if v is not None]


@dataclass(frozen=True)
class Vertex:
    id: str
    edges: tuple


@dataclass
class WebDiagram:
    vertices: list
    edges: list
    _vindex: dict = field(default_factory=dict, repr=False, compare=False)
    _eindex: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = [v if isinstance(v, Vertex) else Vertex(v["id"], tuple(v["edges"]))
                         for v in self.vertices]
        self.edges = [e if isinstance(e, Edge) else Edge(**e) for e in self.edges]
        self.vertices = [Vertex(str(v.id), tuple(str(x) for x in v.edges)) for v in self.vertices]
        self._vindex = {v.id: v for v in self.vertices}
        self._eindex = {e.id: e for e in self.edges}

    def vertex(self, vid):
        return self._vindex[vid]

    def edge(self, eid):
        return self._eindex[eid]

    def compact_edges(self):
        return [e for e in self.edges if e.compact]

    def orbifold_edges(self):
        return [e for e in self.edges if e.n > 1]

    def to_dict(self):
        return {"vertices": [{"id": v.id, "edges": list(v.edges)} for v in self.vertices],
                "edges": [asdict(e) for e in self.edges]}

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        try:
            vertices = [Vertex(str(v["id"]), tuple(str(x) for x in v["edges"]))
                        for v in data["vertices"]]
            edges = []
            for e in data["edges"]:
                rec = dict(e)
                rec["id"] = str(rec["id"])
                for end in ("tail", "head"):
                    if rec.get(end) is not None:
                        rec[end] = str(rec[end])
                edges.append(Edge(**rec))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed diagram: {exc}") from exc
        return cls(vertices, edges)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


# -- validation ----------------------------------------------------------------

@dataclass
class ValidationReport:
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems

    def add(self, where, message):
        self.problems.append((where, message))

    def to_text(self):
        if self.ok:
            return "valid"
        return "\n".join(f"{where}: {msg}" for where, msg in self.problems)


def validate_diagram(d):
    """Check the structural invariants and the edge data; returns a report."""
    rep = ValidationReport()
    vids = [v.id for v in d.vertices]
    eids = [e.id for e in d.edges]
    for name, ids in (("vertex", vids), ("edge", eids)):
        dup = sorted({x for x in ids if ids.count(x) > 1})
        for x in dup:
            rep.add(f"{name} {x}", "duplicate id")
    for v in d.vertices:
        if len(v.edges) != 3 or len(set(v.edges)) != 3:
            rep.add(f"vertex {v.id}", "needs three distinct edges (e1, e2, e3)")
            continue
        for pos, eid in enumerate(v.edges, 1):
            e = d._eindex.get(eid)
            if e is None:
                rep.add(f"vertex {v.id}", f"unknown edge {eid}")
            elif v.id not in (e.tail, e.head):
                rep.add(f"vertex {v.id}", f"edge {eid} does not end at this vertex")
            elif e.n > 1 and pos != 3:
                rep.add(f"vertex {v.id}", f"edge {eid} has n={e.n} > 1 but is labelled e{pos}, not e3")
    for e in d.edges:
        where = f"edge {e.id}"
        if not e.endpoints():
            rep.add(where, "has no endpoint")
        if e.tail is not None and e.tail == e.head:
            rep.add(where, "is a loop")
        for end in e.endpoints():
            v = d._vindex.get(end)
            if v is None:
                rep.add(where, f"unknown vertex {end}")
            elif e.id not in v.edges:
                rep.add(where, f"vertex {end} does not list this edge")
        if not isinstance(e.n, int) or e.n < 1:
            rep.add(where, f"n must be a positive integer, got {e.n}")
        flags = {"d0": e.d0, "d0p": e.d0p, "dinf": e.dinf, "dinfp": e.dinfp}
        for k, x in flags.items():
            if x not in (0, 1):
                rep.add(where, f"{k} must be 0 or 1, got {x}")
        if e.d0 + e.d0p > 1:
            rep.add(where, "d0 + d0p must be 0 or 1")
        if e.dinf + e.dinfp > 1:
            rep.add(where, "dinf + dinfp must be 0 or 1")
        if e.n > 1 and any(flags.values()):
            rep.add(where, f"n={e.n} > 1 requires all delta flags to be 0")
        if e.compact:
            total = e.m + e.mprime - sum(flags.values())
            if total != -2:
                rep.add(where, f"Calabi-Yau relation m + m' - (d0 + d0p + dinf + dinfp) = -2 "
                               f"fails: {e.m} + {e.mprime} - {sum(flags.values())} = {total}")
    return rep


def require_valid(d):
    rep = validate_diagram(d)
    if not rep.ok:
        raise DiagramError(rep)
    return d


def infer_deltas(d, eid):
    """Delta flags suggested by the counterclockwise labels.

    Looking along the edge from its tail, the right-hand neighbour at the
    tail precedes the edge in counterclockwise order and the right-hand
    neighbour at the head follows it.  d0 (dinf) is set when the right-hand
    neighbour at the tail (head) is that vertex's e3; d0p, dinfp likewise
    for the left-hand neighbours.  Explicit flags in a diagram always win.
    """
    e = d.edge(eid)
    out = {"d0": 0, "d0p": 0, "dinf": 0, "dinfp": 0}
    for end, shift_r, kr, kl in ((e.tail, -1, "d0", "d0p"), (e.head, 1, "dinf", "dinfp")):
        if end is None:
            continue
        labels = d.vertex(end).edges
        pos = labels.index(eid)
        right = labels[(pos + shift_r) % 3]
        left = labels[(pos - shift_r) % 3]
        out[kr] = int(right == labels[2])
        out[kl] = int(left == labels[2])
    return out


def flip_edge(d, eid):
    """Reverse an edge: (m, d0, dinf) <-> (m', dinfp, d0p), tail <-> head.

    Partitions on the edge are read conjugated afterwards, and for n > 1 the
    edge variables are relabelled q_{e,i} <-> q_{e,-i}.
    """
    e = d.edge(eid)
    new = replace(e, tail=e.head, head=e.tail, m=e.mprime, mprime=e.m,
                  d0=e.dinfp, dinf=e.d0p, d0p=e.dinf, dinfp=e.d0)
    return WebDiagram(list(d.vertices), [new if x.id == eid else x for x in d.edges])


def vertex_legs(d, v, assignment, legs=None):
    """The partitions (lambda1, lambda2, lambda3) seen from ``v``.

    Incoming edges contribute the conjugate of their partition.
    """
    out = []
    for eid in v.edges:
        e = d.edge(eid)
        if e.compact:
            lam = assignment.get(eid, EMPTY)
        else:
            lam = (legs or {}).get(eid, EMPTY)
        lam = Partition(lam)
        out.append(lam if e.tail == v.id else conjugate(lam))
    return tuple(out)


def vertex_order(d, v):
    return d.edge(v.edges[2]).n


def e3_incoming(d, v):
    return d.edge(v.edges[2]).head == v.id


# -- edge terms ----------------------------------------------------------------

@dataclass(frozen=True)
class EdgeTerm:
    """sign * v^novikov * prod_c q_c^colors[c] for one edge."""
    sign: int
    colors: tuple
    novikov: int

    def series(self, table, names, v_name, window):
        mapping = {nm: x for nm, x in zip(names, self.colors) if x}
        if self.novikov:
            mapping[v_name] = mapping.get(v_name, 0) + self.novikov
        return LaurentSeries.monomial(mapping, table, window, self.sign)


def edge_term_orbifold(e, cp):
    """The gluing edge term of a balanced colored partition on ``e``."""
    n = e.n
    if not isinstance(cp, ColoredPartition):
        cp = ColoredPartition(Partition(cp), n)
    if cp.modulus != n:
        raise PartitionError(f"partition has modulus {cp.modulus}, edge has n={n}")
    cp.check_balanced()
    size = cp.shape.size
    colors = [0] * n
    for i, j in cp.shape.cells():
        colors[(j - i) % n] += -e.m * j - e.mprime * i + 1
    sign = -1 if ((e.m + e.d0 + e.dinf) * size) % 2 else 1
    return EdgeTerm(sign, tuple(colors), size // n)


def f_framings(n, m, k):
    """(m, m') of the k-th ladder edge replacing an n-edge with framing m."""
    return n * m + 2 * (n - k - 1), -n * m - 2 * (n - k)


def edge_term_resolution_nontrivial(n, m, lambdas):
    """The closed-form product over the ladder edges f_0..f_{n-1}.

    Returns (sign, q exponent, novikov exponents per f_k).
    """
    lams = [Partition(x) for x in lambdas]
    if len(lams) != n:
        raise PartitionError(f"expected {n} partitions")
    sign, qexp, nov = 1, 0, []
    for k, lam in enumerate(lams):
        for i, j in lam.cells():
            if (n * m) % 2:
                sign = -sign
            qexp += (n * m + 2 * (n - k)) * (i - j) + 2 * j + 1
        nov.append(lam.size)
    return sign, qexp, tuple(nov)


def edge_term_resolution_via_gluing(n, m, lambdas):
    """The same quantity as a product of per-edge gluing terms with the f framings."""
    sign, qexp, nov = 1, 0, []
    for k, lam in enumerate(lambdas):
        mf, mfp = f_framings(n, m, k)
        t = edge_term_orbifold(Edge(f"f{k}", "a", "b", 1, mf, mfp), ColoredPartition(Partition(lam), 1))
        sign *= t.sign
        qexp += t.colors[0]
        nov.append(t.novikov)
    return sign, qexp, tuple(nov)


def edge_term_resolution_chain(lam):
    """Rung edges: (q v)^{|lambda|}; returned as the common exponent."""
    return Partition(lam).size


# -- resolution ------------------------------------------------------------------

@dataclass
class ResolutionDiagram:
    diagram: WebDiagram
    provenance: dict
    source: WebDiagram

    def relations(self):
        """u_{g_k} = u_{h_k} and u_{f_k} = u_{f_0} prod_{l<=k} u_{g_l}^(2l - 2n - mn)."""
        out = []
        for eid, p in self.provenance.items():
            e = self.source.edge(eid)
            n, m = e.n, e.m
            for g, h in zip(p["g"], p["h"]):
                out.append((g, {h: 1}))
            for k in range(1, n):
                rhs = {p["f"][0]: 1}
                for l in range(1, k + 1):
                    rhs[p["g"][l - 1]] = 2 * l - 2 * n - m * n
                out.append((p["f"][k], rhs))
        return out


def resolve(d):
    """Replace every n > 1 edge by its ladder of n = 1 edges."""
    require_valid(d)
    vertices = {v.id: v for v in d.vertices}
    edges = {e.id: e for e in d.edges}
    order_v = [v.id for v in d.vertices]
    order_e = [e.id for e in d.edges]
    provenance = {}
    for e in d.orbifold_edges():
        n = e.n
        f = [f"{e.id}.f{k}" for k in range(n)]
        g = [f"{e.id}.g{k}" for k in range(1, n)]
        h = [f"{e.id}.h{k}" for k in range(1, n)]
        provenance[e.id] = {"f": f, "g": g, "h": h}
        tail_ids = [f"{e.tail}.a{k}" for k in range(n)] if e.tail else [None] * n
        head_ids = [f"{e.head}.b{k}" for k in range(n)] if e.head else [None] * n
        new_edges = []
        for k in range(n):
            m, mp = f_framings(n, e.m, k)
            new_edges.append(Edge(f[k], tail_ids[k], head_ids[k], 1, m, mp))
        for side, ids, rung in (("tail", tail_ids, g), ("head", head_ids, h)):
            vid = getattr(e, side)
            if vid is None:
                continue
            e1, e2, _ = vertices[vid].edges
            new_v = []
            for k in range(n):
                if side == "tail":
                    # a_k: (g_{k+1}, g_k, f_k); g_k runs a_{k-1} -> a_k
                    first = rung[k] if k < n - 1 else e1
                    second = rung[k - 1] if k > 0 else e2
                else:
                    # b_k: (h_k, h_{k+1}, f_k); h_k runs b_k -> b_{k-1}
                    first = rung[k - 1] if k > 0 else e1
                    second = rung[k] if k < n - 1 else e2
                new_v.append(Vertex(ids[k], (first, second, f[k])))
            for k in range(1, n):
                if side == "tail":
                    t, hd = ids[k - 1], ids[k]
                else:
                    t, hd = ids[k], ids[k - 1]
                new_edges.append(Edge(rung[k - 1], t, hd, 1, 0, 0, 1, 0, 1, 0))
            # the two outer legs now end on the first and last rung vertices
            for leg, new_end in ((e1, ids[n - 1] if side == "tail" else ids[0]),
                                 (e2, ids[0] if side == "tail" else ids[n - 1])):
                old = edges[leg]
                edges[leg] = replace(old, tail=new_end if old.tail == vid else old.tail,
                                     head=new_end if old.head == vid else old.head)
            del vertices[vid]
            pos = order_v.index(vid)
            order_v[pos:pos + 1] = [v.id for v in new_v]
            vertices.update({v.id: v for v in new_v})
        del edges[e.id]
        pos = order_e.index(e.id)
        order_e[pos:pos + 1] = [x.id for x in new_edges]
        edges.update({x.id: x for x in new_edges})
    rd = WebDiagram([vertices[v] for v in order_v], [edges[x] for x in order_e])
    return ResolutionDiagram(rd, provenance, d)


# -- target gradings ---------------------------------------------------------------

@dataclass(frozen=True)
class Grading:
    """Where the gluing sum is expanded.

    ``vertex_maps[v] = (n, matrix)`` embeds the vertex's q_0..q_{n-1};
    ``edge_maps[e]`` embeds the edge's colour variables; ``edge_images[e]``
    is the image of the edge's Kahler variable.  The sign rule flips the
    variable at index ``q_index``.
    """
    table: VariableTable
    q_index: int
    vertex_maps: tuple
    edge_maps: tuple
    edge_images: tuple

    def vertex_map(self, vid):
        return dict(self.vertex_maps)[vid]

    def edge_map(self, eid):
        return dict(self.edge_maps)[eid]

    def edge_image(self, eid):
        return dict(self.edge_images)[eid]


def orbifold_names(d):
    names = ["q"]
    for e in d.orbifold_edges():
        names += [f"q_{e.id}_{i}" for i in range(1, e.n)]
    names += [f"v_{e.id}" for e in d.compact_edges()]
    return names


def orbifold_table(d, region="orbifold", weight=None):
    """q, q_{e,i} (i >= 1) and the Novikov v_e.

    In the orbifold region q has weight max n_e and each q_{e,i} weight 1, so
    every q_{e,0} = q / prod q_{e,i} has positive degree.  In the resolution
    region q has weight 1 and each q_{e,i} has weight ``weight``.
    """
    names = orbifold_names(d)
    kinds = [NOVIKOV if nm.startswith("v_") else BOX for nm in names]
    if region == "orbifold":
        wq = max([e.n for e in d.edges] + [1])
        weights = [wq] + [1] * (len(names) - 1)
    elif region == "resolution":
        if weight is None:
            raise ValueError("the resolution region needs a weight")
        weights = [1] + [weight if k == BOX else 1 for k in kinds[1:]]
    else:
        raise ValueError(f"unknown region {region!r}")
    return VariableTable(names, kinds, weights)


def _colour_matrix(table, eid, n, bar=False):
    rows = []
    for i in range(n):
        j = (-i) % n if bar else i
        row = [0] * len(table)
        row[table.index["q"]] = 1 if j == 0 else 0
        if j == 0:
            for k in range(1, n):
                row[table.index[f"q_{eid}_{k}"]] -= 1
        else:
            row[table.index[f"q_{eid}_{j}"]] = 1
        rows.append(tuple(row))
    return tuple(rows)


def orbifold_grading(d, region="orbifold", weight=None, table=None):
    table = table or orbifold_table(d, region, weight)
    qrow = (table.exps({"q": 1}),)
    vmaps, emaps, images = [], [], []
    for v in d.vertices:
        e3 = d.edge(v.edges[2])
        if e3.n > 1:
            vmaps.append((v.id, (e3.n, _colour_matrix(table, e3.id, e3.n, e3_incoming(d, v)))))
        else:
            vmaps.append((v.id, (1, qrow)))
    for e in d.compact_edges():
        emaps.append((e.id, _colour_matrix(table, e.id, e.n) if e.n > 1 else qrow))
        images.append((e.id, table.exps({f"v_{e.id}": 1})))
    return Grading(table, table.index["q"], tuple(vmaps), tuple(emaps), tuple(images))


# -- the gluing sum ------------------------------------------------------------------

def _threads():
    try:
        return max(1, int(os.environ.get("DTCRC_THREADS", "1")))
    except ValueError:
        return 1


def _mul_dicts(a, b, table, top):
    out = {}
    for ea, ca in a.items():
        da = table.box_degree(ea)
        for eb, cb in b.items():
            if da + table.box_degree(eb) > top:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def _vertex_lead(n, matrix, table, lg):
    if n == 1:
        return _p1_lead(*lg) * table.box_degree(matrix[0])
    return graded_vertex_lead(lg[0], lg[1], lg[2], n, table, matrix)


def _vertex_terms(n, matrix, table, lg, lead, slack):
    if n == 1:
        w = table.box_degree(matrix[0])
        s = _p1(lg[0], lg[1], lg[2], slack // w)
        return {tuple(k * x for x in matrix[0]): c for (k,), c in s.terms.items()}
    return dict(graded_vertex(lg[0], lg[1], lg[2], n, table, matrix, lead + slack).terms)


def assignment_term(d, grading, assignment, legs, top, signed=True):
    """One assignment's contribution as a term dict, exact up to ``top``."""
    table = grading.table
    vmaps, emaps, images = (dict(grading.vertex_maps), dict(grading.edge_maps),
                            dict(grading.edge_images))
    sign, mono = 1, [0] * len(table)
    for e in d.compact_edges():
        lam = Partition(assignment.get(e.id, EMPTY))
        if not lam.size:
            continue
        t = edge_term_orbifold(e, ColoredPartition(lam, e.n))
        sign *= t.sign
        x = embed(emaps[e.id], t.colors)
        mono = [a + b + t.novikov * c for a, b, c in zip(mono, x, images[e.id])]
    mono = tuple(mono)
    factors = []
    for v in d.vertices:
        n, matrix = vmaps[v.id]
        lg = vertex_legs(d, v, assignment, legs)
        factors.append((n, matrix, lg, _vertex_lead(n, matrix, table, lg)))
    base = table.box_degree(mono) + sum(f[3] for f in factors)
    if base > top:
        return {}
    slack = top - base
    acc = {mono: sign}
    rest = sum(f[3] for f in factors)
    for n, matrix, lg, lead in factors:
        rest -= lead
        acc = _mul_dicts(acc, _vertex_terms(n, matrix, table, lg, lead, slack), table, top - rest)
        if not acc:
            return {}
    if signed:
        qi = grading.q_index
        acc = {e: (-c if e[qi] % 2 else c) for e, c in acc.items()}
    return acc


def _novikov_assignments(d, grading, novikov):
    """Assignments of the Novikov-graded compact edges with total degree ``novikov``."""
    table = grading.table
    images = dict(grading.edge_images)
    edges = [e for e in d.compact_edges() if table.novikov_degree(images[e.id]) > 0]
    degs = [table.novikov_degree(images[e.id]) for e in edges]

    def rec(i, left):
        if i == len(edges):
            if left == 0:
                yield {}
            return
        for k in range(left // degs[i] + 1):
            choices = balanced_partitions(edges[i].n, k) if edges[i].n > 1 else partitions_of(k)
            for lam in choices:
                shape = lam.shape if isinstance(lam, ColoredPartition) else Partition(lam)
                for rest in rec(i + 1, left - k * degs[i]):
                    out = dict(rest)
                    if shape.size:
                        out[edges[i].id] = shape
                    yield out
    return list(rec(0, novikov))


def _box_edges(d, grading):
    table = grading.table
    images = dict(grading.edge_images)
    return [e for e in d.compact_edges() if table.novikov_degree(images[e.id]) == 0]


def _box_edge_costs(d, grading, base_assign, legs, box):
    """Per-box net degree of each box-graded edge, given the rest of the assignment."""
    table = grading.table
    images = dict(grading.edge_images)
    vmaps = dict(grading.vertex_maps)
    costs = []
    for e in box:
        if e.m or e.mprime:
            raise SeriesError(f"edge {e.id}: only m = m' = 0 edges may be box-graded")
        c = table.box_degree(images[e.id])
        for end in (e.tail, e.head):
            v = d.vertex(end)
            n, matrix = vmaps[v.id]
            if n != 1:
                raise SeriesError(f"edge {e.id}: box-graded edges must meet n = 1 vertices")
            lam3 = vertex_legs(d, v, base_assign, legs)[2]
            pos = v.edges.index(e.id)
            wq = table.box_degree(matrix[0])
            if pos == 0:
                c -= wq * (lam3.part(0) + 1)
            elif pos == 1:
                c -= wq * (len(lam3) + 1)
            else:
                raise SeriesError(f"edge {e.id}: box-graded edges cannot be e3")
        c += table.box_degree(matrix[0])  # the q of (q u)^{|lambda|}
        if c < 1:
            raise SeriesError(f"edge {e.id}: the grading does not make its sum converge")
        costs.append(c)
    return costs


def _floor(d, grading, assignment, legs):
    table = grading.table
    vmaps = dict(grading.vertex_maps)
    total = 0
    for v in d.vertices:
        n, matrix = vmaps[v.id]
        lg = vertex_legs(d, v, assignment, legs)
        if n == 1:
            total += degree_floor(*lg) * table.box_degree(matrix[0])
        else:
            total += graded_vertex_floor(lg[0], lg[1], lg[2], n, table, matrix)
    images = dict(grading.edge_images)
    emaps = dict(grading.edge_maps)
    for e in d.compact_edges():
        lam = Partition(assignment.get(e.id, EMPTY))
        if lam.size:
            t = edge_term_orbifold(e, ColoredPartition(lam, e.n))
            total += table.box_degree(embed(emaps[e.id], t.colors)) + \
                t.novikov * table.box_degree(images[e.id])
    return total


def _size_vectors(costs, budget):
    if not costs:
        yield ()
        return
    for s in range(budget // costs[0] + 1):
        for rest in _size_vectors(costs[1:], budget - s * costs[0]):
            yield (s,) + rest


def full_assignments(d, grading, novikov, legs, top, keep=None):
    """Every assignment of Novikov degree ``novikov`` that can reach degree <= top."""
    box = _box_edges(d, grading)
    out = []
    for base in _novikov_assignments(d, grading, novikov):
        if keep is not None and not keep(base):
            continue
        if not box:
            out.append(base)
            continue
        costs = _box_edge_costs(d, grading, base, legs, box)
        budget = top - _floor(d, grading, base, legs)
        if budget < 0:
            continue
        for sizes in _size_vectors(costs, budget):
            for parts in product(*[partitions_of(s) for s in sizes]):
                a = dict(base)
                for e, lam in zip(box, parts):
                    if lam.size:
                        a[e.id] = Partition(lam)
                out.append(a)
    return out


def _sum_chunk(args):
    d, grading, chunk, legs, top, signed = args
    total = {}
    for a in chunk:
        for e, c in assignment_term(d, grading, a, legs, top, signed).items():
            v = total.get(e, 0) + c
            if v:
                total[e] = v
            else:
                total.pop(e, None)
    return total


def gluing_terms(d, grading, novikov, top, legs=None, signed=True, keep=None):
    """Term dict of all assignments with Novikov degree exactly ``novikov``."""
    assigns = full_assignments(d, grading, novikov, legs, top, keep)
    threads = _threads()
    if threads == 1 or len(assigns) < 2:
        return _sum_chunk((d, grading, assigns, legs, top, signed))
    chunks = [assigns[i::threads] for i in range(threads)]
    total = {}
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(_sum_chunk, [(d, grading, c, legs, top, signed) for c in chunks]):
            for e, c in part.items():
                v = total.get(e, 0) + c
                if v:
                    total[e] = v
                else:
                    total.pop(e, None)
    return total


def dt_series(d, dq, dv, legs=None, signed=True, region="orbifold", weight=None):
    """The DT series of a diagram: box degree <= dq, Novikov degree <= dv.

    ``legs`` optionally fixes partitions on non-compact edges.  With
    ``signed`` the sign rule q_{e,0} -> -q_{e,0} is applied, which in the
    independent variables flips the sign of q.
    """
    require_valid(d)
    grading = orbifold_grading(d, region, weight)
    terms = {}
    for k in range(dv + 1):
        terms.update(gluing_terms(d, grading, k, dq, legs, signed))
    table = grading.table
    low = min([table.box_degree(e) for e in terms] + [0])
    return LaurentSeries(table, Window(dq, dv, min(low, -dq)), terms)


def relabel_flipped(series, eid, n):
    """Apply q_{e,i} -> q_{e,-i}, the relabelling that accompanies a flip of ``eid``."""
    if n == 1:
        return series
    rules = {f"q_{eid}_{i}": {f"q_{eid}_{n - i}": 1} for i in range(1, n)}
    return series.substitute(rules)
