"""Crepant resolution correspondences: the vertex identity, the box-removal
commutation factors, and the global check on web diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .partitions import (
    ColoredPartition, Partition, PartitionError, add_box_strip, chi_over_dim, conjugate,
    diagonal_length, from_colored, partitions_of, quotient_tuples, removable_cells, slope,
    to_colored,
)
from .series import LaurentSeries, VariableTable, Window, first_mismatch, product_of_inverses
from .vertex import (
    content_monomial, degree_floor, frak, graded_vertex, hook_monomial, normalized_vertex, q_table,
    resolution_chain, resolution_in_orbifold_variables, skew_schur,
)


@dataclass
class Report:
    status: str
    first_mismatch: dict | None = None
    window: tuple | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        out = {"status": self.status, "first_mismatch": self.first_mismatch}
        if self.window is not None:
            out["window"] = {"dq": self.window[0], "dv": self.window[1], "dlow": self.window[2]}
        if self.details:
            out["details"] = self.details
        return out

    def to_text(self):
        lines = [f"status: {self.status}"]
        if self.window is not None:
            lines.append(f"window: dq={self.window[0]} dv={self.window[1]} dlow={self.window[2]}")
        if self.first_mismatch:
            m = self.first_mismatch
            mono = " ".join(f"{k}^{v}" for k, v in sorted(m["monomial"].items())) or "1"
            lines.append(f"first mismatch: {mono} lhs={m['lhs_coeff']} rhs={m['rhs_coeff']}")
        for k in sorted(self.details):
            lines.append(f"{k}: {self.details[k]}")
        return "\n".join(lines)


def compare(lhs, rhs, details=None):
    mm = first_mismatch(lhs, rhs)
    w = lhs.window
    window = (min(w.dq, rhs.window.dq), min(w.dv, rhs.window.dv), w.dlow)
    if mm is None:
        return Report("pass", None, window, details or {})
    mono, a, b = mm
    return Report("fail", {"monomial": mono, "lhs_coeff": a, "rhs_coeff": b}, window,
                  details or {})


# -- vertex CRC ----------------------------------------------------------------------

def vertex_crc_prefactor(lambdas, n):
    """(sign, exponent tuple) of prod_k prod_{(i,j) in lambda_k}
    (-1)^(n-k-1) q^((n-k-1)(i-j)) prod_{l>k} q_l^(n-l), with q = q_0...q_{n-1}."""
    e = [0] * n
    sign = 1
    for k, lk in enumerate(lambdas):
        for i, j in Partition(lk).cells():
            if (n - k - 1) % 2:
                sign = -sign
            for c in range(n):
                e[c] += (n - k - 1) * (i - j)
            for l in range(k + 1, n):
                e[l] += n - l
    return sign, tuple(e)


def vertex_crc_prefactor_series(lambdas, n, window=None):
    sign, e = vertex_crc_prefactor(lambdas, n)
    table = q_table(n)
    d = table.box_degree(e)
    window = window or Window(max(d, 0), 0, min(d, 0))
    return LaurentSeries.from_exps(e, table, window, sign)


def resolution_normalizer(lambdas, n):
    """Exponent tuple of prod_k prod_{(i,j) in lambda_k} q^i."""
    total = sum(i for lk in lambdas for i, _ in Partition(lk).cells())
    return (total,) * n


def vertex_crc_sides(rho_plus, rho_minus, lambda_bar, n, dq, dv=None, relative=True):
    """Both sides of the vertex identity as series in q_0..q_{n-1}.

    The left side is the normalized orbifold vertex.  The right side is the
    chained resolution vertex with v_i -> q_i, normalized, divided by its
    empty-leg value and multiplied by the prefactor.  ``dv`` bounds the total
    size of the intermediate partitions (default dq + sum |lambda_k|).
    """
    lam = lambda_bar if isinstance(lambda_bar, ColoredPartition) else \
        ColoredPartition(Partition(lambda_bar), n)
    lam.check_balanced()
    lambdas = from_colored(lam)
    if dv is None:
        dv = dq + sum(Partition(x).size for x in lambdas)
    lhs = normalized_vertex(rho_plus, rho_minus, lam, n, dq, relative=relative).value
    top = lhs.window.dq
    sign, pre = vertex_crc_prefactor(lambdas, n)
    norm = resolution_normalizer(lambdas, n)
    table = q_table(n)
    shift = tuple(a + b for a, b in zip(pre, norm))
    d = table.box_degree(shift)
    num = resolution_in_orbifold_variables(rho_plus, rho_minus, lambdas, n, top - d, dv)
    rhs_window = Window(top, 0, lhs.window.dlow)
    if num.is_zero():
        return lhs, LaurentSeries.zero(table, rhs_window)
    lead = num.min_box_degree()
    den = resolution_in_orbifold_variables((), (), [()] * n, n, max(top - d - lead, 0), dv)
    wide = Window(max(top - d, 0) + max(-lead, 0), 0, min(num.window.dlow, 0))
    ratio = num.rewindow(wide) * den.rewindow(wide).invert()
    if not ratio.is_zero():
        # keep low terms visible so a disagreement is reported, not dropped
        low = min(rhs_window.dlow, ratio.min_box_degree() + d)
        rhs_window = Window(top, 0, low)
    rhs = ratio.shift(shift, rhs_window)
    if sign < 0:
        rhs = -rhs
    return lhs, rhs


def check_vertex_crc(rho_plus, rho_minus, lambda_bar, n, dq, dv=None, relative=True,
                     region="resolution", corrupt_prefactor=False):
    """Compare both sides of the vertex identity.

    ``region="resolution"`` (the default) expands both sides where the
    chained resolution vertex converges; ``region="orbifold"`` substitutes
    v_i -> q_i into the chain sum directly, which only converges for some
    inputs.
    """
    shape = Partition(getattr(lambda_bar, "shape", lambda_bar))
    details = {"lambda_bar": str(shape), "rho_plus": str(Partition(rho_plus)),
               "rho_minus": str(Partition(rho_minus)), "n": n, "region": region}
    if region == "orbifold":
        lhs, rhs = vertex_crc_sides(rho_plus, rho_minus, lambda_bar, n, dq, dv, relative)
    else:
        lhs, rhs, w = resolution_region_sides(rho_plus, rho_minus, shape, n, dq, relative,
                                              corrupt_prefactor=corrupt_prefactor)
        details["v_weight"] = w
    return compare(lhs, rhs, details)


# -- the resolution region ---------------------------------------------------------
#
# The chain sum over tau converges as a series in q with the v_i small; after
# v_i -> q_i it need not converge where all q_i are small.  Both sides are
# therefore expanded in the grading deg q = 1, deg v_i = W, with W large
# enough that chain degrees grow with |tau| and every monomial m of a factor
# (1 - m)^-1 is classified as it is when the v_i are infinitesimal.

@lru_cache(maxsize=None)
def resolution_table(n, weight):
    names = ["q"] + [f"v{i}" for i in range(1, n)]
    return VariableTable(names, None, (1,) + (weight,) * (n - 1))


def to_resolution(exps):
    """Orbifold exponents -> (q, v_1..v_{n-1}) exponents, q_0 = q/(v_1...v_{n-1}), q_i = v_i."""
    return (exps[0],) + tuple(e - exps[0] for e in exps[1:])


def resolution_weight(lambdas, shape, n):
    lams = [Partition(x) for x in lambdas]
    w = 2
    for i in range(1, n):
        w = max(w, lams[i - 1].part(0) + len(lams[i]) + 2)
    for cell in Partition(shape).cells():
        w = max(w, abs(hook_monomial(shape, n, cell)[0]) + 1)
    return w


def _resolution_alphabets(shape, n, table, top):
    """Gamma_+ arguments for the ket (slope +1) and bra (slope -1), degree <= top, sorted."""
    span = (n - 1) * max(table.weights) + 1
    lo_t, hi_t = -len(shape) - 1, shape.part(0) + 1
    plus, minus = [], []
    t = hi_t
    while True:
        t -= 1
        if slope(shape, t) == 1:
            x = to_resolution(tuple(-e for e in frak(t, n)))
            if table.box_degree(x) <= top:
                plus.append(x)
        if t < lo_t and (-t) // n - span > top:
            break
    t = lo_t
    while True:
        t += 1
        if slope(shape, t) == -1:
            x = to_resolution(frak(t, n))
            if table.box_degree(x) <= top:
                minus.append(x)
        if t > hi_t and t // n - span > top:
            break
    key = table.box_degree
    return sorted(plus, key=key), sorted(minus, key=key)


def resolution_matrix(n):
    """Rows of :func:`to_resolution` applied to each q_i."""
    return tuple(to_resolution(tuple(int(k == i) for k in range(n))) for i in range(n))


def _continued_value(rp, rm, shape, n, table, top):
    """chi/dim * prod q^i * P^n in the resolution grading, exact up to ``top``."""
    return graded_vertex(Partition(rp), Partition(rm), Partition(shape), n, table,
                         resolution_matrix(n), top, normalized=True)


def continued_vertex(rho_plus, rho_minus, lambda_bar, n, weight, dq, relative=True):
    """The normalized orbifold vertex expanded in the resolution grading."""
    rp, rm, shape = Partition(rho_plus), Partition(rho_minus), Partition(lambda_bar)
    table = resolution_table(n, weight)
    if not relative:
        return _continued_value(rp, rm, shape, n, table, dq)
    top = -(rp.size + rm.size) * (n - 1) * weight - 1
    while True:
        v = _continued_value(rp, rm, shape, n, table, top)
        if not v.is_zero():
            lead = v.min_box_degree()
            break
        top += dq + 1
    v = _continued_value(rp, rm, shape, n, table, lead + dq)
    return v.rewindow(Window(lead + dq, 0, min(lead, 0)))


def _chain_in(table, rp, rm, lambdas, n, top):
    lams = [Partition(x) for x in lambdas]
    c0 = degree_floor(rp, (), lams[-1]) + degree_floor((), rm, lams[0])
    q_image = table.exps({"q": 1})
    edges = [table.exps({"q": 1, f"v{i}": 1}) for i in range(1, n)]
    window = Window(top, 0, min(c0, top, 0))
    return resolution_chain(rp, rm, lams, n, table, q_image, edges, window,
                            max(top - c0, 0))


def resolution_region_sides(rho_plus, rho_minus, lambda_bar, n, dq, relative=True,
                            weight=None, corrupt_prefactor=False):
    """(lhs, rhs, weight) of the vertex identity in the resolution grading.

    ``corrupt_prefactor`` raises the prefactor's q_0 exponent by one; it
    exists so that tests can watch the check fail.
    """
    rp, rm = Partition(rho_plus), Partition(rho_minus)
    lam = ColoredPartition(Partition(lambda_bar), n)
    lam.check_balanced()
    lambdas = from_colored(lam)
    w = weight or resolution_weight(lambdas, lam.shape, n)
    table = resolution_table(n, w)
    lhs = continued_vertex(rp, rm, lam.shape, n, w, dq, relative)
    top = lhs.window.dq
    sign, pre = vertex_crc_prefactor(lambdas, n)
    if corrupt_prefactor:
        pre = (pre[0] + 1,) + pre[1:]
    norm = resolution_normalizer(lambdas, n)
    shift = to_resolution(tuple(a + b for a, b in zip(pre, norm)))
    d = table.box_degree(shift)
    num = _chain_in(table, rp, rm, lambdas, n, top - d)
    rhs_window = Window(top, 0, lhs.window.dlow)
    if num.is_zero():
        return lhs, LaurentSeries.zero(table, rhs_window), w
    lead = num.min_box_degree()
    den = _chain_in(table, Partition(()), Partition(()), [()] * n, n, max(top - d - lead, 0))
    wide = Window(max(top - d, 0) + max(-lead, 0), 0, min(num.window.dlow, 0))
    ratio = num.rewindow(wide) * den.rewindow(wide).invert()
    low = min(rhs_window.dlow, ratio.min_box_degree() + d)
    rhs = ratio.shift(shift, Window(top, 0, low))
    return lhs, (-rhs if sign < 0 else rhs), w


# -- commutation factors ------------------------------------------------------------

class CaseError(RuntimeError):
    pass


def _q_power(n, a):
    return [a] * n


def commutation_factor(l, k, cell, lam_l, n):
    """(sign, exponent tuple) of the factor contributed by component l when
    the cell (i, j) is removed from component k."""
    if l == k:
        raise ValueError("commutation factor needs l != k")
    lam_l = Partition(lam_l)
    i, j = cell
    c = j - i
    e = [0] * n
    sign = 1
    if l < k:
        d0, d1 = diagonal_length(lam_l, c), diagonal_length(lam_l, c + 1)
        span = range(l + 1, k + 1)
        if c < 0:
            a = d0 - c
            if d1 == d0 + 1:
                power, neg = a, False            # (A.I.a)
            elif d1 == d0:
                power, neg = a, True             # (A.I.b)
            else:
                raise CaseError(f"no rule for l<k, diagonals {d0}, {d1} at {c}")
        else:
            if d0 == d1:
                power, neg = d0, False           # (A.II.a)
            elif d0 == d1 + 1:
                power, neg = d0, True            # (A.II.b), a + 1 = d0
            else:
                raise CaseError(f"no rule for l<k, diagonals {d0}, {d1} at {c}")
    else:
        dm, d0 = diagonal_length(lam_l, c - 1), diagonal_length(lam_l, c)
        span = range(k + 1, l + 1)
        if c <= 0:
            if dm == d0:
                power, neg = d0, False           # (B.I.a)
            elif d0 == dm + 1:
                power, neg = d0, True            # (B.I.b), a + 1 = d0
            else:
                raise CaseError(f"no rule for l>k, diagonals {dm}, {d0} at {c}")
        else:
            a = d0 + c
            if dm == d0 + 1:
                power, neg = a, False            # (B.II.a)
            elif dm == d0:
                power, neg = a, True             # (B.II.b)
            else:
                raise CaseError(f"no rule for l>k, diagonals {dm}, {d0} at {c}")
    for x in range(n):
        e[x] += power
    if neg:
        sign = -1
        for s in span:
            e[s % n] -= 1
    return sign, tuple(e)


def commuteidentity_sides(lambdas, k, cell, n):
    """Both sides of the single-box identity as (sign, exponent tuple)."""
    lambdas = tuple(Partition(x) for x in lambdas)
    if cell not in removable_cells(lambdas[k]):
        raise PartitionError(f"cell {cell} is not removable from component {k}")
    i, j = cell
    nu = list(lambdas)
    parts = list(nu[k])
    parts[i] -= 1
    nu[k] = Partition(parts)
    sign = -1 if (n - k - 1) % 2 else 1
    e = [(n - k) * (i - j) + j] * n
    for l in range(k + 1, n):
        e[l] += n - l
    for l in range(n):
        if l == k:
            continue
        s, f = commutation_factor(l, k, cell, lambdas[l], n)
        sign *= s
        e = [a + b for a, b in zip(e, f)]
    _, strip, height = add_box_strip(tuple(nu), k, cell)
    r_sign = -1 if height % 2 else 1
    r = [0] * n
    for (a, b) in strip:
        r[(b - a) % n] += a
    return (sign, tuple(e)), (r_sign, tuple(r))


def check_commuteidentity(lambdas, k, cell, n):
    lhs, rhs = commuteidentity_sides(lambdas, k, cell, n)
    status = "pass" if lhs == rhs else "fail"
    mm = None
    if status == "fail":
        mm = {"monomial": {"lhs": list(lhs[1]), "rhs": list(rhs[1])},
              "lhs_coeff": lhs[0], "rhs_coeff": rhs[0]}
    return Report(status, mm, None, {"k": k, "cell": list(cell), "n": n})


def commuteidentity_sweep(max_total, max_n):
    """Every single-cell removal with sum |lambda_k| <= max_total, 1 <= n <= max_n."""
    for n in range(1, max_n + 1):
        for total in range(1, max_total + 1):
            for lambdas in quotient_tuples(n, total):
                for k in range(n):
                    for cell in removable_cells(lambdas[k]):
                        yield lambdas, k, cell, n


def prefactor_identity_holds(lambdas, n, m, literal=False):
    """The monomial identity relating quotient-side and colored-side framing factors.

    The l <= k factor is q_l^(-(m+1) l), which is what the edge factor
    q_l^(l-(m+1)l) and the second vertex's q_l^(-l) combine to.  With
    ``literal`` the sign is flipped to the positive form, which fails.
    """
    sl = 1 if literal else -1
    lam = to_colored(lambdas)
    left = [0] * n
    for k, lk in enumerate(lambdas):
        for i, j in Partition(lk).cells():
            for l in range(1, k + 1):
                left[l] += sl * (m + 1) * l
            for l in range(k + 1, n):
                left[l] += (m + 1) * (n - l)
            for c in range(n):
                left[c] += n * (m + 1) * (i - j)
    right = content_monomial(lam.shape, n, lambda i, j: (m + 1) * (i - j))
    return tuple(left) == tuple(right)


# -- global CRC ------------------------------------------------------------------------

@dataclass
class ChangeOfVariables:
    """Monomial substitution rules: name -> (sign, {target name: exponent})."""
    rules: dict
    direction: str = "resolution->orbifold"

    def image(self, name, table):
        sign, mapping = self.rules[name]
        return sign, table.exps(mapping)

    def apply(self, series, target, window=None):
        return series.substitute(self.rules, target, window)

    def compose(self, other):
        """``other`` after ``self``: images of self rewritten through other's rules."""
        out = {}
        for name, (sign, mapping) in self.rules.items():
            acc, s = {}, sign
            for var, k in mapping.items():
                if var in other.rules:
                    s2, m2 = other.rules[var]
                    if s2 < 0 and k % 2:
                        s = -s
                    for v2, k2 in m2.items():
                        acc[v2] = acc.get(v2, 0) + k * k2
                else:
                    acc[var] = acc.get(var, 0) + k
            out[name] = (s, {v: k for v, k in acc.items() if k})
        return ChangeOfVariables(out, self.direction)


def resolution_variable(eid):
    return f"u_{eid}"


def global_change_of_variables(rd):
    """u_g, u_h -> q_{e,i}; u_{f_0} -> v_e prod q_{e,l}^((m+2)(n-l)); n = 1 edges u_e -> v_e.

    u_{f_k} for k > 0 follows from the ladder relation
    u_{f_k} = u_{f_0} prod_{l<=k} u_{g_l}^(2l - 2n - mn).
    """
    rules = {"q": (1, {"q": 1})}
    made = set()
    for eid, p in rd.provenance.items():
        e = rd.source.edge(eid)
        n, m = e.n, e.m
        for i, (g, h) in enumerate(zip(p["g"], p["h"]), 1):
            rules[resolution_variable(g)] = (1, {f"q_{eid}_{i}": 1})
            rules[resolution_variable(h)] = (1, {f"q_{eid}_{i}": 1})
            made.update((g, h))
        if not e.compact:
            continue
        f0 = {f"v_{eid}": 1}
        for l in range(1, n):
            if (m + 2) * (n - l):
                f0[f"q_{eid}_{l}"] = (m + 2) * (n - l)
        for k, f in enumerate(p["f"]):
            img = dict(f0)
            for l in range(1, k + 1):
                x = 2 * l - 2 * n - m * n
                img[f"q_{eid}_{l}"] = img.get(f"q_{eid}_{l}", 0) + x
            rules[resolution_variable(f)] = (1, {a: b for a, b in img.items() if b})
            made.add(f)
    for e in rd.diagram.compact_edges():
        if e.id not in made:
            rules[resolution_variable(e.id)] = (1, {f"v_{e.id}": 1})
    return ChangeOfVariables(rules)


def resolution_grading(rd, cov, table):
    """The resolution diagram expanded in the orbifold side's table via ``cov``."""
    from .geometry import Grading
    qrow = (table.exps({"q": 1}),)
    vmaps = tuple((v.id, (1, qrow)) for v in rd.diagram.vertices)
    emaps, images = [], []
    for e in rd.diagram.compact_edges():
        sign, img = cov.image(resolution_variable(e.id), table)
        if sign != 1:
            raise ValueError("edge images must carry sign +1")
        emaps.append((e.id, qrow))
        images.append((e.id, img))
    return Grading(table, table.index["q"], vmaps, tuple(emaps), tuple(images))


def global_weight(d, dv):
    """Weight of q_{e,i} making the rung sums and the hook factors region-consistent."""
    from .partitions import balanced_partitions
    w = max(2, dv + 2)
    for e in d.orbifold_edges():
        for k in range(1, dv + 1):
            for cp in balanced_partitions(e.n, k):
                for shape in (cp.shape, conjugate(cp.shape)):
                    for cell in shape.cells():
                        w = max(w, abs(hook_monomial(shape, e.n, cell)[0]) + 1)
    return w


def _terms_series(table, terms, top, dv):
    low = min([table.box_degree(e) for e in terms] + [0])
    return LaurentSeries(table, Window(top, dv, low), terms)


def _provenance(d, grading, novikov, top, mono, keep=None):
    from .geometry import assignment_term, full_assignments
    out = []
    for a in full_assignments(d, grading, novikov, None, top, keep):
        c = assignment_term(d, grading, a, None, top).get(mono, 0)
        if c:
            out.append({"assignment": {k: list(v) for k, v in sorted(a.items())}, "coeff": c})
    return out


def _novikov_vector(table, grading, assignment, d):
    images = dict(grading.edge_images)
    out = [0] * len(table)
    for eid, lam in assignment.items():
        n = d.edge(eid).n
        k = Partition(lam).size // n
        out = [x + k * y for x, y in zip(out, images[eid])]
    return tuple(x if kind == "novikov" else 0 for x, kind in zip(out, table.kinds))


def check_global_crc(d, dq, dv, weight=None, corrupt=None):
    """DT(Z) against DT(W)/DT_exc(W) after the change of variables.

    Both sides are expanded with q of weight 1 and q_{e,i} of weight W, so
    that every rung sum converges and every hook factor is expanded in the
    same region.  Each Novikov monomial is compared on its own window
    [lead, lead + dq].  ``corrupt`` (testing only) flips the sign of the
    orbifold side in Novikov degree 1.
    """
    from .geometry import (
        _floor, _novikov_assignments, gluing_terms, orbifold_grading, orbifold_table,
        require_valid, resolve,
    )
    require_valid(d)
    w = weight or global_weight(d, dv)
    table = orbifold_table(d, "resolution", w)
    zg = orbifold_grading(d, "resolution", w, table)
    rd = resolve(d)
    cov = global_change_of_variables(rd)
    wg = resolution_grading(rd, cov, table)
    tops, pieces = {}, []
    for k in range(dv + 1):
        groups = {}
        for a in _novikov_assignments(d, zg, k):
            groups.setdefault(_novikov_vector(table, zg, a, d), []).append(a)
        for vec in sorted(groups):
            floor = min(_floor(d, zg, a, None) for a in groups[vec])

            def keep_z(a, vec=vec):
                return _novikov_vector(table, zg, a, d) == vec

            def keep_w(a, vec=vec):
                return _novikov_vector(table, wg, a, rd.diagram) == vec
            top, lhs = floor, {}
            while top <= floor + 64 * (w + 1):
                lhs = gluing_terms(d, zg, k, top, keep=keep_z)
                if lhs:
                    break
                top += w + 1
            lead = min(table.box_degree(e) for e in lhs) if lhs else floor
            tops[vec] = lead + dq
            pieces.append((k, vec, keep_z, keep_w))
    lhs_terms, wk, low = {}, {}, 0
    for k, vec, keep_z, keep_w in pieces:
        lhs = gluing_terms(d, zg, k, tops[vec], keep=keep_z)
        if corrupt and k == 1:
            lhs = {e: -c for e, c in lhs.items()}
        lhs_terms.update(lhs)
        wk[vec] = gluing_terms(rd.diagram, wg, k, tops[vec], keep=keep_w)
        low = min([low] + [table.box_degree(e) for e in wk[vec]])
    top_all = max(tops.values())
    span = top_all - low
    inv = LaurentSeries(table, Window(span, 0, 0), gluing_terms(rd.diagram, wg, 0, span)).invert()
    rhs_terms = {}
    for vec, num in wk.items():
        for e1, c1 in num.items():
            d1 = table.box_degree(e1)
            for e2, c2 in inv.terms.items():
                if d1 + table.box_degree(e2) > tops[vec]:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                rhs_terms[e] = rhs_terms.get(e, 0) + c1 * c2
    rhs_terms = {e: c for e, c in rhs_terms.items() if c}
    nov_names = [nm for nm, kind in zip(table.names, table.kinds) if kind == "novikov"]
    windows = {" ".join(f"{nm}^{x}" for nm, x in zip(table.names, vec) if x) or "1":
               [tops[vec] - dq, tops[vec]] for vec in sorted(tops)}
    details = {"v_weight": w, "windows": windows, "novikov": nov_names,
               "compared_terms": len(set(lhs_terms) | set(rhs_terms)),
               "resolution_edges": len(rd.diagram.edges)}
    mism = None

    def novvec(e):
        return tuple(x if kind == "novikov" else 0 for x, kind in zip(e, table.kinds))
    keys = sorted(set(lhs_terms) | set(rhs_terms),
                  key=lambda e: (table.novikov_degree(e), novvec(e), table.box_degree(e), e))
    for e in keys:
        if table.box_degree(e) > tops.get(novvec(e), top_all):
            continue
        if lhs_terms.get(e, 0) != rhs_terms.get(e, 0):
            mism = e
            break
    lows = [table.box_degree(e) for e in list(lhs_terms) + list(rhs_terms)]
    window = (top_all, dv, min(lows + [0]))
    if mism is None:
        return Report("pass", None, window, details)
    k = table.novikov_degree(mism)
    details["orbifold_assignments"] = _provenance(d, zg, k, tops[novvec(mism)], mism)
    details["resolution_assignments"] = _provenance(rd.diagram, wg, k, tops[novvec(mism)], mism)
    return Report("fail", {"monomial": table.sparse(mism), "lhs_coeff": lhs_terms.get(mism, 0),
                           "rhs_coeff": rhs_terms.get(mism, 0)}, window, details)
