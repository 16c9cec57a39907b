"""The A_{n-1} orbifold vertex: operator route, skew/loop Schur route, normalized
variants and the resolution-side open vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .operators import PartitionState, apply_gamma_plus
from .partitions import (
    ColoredPartition, EMPTY, Partition, PartitionError, chi_over_dim, conjugate,
    partitions_of, partitions_up_to, slope, to_colored,
)
from .series import (
    BOX, NOVIKOV, LaurentSeries, SeriesError, VariableTable, Window, product_of_inverses,
)


class StabilizationError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def q_table(n):
    return VariableTable([f"q{k}" for k in range(n)])


def frak(t, n):
    """Exponent tuple of frak-q_t: q_1 q_2 ... q_t for t > 0, inverses for t < 0."""
    e = [0] * n
    if t > 0:
        for s in range(1, t + 1):
            e[s % n] += 1
    elif t < 0:
        for s in range(t + 1, 1):
            e[s % n] -= 1
    return tuple(e)


def overline_rules(n, prefix="q"):
    """q_i -> q_{-i}."""
    return {f"{prefix}{i}": {f"{prefix}{(-i) % n}": 1} for i in range(n)}


def overline(series, n):
    return series.substitute(overline_rules(n))


def content_monomial(lam, n, power=lambda i, j: i):
    """prod over cells (i, j) of q_{(j-i) mod n}^power(i, j), as an exponent tuple."""
    e = [0] * n
    for i, row in enumerate(lam):
        for j in range(row):
            e[(j - i) % n] += power(i, j)
    return tuple(e)


@dataclass(frozen=True)
class VertexSeries:
    value: LaurentSeries
    provenance: str
    inputs: tuple = field(default=())

    def to_text(self):
        return self.value.to_text()


def _as_colored(lam, n):
    if isinstance(lam, ColoredPartition):
        if lam.modulus != n:
            raise PartitionError(f"colored partition has modulus {lam.modulus}, expected {n}")
        return lam
    return ColoredPartition(Partition(lam), n)


def degree_floor(rho_plus, rho_minus, lam):
    """A lower bound (<= 0) for the box degree of any term of the reduced vertex."""
    lam = Partition(lam)
    return -(Partition(rho_plus).size * (lam.part(0) + 1)
             + Partition(rho_minus).size * (len(lam) + 1))


def result_window(dq, rho_plus, rho_minus, lam):
    return Window(dq, 0, min(-dq, degree_floor(rho_plus, rho_minus, lam)))


# -- operator route -----------------------------------------------------------

def _pair_monomials(shape, n, lo, hi, top):
    """frak_{t2}/frak_{t1} for t1 < t2 in [lo, hi) with slope +1 at t1, -1 at t2."""
    plus = [t for t in range(lo, hi) if slope(shape, t) == 1]
    minus = [t for t in range(lo, hi) if slope(shape, t) == -1]
    out = []
    for t1 in plus:
        for t2 in minus:
            if t1 < t2 <= t1 + top:
                out.append(tuple(b - a for a, b in zip(frak(t1, n), frak(t2, n))))
    return out


def _one_minus_product(monos, table, window):
    out = LaurentSeries.one(table, window)
    for x in monos:
        out = out - out * LaurentSeries.from_exps(x, table, window)
    return out


def _operator_value(rho_plus, rho_minus, shape, n, top, T=None):
    """P in the absolute window [floor, top]; ``T`` overrides the t-range."""
    table = q_table(n)
    floor = degree_floor(rho_plus, rho_minus, shape)
    np_ = rho_plus.size
    # A and B: the Gamma_+ halves acting on |rho+> and, by adjointness, on |rho-'>
    wab = Window(top + np_ - floor, 0, floor - 1)
    if T is None:
        T = wab.dq + max(len(shape), shape.part(0)) + 2
    lo, hi = -T, T
    plus_args = [tuple(-x for x in frak(t, n)) for t in range(lo, hi) if slope(shape, t) == 1]
    minus_args = [frak(t, n) for t in range(lo, hi) if slope(shape, t) == -1]
    ket = _gamma_plus_chain(rho_plus, plus_args, table, wab)
    bra = _gamma_plus_chain(conjugate(rho_minus), minus_args, table, wab)
    middle = LaurentSeries.zero(table, wab)
    for mu, c in ket.terms.items():
        d = bra.terms.get(mu)
        if d is not None:
            middle = middle + c * d
    final = Window(top, 0, min(floor, top))
    if middle.is_zero():
        return LaurentSeries.zero(table, final)
    lead = middle.min_box_degree()
    # Normal-order the windowed product: every Gamma_+ at t1 left of a
    # Gamma_- at t2 > t1 is commuted through, leaving (1 - frak_t2/frak_t1)^-1.
    wr = Window(max(top + np_ - min(lead, 0), 0), 0, floor - 1)
    pairs = _pair_monomials(shape, n, lo, hi, wr.dq)
    empty_pairs = _pair_monomials(EMPTY, n, lo, hi, wr.dq)
    ratio = _one_minus_product(empty_pairs, table, wr) * \
        _one_minus_product(pairs, table, wr).invert()
    pref = LaurentSeries.monomial({"q0": -np_}, table, wr)
    value = pref * middle.rewindow(wr) * ratio
    return value.rewindow(final)


def _gamma_plus_chain(start, args, table, window):
    state = PartitionState.basis(start, table, window)
    if not start:
        return state
    for x in args:
        if table.box_degree(x) <= window.dq:
            state = apply_gamma_plus(LaurentSeries.from_exps(x, table, window), state)
    return state


def _leading_degree(compute, floor, dq):
    """Smallest box degree of a nonzero series, found by widening the window."""
    top = floor
    while True:
        value = compute(top)
        if not value.is_zero():
            return value.min_box_degree()
        top += dq + 1


@lru_cache(maxsize=None)
def _operator_cached(rho_plus, rho_minus, shape, n, dq, relative):
    if relative:
        floor = degree_floor(rho_plus, rho_minus, shape)
        lead = _leading_degree(
            lambda top: _operator_value(rho_plus, rho_minus, shape, n, top), floor, dq)
        value = _operator_value(rho_plus, rho_minus, shape, n, lead + dq)
        return value.rewindow(Window(lead + dq, 0, min(lead, 0)))
    value = _operator_value(rho_plus, rho_minus, shape, n, dq)
    return value.rewindow(result_window(dq, rho_plus, rho_minus, shape))


def check_operator_window(rho_plus, rho_minus, lambda_bar, n, top):
    """True when doubling the t-range leaves the windowed value unchanged."""
    rp, rm, shape = Partition(rho_plus), Partition(rho_minus), Partition(lambda_bar)
    base = _operator_value(rp, rm, shape, n, top)
    floor = degree_floor(rp, rm, shape)
    T = top + rp.size - floor + max(len(shape), shape.part(0)) + 2
    return _operator_value(rp, rm, shape, n, top, 2 * T) == base


def orbifold_vertex_operator(rho_plus, rho_minus, lambda_bar, n, dq, relative=False):
    """Reduced vertex P^n from the vertex-operator expectation.

    With ``relative`` the window is [lead, lead + dq] where lead is the
    lowest box degree present; otherwise it is absolute, [floor, dq].
    """
    lam = _as_colored(lambda_bar, n)
    lam.check_balanced()
    rp, rm = Partition(rho_plus), Partition(rho_minus)
    value = _operator_cached(rp, rm, lam.shape, n, dq, relative)
    return VertexSeries(value, "operator", (rp, rm, lam.shape, n, dq))


# -- Schur route -----------------------------------------------------------------

def shifted_alphabet(shape, n, length):
    """Exponent tuples of frak_{k - shape_k} for k = 0 .. length-1 (box degree increasing)."""
    shape = Partition(shape)
    return [frak(k - shape.part(k), n) for k in range(length)]


def _skew_cells(rho, omega):
    return [(i, j) for i in range(len(rho)) for j in range(omega.part(i), rho[i])]


def skew_schur(rho, omega, variables, table, window):
    """s_{rho/omega} on the given alphabet, summed over semistandard tableaux.

    ``variables`` is a list of exponent tuples whose box degrees must be
    weakly increasing; entries whose contribution would exceed the window
    are pruned.  Returns 0 unless omega is contained in rho.
    """
    rho, omega = Partition(rho), Partition(omega)
    if not rho.contains(omega):
        return LaurentSeries.zero(table, window)
    cells = _skew_cells(rho, omega)
    if not cells:
        return LaurentSeries.one(table, window)
    degs = [table.box_degree(v) for v in variables]
    if any(a > b for a, b in zip(degs, degs[1:])):
        raise SeriesError("alphabet degrees must be weakly increasing")
    m = len(variables)
    low = degs[0] if degs else 0
    terms = {}
    filling = {}
    width = len(table)

    def rec(idx, exps, deg):
        if idx == len(cells):
            terms[exps] = terms.get(exps, 0) + 1
            return
        i, j = cells[idx]
        start = 0
        if (i, j - 1) in filling:
            start = filling[(i, j - 1)]          # weakly increasing along rows
        if (i - 1, j) in filling:
            start = max(start, filling[(i - 1, j)] + 1)  # strictly down columns
        rest = len(cells) - idx - 1
        for k in range(start, m):
            d = deg + degs[k]
            if d + rest * low > window.dq:
                break
            filling[(i, j)] = k
            v = variables[k]
            rec(idx + 1, tuple(exps[t] + v[t] for t in range(width)), d)
        filling.pop((i, j), None)

    rec(0, (0,) * width, 0)
    return LaurentSeries(table, window, terms)


def complete_homogeneous(k, variables, table, window):
    """h_k on a finite alphabet."""
    if k < 0:
        return LaurentSeries.zero(table, window)
    # h_k(x_1..x_m) = h_k(x_1..x_{m-1}) + x_m h_{k-1}(x_1..x_m)
    h = [LaurentSeries.one(table, window)] + [LaurentSeries.zero(table, window)] * k
    for v in variables:
        for r in range(1, k + 1):
            h[r] = h[r] + h[r - 1].shift(v, window)
    return h[k]


def skew_schur_jacobi_trudi(rho, omega, variables, table, window):
    """s_{rho/omega} = det(h_{rho_i - omega_j - i + j}), as a cross-check."""
    rho, omega = Partition(rho), Partition(omega)
    window = Window(*window).normalized()
    if not rho.contains(omega):
        return LaurentSeries.zero(table, window)
    size = len(rho)
    if size == 0:
        return LaurentSeries.one(table, window)
    top = rho.part(0) + size
    # entries can dip below the final floor and cancel, so work in a wider window
    low = min([0] + [table.box_degree(v) for v in variables]) * top * size
    inner = Window(window.dq - low, 0, min(window.dlow, low) - 1)
    h = [complete_homogeneous(k, variables, table, inner) for k in range(top + 1)]
    zero = LaurentSeries.zero(table, inner)
    mat = [[h[d] if 0 <= (d := rho.part(i) - omega.part(j) - i + j) <= top else zero
            for j in range(size)] for i in range(size)]
    return _det(mat, table, inner).rewindow(window)


def _det(mat, table, window):
    if len(mat) == 1:
        return mat[0][0]
    out = LaurentSeries.zero(table, window)
    for j, entry in enumerate(mat[0]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = entry * _det(minor, table, window)
        out = out + term if j % 2 == 0 else out - term
    return out


def hook_monomial(shape, n, cell):
    """frak_{t+}/frak_{t-} with t+ = lambda_i - i - 1 and t- = j - lambda'_j."""
    shape = Partition(shape)
    i, j = cell
    t_plus = shape[i] - i - 1
    t_minus = j - conjugate(shape)[j]
    return tuple(b - a for a, b in zip(frak(t_minus, n), frak(t_plus, n)))


def hook_product(shape, n, window):
    """prod over cells of (1 - hook monomial)^-1."""
    table = q_table(n)
    out = LaurentSeries.one(table, window)
    for cell in Partition(shape).cells():
        x = hook_monomial(shape, n, cell)
        # multiply by the geometric series one monomial at a time
        acc = out
        while True:
            acc = acc.shift(x, window)
            if acc.is_zero():
                break
            out = out + acc
    return out


def loop_schur(lambda_bar, n, dq):
    """Specialized loop Schur function of a balanced colored partition.

    Equal to prod q_{j-i}^{-i} times the colored hook product
    prod (1 - frak_{t+}/frak_{t-})^-1; in the window [floor, dq].
    """
    lam = _as_colored(lambda_bar, n)
    mono = tuple(-x for x in content_monomial(lam.shape, n))
    d = q_table(n).box_degree(mono)
    window = Window(dq, 0, min(-dq, d))
    h = hook_product(lam.shape, n, Window(max(dq - d, 0), 0, 0))
    return h.shift(mono, window)


def _schur_sum(rho_plus, rho_minus, shape, n, top):
    """Sum over omega of q0^-|omega| conj(s_{rho+/omega}) s_{rho-'/omega}, window [floor, top]."""
    table = q_table(n)
    floor = degree_floor(rho_plus, rho_minus, shape)
    rmc = conjugate(rho_minus)
    wide = Window(top - floor, 0, floor - 1)
    cells = max(rho_plus.size, rmc.size, 1)
    length = wide.dq + cells * (shape.part(0) + len(shape)) + len(shape) + 2
    alpha_plus = shifted_alphabet(shape, n, length)
    alpha_minus = shifted_alphabet(conjugate(shape), n, length)
    out = LaurentSeries.zero(table, Window(top, 0, min(floor, top)))
    for size in range(min(rho_plus.size, rmc.size) + 1):
        for omega in partitions_of(size):
            if not (rho_plus.contains(omega) and rmc.contains(omega)):
                continue
            sp = overline(skew_schur(rho_plus, omega, alpha_plus, table, wide), n)
            sm = skew_schur(rmc, omega, alpha_minus, table, wide)
            term = (sp * sm).shift(_q0_power(-size, n), wide)
            out = out + term.rewindow(out.window)
    return out


def _q0_power(k, n):
    return (k,) + (0,) * (n - 1)


def _schur_value(rho_plus, rho_minus, shape, n, top):
    s = _schur_sum(rho_plus, rho_minus, shape, n, top)
    if s.is_zero():
        return s
    lead = s.min_box_degree()
    w = Window(max(top - lead, 0), 0, 0)
    h = hook_product(shape, n, w)
    wide = Window(max(top, 0) + max(-lead, 0), 0, s.window.dlow)
    return (s.rewindow(wide) * h.rewindow(wide)).rewindow(s.window)


@lru_cache(maxsize=None)
def _schur_cached(rho_plus, rho_minus, shape, n, dq, relative):
    # the prefactor prod q^i cancels the prod q^-i inside the loop Schur function
    if relative:
        floor = degree_floor(rho_plus, rho_minus, shape)
        lead = _leading_degree(
            lambda top: _schur_sum(rho_plus, rho_minus, shape, n, top), floor, dq)
        value = _schur_value(rho_plus, rho_minus, shape, n, lead + dq)
        return value.rewindow(Window(lead + dq, 0, min(lead, 0)))
    value = _schur_value(rho_plus, rho_minus, shape, n, dq)
    return value.rewindow(result_window(dq, rho_plus, rho_minus, shape))


def orbifold_vertex_schur(rho_plus, rho_minus, lambda_bar, n, dq, relative=False):
    """Reduced vertex from the loop/skew Schur closed form."""
    lam = _as_colored(lambda_bar, n)
    lam.check_balanced()
    rp, rm = Partition(rho_plus), Partition(rho_minus)
    value = _schur_cached(rp, rm, lam.shape, n, dq, relative)
    return VertexSeries(value, "schur", (rp, rm, lam.shape, n, dq))


# -- normalized and resolution-side vertices --------------------------------------

def normalized_vertex(rho_plus, rho_minus, lambda_bar, n, dq, relative=False, route="operator"):
    """P-tilde = chi/dim * prod q_{j-i}^i * P."""
    lam = _as_colored(lambda_bar, n)
    lam.check_balanced()
    fn = {"operator": orbifold_vertex_operator, "schur": orbifold_vertex_schur}[route]
    mono = content_monomial(lam.shape, n)
    d = q_table(n).box_degree(mono)
    base = fn(rho_plus, rho_minus, lam, n, dq if relative else dq - d, relative)
    value = base.value.shift(mono)
    if not relative:
        w = value.window
        value = value.rewindow(Window(dq, 0, min(w.dlow, -dq)))
    if chi_over_dim(lam) < 0:
        value = -value
    return VertexSeries(value, base.provenance, base.inputs)


@lru_cache(maxsize=None)
def y_table(n):
    names = ["q"] + [f"v{i}" for i in range(1, n)]
    return VariableTable(names, (BOX,) + (NOVIKOV,) * (n - 1))


@lru_cache(maxsize=None)
def _p1_lead(a, b, c):
    """Lowest q-degree of P^1_{a,b,c}.

    The lowest term comes from the bare legs alone (coefficient 1), so it
    is their renormalized box count plus the per-leg normalization.
    """
    from .enumeration import Legs, leg_constant, leg_normalization
    return leg_constant(Legs(a, b, conjugate(c)), 1)[0] + leg_normalization(a, b, 1)[0]


@lru_cache(maxsize=None)
def _p1(a, b, c, slack):
    """P^1_{a,b,c} in the window [lead, lead + slack] (q units)."""
    lead = _p1_lead(a, b, c)
    value = _operator_value(a, b, c, 1, lead + slack)
    return value.rewindow(Window(lead + slack, 0, min(lead, 0)))


def _tau_chains(count, budget):
    """Tuples of ``count`` partitions with total size <= budget."""
    if count == 0:
        yield ()
        return
    for size in range(budget + 1):
        for tau in partitions_of(size):
            for rest in _tau_chains(count - 1, budget - size):
                yield (tau,) + rest


def resolution_chain(rho_plus, rho_minus, lambdas, n, target, q_image, edge_images,
                     window, max_tau):
    """Sum over tau_1..tau_{n-1} of the chained n=1 vertices, mapped into ``target``.

    ``q_image`` is the exponent tuple replacing q; ``edge_images[i-1]`` replaces
    q v_i.  Terms up to the window's BOX top are exact provided every chain
    with total tau size <= max_tau has been included.
    """
    rp, rm = Partition(rho_plus), Partition(rho_minus)
    lams = [Partition(x) for x in lambdas]
    if len(lams) != n:
        raise PartitionError(f"expected {n} quotient components")
    w_q = target.box_degree(q_image)
    out = LaurentSeries.zero(target, window)
    for taus in _tau_chains(n - 1, max_tau):
        legs = []
        prev = rm
        for k in range(n):
            nxt = taus[k] if k < n - 1 else rp
            legs.append((nxt, prev, lams[k]))
            if k < n - 1:
                prev = conjugate(taus[k])
        nov = [0] * len(target)
        for i, tau in enumerate(taus):
            for j, x in enumerate(edge_images[i]):
                nov[j] += x * tau.size
        nov = tuple(nov)
        if target.novikov_degree(nov) > window.dv:
            continue
        bound = sum(degree_floor(*lg) for lg in legs) * w_q + target.box_degree(nov)
        if bound > window.dq:
            continue
        leads = [_p1_lead(*lg) for lg in legs]
        base_deg = sum(leads) * w_q + target.box_degree(nov)
        room = window.dq - base_deg
        if room < 0:
            continue
        slack = room // w_q
        lead_exps = tuple(sum(leads) * x + y for x, y in zip(q_image, nov))
        term = None
        local = Window(slack, 0, 0)
        tq = VariableTable(["q"])
        for lg, ld in zip(legs, leads):
            f = _p1(*lg, slack).shift((-ld,), local)  # now starts at degree 0
            f = LaurentSeries(tq, local, f.terms)
            term = f if term is None else term * f
        mapped = term.substitute({"q": dict(zip(target.names, q_image))}, target,
                                 Window(max(window.dq - base_deg, 0), window.dv, 0))
        out = out + mapped.shift(lead_exps, window)
    return out


def resolution_vertex(rho_plus, rho_minus, lambdas, n, dq, dv, max_tau=None):
    """P^Y in the variables q (box) and v_1..v_{n-1} (Novikov).

    Chains are cut at total tau size ``max_tau`` (default ``dv``: every
    chain beyond it carries Novikov degree > dv).
    """
    t = y_table(n)
    q_image = t.exps({"q": 1})
    edges = [t.exps({"q": 1, f"v{i}": 1}) for i in range(1, n)]
    floor = _resolution_floor(rho_plus, rho_minus, lambdas, dv)
    window = Window(dq, dv, min(-dq, floor))
    return resolution_chain(rho_plus, rho_minus, lambdas, n, t, q_image, edges, window,
                            dv if max_tau is None else max_tau)


def _resolution_floor(rho_plus, rho_minus, lambdas, max_tau):
    size = max_tau + Partition(rho_plus).size + Partition(rho_minus).size
    width = max([len(Partition(x)) + Partition(x).part(0) for x in lambdas] + [0])
    return -(size * (width + 2 + size))


def resolution_in_orbifold_variables(rho_plus, rho_minus, lambdas, n, top, max_tau, floor=None):
    """P^Y after q -> q_0...q_{n-1}, v_i -> q_i, exact up to BOX degree ``top``
    among chains with total tau size <= max_tau."""
    t = q_table(n)
    q_image = (1,) * n
    edges = [tuple(1 + (j == i) for j in range(n)) for i in range(1, n)]
    if floor is None:
        floor = n * _resolution_floor(rho_plus, rho_minus, lambdas, max_tau)
    window = Window(top, 0, min(floor, top, 0))
    return resolution_chain(rho_plus, rho_minus, lambdas, n, t, q_image, edges, window,
                            max_tau)


# -- the vertex in an arbitrary grading ---------------------------------------------
#
# P^n is a finite sum over mu of products of skew Schur functions on alphabets
# that are geometric in q = q_0...q_{n-1}, times prod (1 - h)^-1 over the hook
# monomials h.  Given a linear embedding of q_0..q_{n-1} into another graded
# table, every piece can be expanded there: the alphabets converge as long as
# q has positive degree, and a hook factor whose monomial has negative degree
# is rewritten as -h^-1 (1 - h^-1)^-1.

def embed(matrix, exps):
    """Image of an orbifold exponent tuple under a linear embedding (one row per q_i)."""
    out = [0] * len(matrix[0])
    for e, row in zip(exps, matrix):
        if e:
            for k, x in enumerate(row):
                out[k] += e * x
    return tuple(out)


def _graded_alphabets(shape, n, table, matrix, top):
    period = table.box_degree(embed(matrix, (1,) * n))
    if period <= 0:
        raise SeriesError("q must have positive degree in the target grading")
    span = sum(abs(table.box_degree(row)) for row in matrix)
    lo_t, hi_t = -len(shape) - 1, shape.part(0) + 1
    plus, minus = [], []
    t = hi_t
    while True:
        t -= 1
        if slope(shape, t) == 1:
            x = embed(matrix, tuple(-e for e in frak(t, n)))
            if table.box_degree(x) <= top:
                plus.append(x)
        if t < lo_t and ((-t) // n) * period - span > top:
            break
    t = lo_t
    while True:
        t += 1
        if slope(shape, t) == -1:
            x = embed(matrix, frak(t, n))
            if table.box_degree(x) <= top:
                minus.append(x)
        if t > hi_t and (t // n) * period - span > top:
            break
    key = table.box_degree
    return sorted(plus, key=key), sorted(minus, key=key)


def _graded_pieces(rp, shape, n, table, matrix, normalized):
    """(sign, monomial, small hook monomials) of the non-Schur part."""
    orb = [0] * n
    orb[0] -= rp.size
    sign = 1
    if normalized:
        orb = [a + b for a, b in zip(orb, content_monomial(shape, n))]
        sign = chi_over_dim(ColoredPartition(shape, n))
    mono = list(embed(matrix, orb))
    small = []
    for cell in shape.cells():
        x = embed(matrix, hook_monomial(shape, n, cell))
        d = table.box_degree(x)
        if d > 0:
            small.append(x)
        elif d < 0:
            sign = -sign
            inv = tuple(-e for e in x)
            mono = [a + b for a, b in zip(mono, inv)]
            small.append(inv)
        else:
            raise SeriesError("a hook monomial has degree 0 in the target grading")
    return sign, tuple(mono), small


@lru_cache(maxsize=None)
def graded_vertex(rho_plus, rho_minus, shape, n, table, matrix, top, normalized=False):
    """P^n (or P-tilde with ``normalized``) embedded by ``matrix``, exact up to ``top``."""
    rp, rmc = Partition(rho_plus), conjugate(Partition(rho_minus))
    shape = Partition(shape)
    sign, mono, small = _graded_pieces(rp, shape, n, table, matrix, normalized)
    base = table.box_degree(mono)
    plus, minus = _graded_alphabets(shape, n, table, matrix, 0)
    low_a = rp.size * min([0] + [table.box_degree(x) for x in plus[:1]])
    low_b = rmc.size * min([0] + [table.box_degree(x) for x in minus[:1]])
    low = low_a + low_b
    T = top - base
    final = Window(top, 0, min(base + low, top, 0))
    if T < low:
        return LaurentSeries.zero(table, final)
    wm = Window(T - low, 0, low)
    plus, minus = _graded_alphabets(shape, n, table, matrix, wm.dq)
    middle = LaurentSeries.zero(table, wm)
    for size in range(min(rp.size, rmc.size) + 1):
        for mu in partitions_of(size):
            if rp.contains(mu) and rmc.contains(mu):
                middle = middle + skew_schur(rp, mu, plus, table, wm) * \
                    skew_schur(rmc, mu, minus, table, wm)
    g = product_of_inverses(small, table, wm)
    value = (middle * g).rewindow(Window(T, 0, min(low, T, 0)))
    value = value.shift(mono, final)
    return -value if sign < 0 else value


def graded_vertex_floor(rho_plus, rho_minus, shape, n, table, matrix, normalized=False):
    """A lower bound for the box degree of :func:`graded_vertex`."""
    rp, rmc = Partition(rho_plus), conjugate(Partition(rho_minus))
    shape = Partition(shape)
    _, mono, _ = _graded_pieces(rp, shape, n, table, matrix, normalized)
    plus, minus = _graded_alphabets(shape, n, table, matrix, 0)
    low = rp.size * min([0] + [table.box_degree(x) for x in plus[:1]]) + \
        rmc.size * min([0] + [table.box_degree(x) for x in minus[:1]])
    return table.box_degree(mono) + low


@lru_cache(maxsize=None)
def graded_vertex_lead(rho_plus, rho_minus, shape, n, table, matrix, normalized=False):
    """Lowest box degree of :func:`graded_vertex`, found by widening the window."""
    top = graded_vertex_floor(rho_plus, rho_minus, shape, n, table, matrix, normalized)
    step = 1
    while True:
        v = graded_vertex(rho_plus, rho_minus, shape, n, table, matrix, top, normalized)
        if not v.is_zero():
            return v.min_box_degree()
        top += step
        step *= 2
