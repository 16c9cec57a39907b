"""Vertex operators Gamma_{+1}, Gamma_{-1} and Q_k acting on partition states.

A :class:`PartitionState` is a finite formal combination of partitions with
:class:`~dtcrc.series.LaurentSeries` coefficients.  ``Gamma_-`` produces an
infinite sum, so states carry a size cap: partitions larger than the cap are
dropped.  Callers choose the cap so that every dropped partition could only
contribute beyond the truncation window.
"""

from __future__ import annotations

from itertools import product

from .partitions import Partition, EMPTY, partitions_up_to
from .series import LaurentSeries, SeriesError

PLUS = 1
MINUS = -1


class PartitionState:
    __slots__ = ("table", "window", "terms", "cap")

    def __init__(self, table, window, terms=None, cap=None):
        self.table = table
        self.window = window
        self.terms = {}
        self.cap = cap
        for p, c in (terms or {}).items():
            p = Partition(p)
            if cap is not None and p.size > cap:
                continue
            if not isinstance(c, LaurentSeries):
                c = LaurentSeries.constant(c, table, window)
            if not c.is_zero():
                self.terms[p] = c

    @classmethod
    def basis(cls, p, table, window, cap=None):
        return cls(table, window, {Partition(p): 1}, cap)

    def coefficient(self, p):
        c = self.terms.get(Partition(p))
        if c is None:
            return LaurentSeries.zero(self.table, self.window)
        return c

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out[p] + c if p in out else c
        cap = _min_cap(self.cap, other.cap)
        return PartitionState(self.table, self.window, out, cap)

    def scale(self, s):
        return PartitionState(self.table, self.window,
                              {p: c * s for p, c in self.terms.items()}, self.cap)

    def __eq__(self, other):
        if not isinstance(other, PartitionState):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(p) == other.coefficient(p) for p in keys)

    def __repr__(self):
        return f"PartitionState({len(self.terms)} partitions, cap={self.cap})"


def _min_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _powers(x, kmax):
    out = [LaurentSeries.one(x.table, x.window)]
    for _ in range(kmax):
        out.append(out[-1] * x)
    return out


def sub_interlacing(tau):
    """All sigma with sigma < tau, i.e. tau_i >= sigma_i >= tau_{i+1}."""
    ranges = [range(tau.part(i + 1), tau[i] + 1) for i in range(len(tau))]
    for choice in product(*ranges):
        yield Partition(choice)


def super_interlacing(tau, cap):
    """All sigma > tau with |sigma| <= cap."""
    budget = cap - tau.size
    if budget < 0:
        return
    n = len(tau)
    # sigma_0 in [tau_0, tau_0 + budget]; sigma_i in [tau_i, tau_{i-1}] for 1 <= i <= n
    def rec(i, prev_tau, remaining, acc):
        if i > n:
            yield Partition(acc)
            return
        lo = tau.part(i)
        hi = prev_tau if i > 0 else tau.part(0) + remaining
        for s in range(lo, min(hi, lo + remaining) + 1):
            yield from rec(i + 1, tau.part(i), remaining - (s - lo), acc + [s])
    yield from rec(0, None, budget, [])


def apply_gamma_plus(x, state):
    """Gamma_+(x) tau = sum over sigma < tau of x^(|tau|-|sigma|) sigma."""
    out = {}
    if not state.terms:
        return PartitionState(state.table, state.window, out, state.cap)
    pw = _powers(x, max(p.size for p in state.terms))
    for tau, c in state.terms.items():
        for sigma in sub_interlacing(tau):
            w = pw[tau.size - sigma.size]
            if w.is_zero():
                continue
            term = c * w
            if term.is_zero():
                continue
            out[sigma] = out[sigma] + term if sigma in out else term
    return PartitionState(state.table, state.window, out, state.cap)


def apply_gamma_minus(x, state):
    """Gamma_-(x) tau = sum over sigma > tau of x^(|sigma|-|tau|) sigma (capped)."""
    if state.cap is None:
        raise SeriesError("Gamma_- needs a state with a size cap")
    out = {}
    pw = _powers(x, state.cap)
    for tau, c in state.terms.items():
        for sigma in super_interlacing(tau, state.cap):
            w = pw[sigma.size - tau.size]
            if w.is_zero():
                continue
            term = c * w
            if term.is_zero():
                continue
            out[sigma] = out[sigma] + term if sigma in out else term
    return PartitionState(state.table, state.window, out, state.cap)


def apply_q(var, state):
    """Q_k tau = q_k^|tau| tau for the variable named ``var``."""
    t, w = state.table, state.window
    out = {}
    for tau, c in state.terms.items():
        out[tau] = c * LaurentSeries.monomial({var: tau.size}, t, w)
    return PartitionState(t, w, out, state.cap)


def apply_word(word, state):
    """Apply an operator word; the rightmost factor acts first.

    Factors are ``("+", x)``, ``("-", x)`` with ``x`` a monomial series, or
    ``("Q", name)``.
    """
    for kind, arg in reversed(word):
        if kind in ("+", PLUS):
            state = apply_gamma_plus(arg, state)
        elif kind in ("-", MINUS):
            state = apply_gamma_minus(arg, state)
        elif kind == "Q":
            state = apply_q(arg, state)
        else:
            raise ValueError(f"unknown operator kind {kind!r}")
    return state


def expectation(bra, word, ket, table, window, cap=None):
    """Coefficient of ``bra`` in ``word`` applied to ``ket``."""
    bra, ket = Partition(bra), Partition(ket)
    if cap is None:
        cap = window.dq + max(bra.size, ket.size)
    state = PartitionState.basis(ket, table, window, cap)
    return apply_word(word, state).coefficient(bra)


def states_up_to(size):
    return partitions_up_to(size)


def verify_commutation(a, b, i, j, table, window, max_size=5):
    """Check Gamma_i(a) Gamma_j(b) = (1 - ab)^((j-i)/2) Gamma_j(b) Gamma_i(a).

    Both sides are applied to every partition of size <= ``max_size`` and the
    coefficients of every partition whose value is fully determined inside
    the window are compared.
    """
    ab = a * b
    factor = LaurentSeries.one(table, window) - ab
    exponent = (j - i) // 2
    scalar = factor ** exponent if exponent >= 0 else factor.invert() ** (-exponent)
    kind = {1: "+", -1: "-"}
    for tau in states_up_to(max_size):
        cap = window.dq + 2 * max_size + 2
        s = PartitionState.basis(tau, table, window, cap)
        lhs = apply_word([(kind[i], a), (kind[j], b)], s)
        rhs = apply_word([(kind[j], b), (kind[i], a)], s).scale(scalar)
        for p in set(lhs.terms) | set(rhs.terms):
            if p.size > cap - window.dq:
                continue  # near the cap the truncation is not exact
            if lhs.coefficient(p) != rhs.coefficient(p):
                return False
    return True


def verify_q_commutation(a, j, var, table, window, max_size=5):
    """Check Gamma_j(a) Q_k = Q_k Gamma_j(a q_k^j) on small states."""
    qk = LaurentSeries.monomial({var: j}, table, window)
    kind = {1: "+", -1: "-"}[j]
    for tau in states_up_to(max_size):
        cap = window.dq + 2 * max_size + 2
        s = PartitionState.basis(tau, table, window, cap)
        lhs = apply_word([(kind, a), ("Q", var)], s)
        rhs = apply_word([("Q", var), (kind, a * qk)], s)
        for p in set(lhs.terms) | set(rhs.terms):
            if p.size > cap - window.dq:
                continue
            if lhs.coefficient(p) != rhs.coefficient(p):
                return False
    return True


__all__ = [
    "PartitionState", "apply_gamma_plus", "apply_gamma_minus", "apply_q",
    "apply_word", "expectation", "verify_commutation", "verify_q_commutation",
    "sub_interlacing", "super_interlacing", "EMPTY",
]
