"""Truncated multivariate Laurent series with exact integer coefficients.

A series lives over a :class:`VariableTable` and inside a :class:`Window`.
Every variable carries a grading class: BOX variables count towards the
box degree (with an integer weight, so a derived variable such as
``q = q0*q1`` can be declared with weight 2), NOVIKOV variables count
towards the curve-class degree, FORMAL variables are ungraded.  A stored
term always satisfies ``dlow <= box degree <= dq`` and
``0 <= novikov degree <= dv``; products that leave the window at the top
are dropped, products that fall below ``dlow`` are an error because the
information cannot be recovered.
"""

from __future__ import annotations

import json
from collections import defaultdict
from typing import NamedTuple

BOX = "box"
NOVIKOV = "novikov"
FORMAL = "formal"


class SeriesError(ValueError):
    pass


class VariableTable:
    """Ordered variable names with their grading class and weight."""

    def __init__(self, names, kinds=None, weights=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise SeriesError(f"duplicate variable names in {names}")
        if kinds is None:
            kinds = (BOX,) * len(names)
        if weights is None:
            weights = (1,) * len(names)
        self.names = names
        self.kinds = tuple(kinds)
        self.weights = tuple(weights)
        self.index = {name: i for i, name in enumerate(names)}
        self._box = tuple(w if k == BOX else 0 for k, w in zip(self.kinds, self.weights))
        self._nov = tuple(w if k == NOVIKOV else 0 for k, w in zip(self.kinds, self.weights))

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VariableTable) and (
            self.names, self.kinds, self.weights) == (other.names, other.kinds, other.weights)

    def __hash__(self):
        return hash((self.names, self.kinds, self.weights))

    def __repr__(self):
        return f"VariableTable({list(self.names)})"

    def box_degree(self, exps):
        return sum(w * e for w, e in zip(self._box, exps) if w)

    def novikov_degree(self, exps):
        return sum(w * e for w, e in zip(self._nov, exps) if w)

    def exps(self, mapping):
        """Dense exponent tuple from a {name: exponent} mapping."""
        out = [0] * len(self.names)
        for name, e in mapping.items():
            try:
                out[self.index[name]] += e
            except KeyError:
                raise SeriesError(f"undeclared variable {name!r}") from None
        return tuple(out)

    def sparse(self, exps):
        return {self.names[i]: e for i, e in enumerate(exps) if e}

    def extend(self, names, kind=BOX, weight=1):
        new = [x for x in names if x not in self.index]
        return VariableTable(self.names + tuple(new), self.kinds + (kind,) * len(new),
                             self.weights + (weight,) * len(new))

    def to_json(self):
        return {"names": list(self.names), "kinds": list(self.kinds),
                "weights": list(self.weights)}


class Window(NamedTuple):
    dq: int
    dv: int = 0
    dlow: int | None = None

    def normalized(self):
        dlow = -self.dq if self.dlow is None else self.dlow
        if dlow > 0:
            raise SeriesError("dlow must be <= 0")
        return Window(self.dq, self.dv, dlow)


class LaurentSeries:
    __slots__ = ("table", "window", "terms")

    def __init__(self, table, window, terms=None, *, strict=True):
        """Build a series; ``terms`` maps exponent tuples (or sparse dicts) to ints.

        Terms above the window are dropped.  Terms below ``dlow`` raise unless
        ``strict`` is false, in which case they are dropped too.
        """
        self.table = table
        self.window = Window(*window).normalized()
        self.terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for exps, c in items:
                if isinstance(exps, dict):
                    exps = table.exps(exps)
                self._add_term(exps, c, strict)

    def _add_term(self, exps, c, strict=True):
        if not c:
            return
        w = self.window
        bd = self.table.box_degree(exps)
        nd = self.table.novikov_degree(exps)
        if bd > w.dq or nd > w.dv:
            return
        if nd < 0:
            raise SeriesError(f"negative Novikov degree in {self.table.sparse(exps)}")
        if bd < w.dlow:
            if strict:
                raise SeriesError(
                    f"term {self.table.sparse(exps)} has box degree {bd} below "
                    f"the window floor {w.dlow}")
            return
        v = self.terms.get(exps, 0) + c
        if v:
            self.terms[exps] = v
        else:
            self.terms.pop(exps, None)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, table, window):
        return cls(table, window)

    @classmethod
    def one(cls, table, window):
        return cls.constant(1, table, window)

    @classmethod
    def constant(cls, c, table, window):
        return cls(table, window, {(0,) * len(table): c})

    @classmethod
    def monomial(cls, mapping, table, window, coeff=1):
        return cls(table, window, {table.exps(mapping): coeff})

    @classmethod
    def from_exps(cls, exps, table, window, coeff=1):
        return cls(table, window, {tuple(exps): coeff})

    def _new(self, terms=None):
        out = LaurentSeries.__new__(LaurentSeries)
        out.table = self.table
        out.window = self.window
        out.terms = terms if terms is not None else {}
        return out

    # -- inspection -------------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def coefficient(self, mono):
        """Coefficient of a monomial (dict or exponent tuple)."""
        exps = self.table.exps(mono) if isinstance(mono, dict) else tuple(mono)
        bd = self.table.box_degree(exps)
        nd = self.table.novikov_degree(exps)
        w = self.window
        if not (w.dlow <= bd <= w.dq and 0 <= nd <= w.dv):
            raise SeriesError(f"monomial {self.table.sparse(exps)} lies outside the window {w}")
        return self.terms.get(exps, 0)

    def min_box_degree(self):
        if not self.terms:
            return None
        return min(self.table.box_degree(e) for e in self.terms)

    def is_monomial(self):
        return len(self.terms) == 1

    def leading_term(self):
        """The unique term minimizing (box degree, novikov degree)."""
        if not self.terms:
            raise SeriesError("zero series has no leading term")
        t = self.table
        keyed = sorted(((t.box_degree(e), t.novikov_degree(e)), e) for e in self.terms)
        if len(keyed) > 1 and keyed[0][0] == keyed[1][0]:
            raise SeriesError("no well-defined leading monomial")
        e = keyed[0][1]
        return e, self.terms[e]

    def sorted_terms(self):
        t = self.table
        return sorted(self.terms.items(),
                      key=lambda kv: (t.box_degree(kv[0]), t.novikov_degree(kv[0]), kv[0]))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"cannot combine series with {type(other).__name__}")
        if self.table != other.table:
            raise SeriesError("series over different variable tables")
        if self.window != other.window:
            raise SeriesError(f"incompatible truncation windows {self.window} and {other.window}")

    def _coerce(self, other):
        if isinstance(other, int):
            return LaurentSeries.constant(other, self.table, self.window)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return self._new()
        return self._new({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return _mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            return self.invert() ** (-k)
        result = LaurentSeries.one(self.table, self.window)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentSeries.constant(other, self.table, self.window)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.table == other.table and self.window == other.window
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.table, self.window, frozenset(self.terms.items())))

    def invert(self):
        """Multiplicative inverse within the window.

        The series must be c*m*(1 + h) with c = +-1, m a monomial and every
        term of h of positive box degree, or of box degree zero and positive
        Novikov degree.
        """
        if not self.terms:
            raise SeriesError("cannot invert the zero series")
        t = self.table
        lead, c = self.leading_term()
        if c not in (1, -1):
            raise SeriesError(f"leading coefficient {c} is not a unit")
        d0 = t.box_degree(lead)
        n0 = t.novikov_degree(lead)
        if n0 != 0:
            raise SeriesError("leading monomial carries Novikov degree; not invertible")
        inv_lead = tuple(-x for x in lead)
        if len(self.terms) == 1:
            return LaurentSeries(t, self.window, {inv_lead: c})
        if d0 > 0:
            raise SeriesError(
                "leading monomial of positive degree loses precision on inversion")
        # h = c * m^-1 * self - 1, computed in a window shifted by -d0
        w = self.window
        hwin = Window(w.dq + d0, w.dv, min(w.dlow, w.dlow + d0))
        h = {}
        for e, v in self.terms.items():
            if e == lead:
                continue
            ee = tuple(x - y for x, y in zip(e, lead))
            bd, nd = t.box_degree(ee), t.novikov_degree(ee)
            if bd < 0 or (bd == 0 and nd <= 0):
                raise SeriesError("no well-defined leading monomial")
            h[ee] = c * v
        hs = LaurentSeries(t, hwin, h)
        neg_h = -hs
        acc = LaurentSeries.one(t, hwin)
        power = LaurentSeries.one(t, hwin)
        while True:
            power = power * neg_h
            if power.is_zero():
                break
            acc = acc + power
        return LaurentSeries(t, w, {tuple(x + y for x, y in zip(e, inv_lead)): c * v
                                    for e, v in acc.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, int):
            if other not in (1, -1):
                raise SeriesError("only unit integer division is exact")
            return self.scale(other)
        return self * other.invert()

    # -- windows and substitution ----------------------------------------
    def truncate(self, window):
        """Restrict to a narrower window (widening is refused)."""
        window = Window(*window).normalized()
        w = self.window
        if window.dq > w.dq or window.dv > w.dv:
            raise SeriesError(f"cannot widen window {w} to {window}")
        out = LaurentSeries(self.table, window)
        t = self.table
        for e, c in self.terms.items():
            bd, nd = t.box_degree(e), t.novikov_degree(e)
            if bd <= window.dq and nd <= window.dv:
                if bd < window.dlow:
                    raise SeriesError(f"term {t.sparse(e)} below new floor {window.dlow}")
                out.terms[e] = c
        return out

    def shift(self, exps, window=None):
        """Multiply by the monomial with exponent tuple ``exps``.

        Unlike multiplication by a monomial series this never loses the
        monomial itself to truncation; the result lives in ``window``
        (default: this series' window moved by the monomial's degree).
        """
        exps = tuple(exps)
        if window is None:
            d = self.table.box_degree(exps)
            nd = self.table.novikov_degree(exps)
            w = self.window
            window = Window(w.dq + d, w.dv + nd, min(w.dlow + d, 0))
        out = LaurentSeries(self.table, window)
        for e, c in self.terms.items():
            out._add_term(tuple(a + b for a, b in zip(e, exps)), c)
        return out

    def rewindow(self, window):
        """Move to another window, dropping terms above it; floors must fit."""
        out = LaurentSeries(self.table, window)
        for e, c in self.terms.items():
            out._add_term(e, c)
        return out

    def substitute(self, rules, target=None, window=None):
        """Simultaneous monomial substitution.

        ``rules`` maps a variable name to ``(sign, {target name: exponent})``
        or to a bare mapping (sign +1).  Unmapped variables are sent to the
        variable of the same name in ``target``.
        """
        target = target or self.table
        window = window or self.window
        src = self.table
        images = []
        for i, name in enumerate(src.names):
            rule = rules.get(name)
            if rule is None:
                if name not in target.index:
                    raise SeriesError(f"no image for variable {name!r}")
                images.append((1, target.exps({name: 1})))
            else:
                if isinstance(rule, dict):
                    rule = (1, rule)
                sign, mapping = rule
                if sign not in (1, -1):
                    raise SeriesError("substitution signs must be +-1")
                images.append((sign, target.exps(mapping)))
        out = LaurentSeries(target, window)
        size = len(target)
        for e, c in self.terms.items():
            acc = [0] * size
            sgn = 1
            for (s, img), k in zip(images, e):
                if not k:
                    continue
                if s < 0 and k % 2:
                    sgn = -sgn
                for j, x in enumerate(img):
                    if x:
                        acc[j] += k * x
            out._add_term(tuple(acc), sgn * c)
        return out

    def map_terms(self, fn):
        """Apply ``fn(exps, coeff) -> (exps, coeff)`` termwise, same table/window."""
        out = self._new()
        for e, c in self.terms.items():
            e2, c2 = fn(e, c)
            out._add_term(e2, c2)
        return out

    # -- text forms -------------------------------------------------------
    def to_text(self):
        if not self.terms:
            return "0"
        lines = []
        for e, c in self.sorted_terms():
            mono = " ".join(f"{self.table.names[i]}^{x}" for i, x in enumerate(e) if x)
            lines.append(f"{c} {mono}" if mono else f"{c}")
        return "\n".join(lines)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        body = " + ".join(
            f"{c}*" + "*".join(f"{self.table.names[i]}^{x}" for i, x in enumerate(e) if x)
            if any(e) else str(c)
            for e, c in self.sorted_terms()[:8])
        more = "" if len(self.terms) <= 8 else " + ..."
        return f"LaurentSeries({body or '0'}{more}; window={tuple(self.window)})"

    def to_json(self):
        return {
            "terms": [{"coeff": c, "exps": self.table.sparse(e)} for e, c in self.sorted_terms()],
            "truncation": {"dq": self.window.dq, "dv": self.window.dv, "dlow": self.window.dlow},
            "variables": self.table.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        var = data["variables"]
        table = VariableTable(var["names"], var["kinds"], var["weights"])
        tr = data["truncation"]
        return cls(table, Window(tr["dq"], tr["dv"], tr["dlow"]),
                   [(table.exps(t["exps"]), t["coeff"]) for t in data["terms"]])

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _mul(a, b):
    t = a.table
    w = a.window
    if not a.terms or not b.terms:
        return a._new()
    box = t.box_degree
    nov = t.novikov_degree
    bl = sorted(((box(e), nov(e), e, c) for e, c in b.terms.items()), key=lambda r: r[0])
    acc = defaultdict(int)
    dq, dv, dlow = w.dq, w.dv, w.dlow
    for ea, ca in a.terms.items():
        ba, na = box(ea), nov(ea)
        for bb, nb, eb, cb in bl:
            d = ba + bb
            if d > dq:
                break
            if na + nb > dv:
                continue
            if d < dlow:
                raise SeriesError(
                    f"product term of box degree {d} falls below the window floor {dlow}")
            acc[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return a._new({e: c for e, c in acc.items() if c})


def geometric_inverse(x, table, window):
    """(1 - x)^-1 for a monomial exponent tuple x of positive degree."""
    bd = table.box_degree(x)
    nd = table.novikov_degree(x)
    if bd < 0 or (bd == 0 and nd <= 0):
        raise SeriesError("geometric series needs a monomial of positive degree")
    terms = {}
    k = 0
    e = (0,) * len(table)
    while k * bd <= window.dq and k * nd <= window.dv:
        terms[e] = 1
        e = tuple(a + b for a, b in zip(e, x))
        k += 1
        if bd == 0 and nd == 0:
            break
    return LaurentSeries(table, window, terms)


def product_of_inverses(monos, table, window):
    """prod (1 - x)^-1 over exponent tuples, as one series."""
    out = LaurentSeries.one(table, window)
    for x in monos:
        out = out * geometric_inverse(x, table, window)
    return out


def first_mismatch(a, b):
    """First differing term of a and b inside their common upper window.

    Terms are compared up to the smaller BOX and NOVIKOV tops; a series
    computed with a higher floor is taken to have no terms below it.
    Returns None on agreement, else (sparse monomial, coeff in a, coeff in b).
    """
    if a.table != b.table:
        raise SeriesError("series use different variable tables")
    t = a.table
    dq = min(a.window.dq, b.window.dq)
    dv = min(a.window.dv, b.window.dv)
    keys = set(a.terms) | set(b.terms)
    keys = [e for e in keys if t.box_degree(e) <= dq and t.novikov_degree(e) <= dv]
    keys.sort(key=lambda e: (t.box_degree(e), t.novikov_degree(e), e))
    for e in keys:
        ca, cb = a.terms.get(e, 0), b.terms.get(e, 0)
        if ca != cb:
            return t.sparse(e), ca, cb
    return None


def agree(a, b):
    return first_mismatch(a, b) is None
