"""Brute-force enumeration of colored 3D partitions with three asymptotic legs.

This is the independent oracle for the vertex.  A 3D partition is a downward
closed set of cells (x, y, z) in the positive octant.  Its legs are:

* the x-leg, with cross-section ``A`` in the (y, z) plane: z < A[y]
* the y-leg, with cross-section ``B`` in the (z, x) plane: x < B[z]
* the z-leg, with cross-section ``C`` in the (x, y) plane: y < C[x]

A cell has color (x - y) mod n.  The renormalized color count subtracts the
infinite legs, keeping a finite per-color constant from their overlaps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .partitions import ColoredPartition, EMPTY, Partition, conjugate, partitions_of
from .series import LaurentSeries, Window
from .vertex import q_table, VertexSeries


class Legs:
    def __init__(self, a=(), b=(), c=()):
        self.a, self.b, self.c = Partition(a), Partition(b), Partition(c)

    def contains(self, cell):
        x, y, z = cell
        return (z < self.a.part(y)) or (x < self.b.part(z)) or (y < self.c.part(x))

    def extent(self):
        return max([len(p) for p in (self.a, self.b, self.c)]
                   + [p.part(0) for p in (self.a, self.b, self.c)] + [0])


def leg_constant(legs, n):
    """Per-color constant of the renormalized count of the bare legs.

    Inside an N-box (N a multiple of n) each single leg contributes exactly
    what the renormalization subtracts, so by inclusion-exclusion only the
    finite pairwise and triple overlaps survive.
    """
    a, b, c = legs.a, legs.b, legs.c
    K = legs.extent()
    counts = [0] * n
    for x in range(K):
        for y in range(K):
            for z in range(K):
                k = (z < a.part(y)) + (x < b.part(z)) + (y < c.part(x))
                if k >= 2:
                    counts[(x - y) % n] -= 1 if k == 2 else 2
    return tuple(counts)


def leg_constant_boxed(legs, n, N):
    """The same constant computed directly in the box [0, N)^3."""
    counts = [0] * n
    for x in range(N):
        for y in range(N):
            for z in range(N):
                if legs.contains((x, y, z)):
                    counts[(x - y) % n] += 1
    for x, col in enumerate(legs.c):
        for y in range(col):
            counts[(x - y) % n] -= N
    for k in range(n):
        counts[k] -= (N // n) * (legs.a.size + legs.b.size)
    return tuple(counts)


@dataclass(frozen=True)
class ThreeDPartition:
    """Finitely many cells beyond three infinite legs."""
    filled: frozenset = frozenset()
    legs: Legs = field(default_factory=Legs)

    def __post_init__(self):
        object.__setattr__(self, "filled", frozenset(tuple(c) for c in self.filled))
        for cell in self.filled:
            if min(cell) < 0 or self.legs.contains(cell):
                raise ValueError(f"cell {cell} is negative or inside a leg")
            if not _addable(cell, self.legs, self.filled):
                raise ValueError(f"cell {cell} is not supported: not downward closed")


def renormalized_color_count(pi, n):
    """Per-color cell count of ``pi`` with the infinite legs subtracted."""
    counts = list(leg_constant(pi.legs, n))
    for x, y, _z in pi.filled:
        counts[(x - y) % n] += 1
    return tuple(counts)


def _addable(cell, legs, filled):
    x, y, z = cell
    for p in ((x - 1, y, z), (x, y - 1, z), (x, y, z - 1)):
        if min(p) < 0:
            continue
        if p not in filled and not legs.contains(p):
            return False
    return True


def extra_box_configurations(legs, max_boxes):
    """All finite sets of boxes (beyond the legs) of size <= max_boxes, as frozensets."""
    K = legs.extent() + max_boxes + 1
    seeds = set()
    for x in range(K):
        for y in range(K):
            for z in range(K):
                c = (x, y, z)
                if not legs.contains(c) and _addable(c, legs, frozenset()):
                    seeds.add(c)
    levels = [{frozenset()}]
    for _ in range(max_boxes):
        nxt = set()
        for s in levels[-1]:
            cand = set(seeds)
            for (x, y, z) in s:
                cand.update(((x + 1, y, z), (x, y + 1, z), (x, y, z + 1)))
            for c in cand:
                if c in s or legs.contains(c):
                    continue
                if _addable(c, legs, s):
                    nxt.add(s | {c})
        levels.append(nxt)
    return levels


def count_plane_partitions_cells(d):
    """Number of plane partitions of d, by cell-set search."""
    return len(extra_box_configurations(Legs(), d)[d])


def count_plane_partitions_layers(d):
    """Number of plane partitions of d, built row by row from weakly decreasing rows."""
    @lru_cache(maxsize=None)
    def rows(remaining, bound):
        # bound: the previous row; each new row is a partition dominated entrywise
        if remaining == 0:
            return 1
        total = 0
        for k in range(1, remaining + 1):
            for row in partitions_of(k):
                if len(row) <= len(bound) and all(a <= b for a, b in zip(row, bound)):
                    total += rows(remaining - k, row)
        return total
    return rows(d, tuple([d] * d))


def slice_counts(legs, n, budget):
    """Colored counts of extra boxes, by a transfer over diagonal slices.

    The height function h(x, y) is swept one diagonal x - y = d at a time.
    Each cell's height is bounded above by its left neighbour (x-1, y) and
    below by max(base, h(x, y+1)), both on the previous diagonal, so a slice
    only depends on the one before it.  Cells of the z-leg have infinite
    height.  Returns {color exponent tuple: count} for totals <= budget.
    """
    a, bc, c = legs.a, conjugate(legs.b), legs.c
    K = legs.extent() + budget + 1
    inf = float("inf")

    def base(x, y):
        return max(a.part(y), bc.part(x))

    states = {(): {(0,) * n: 1}}
    prev = []
    for d in range(-(K - 1), K):
        cells = [(x, x - d) for x in range(max(0, d), min(K, K + d))]
        col = d % n
        new = {}
        for st, poly in states.items():
            h = dict(zip(prev, st))
            room = budget - min(sum(e) for e in poly)
            bounds = []
            for (x, y) in cells:
                if y < c.part(x):
                    bounds.append((inf, inf, inf))
                    continue
                b = base(x, y)
                hi = h.get((x - 1, y), b + room)
                lo = max(b, h.get((x, y + 1), b))
                if hi < lo:
                    bounds = None
                    break
                bounds.append((lo, min(hi, b + room), b))
            if bounds is None:
                continue
            for sl, used in _slices(bounds, room):
                target = new.setdefault(sl, {})
                for e, k in poly.items():
                    if sum(e) + used > budget:
                        continue
                    e2 = list(e)
                    e2[col] += used
                    e2 = tuple(e2)
                    target[e2] = target.get(e2, 0) + k
        states = {k: v for k, v in new.items() if v}
        prev = cells
    total = {}
    for poly in states.values():
        for e, k in poly.items():
            total[e] = total.get(e, 0) + k
    return total


def _slices(bounds, room):
    out = []

    def rec(i, acc, used):
        if i == len(bounds):
            out.append((tuple(acc), used))
            return
        lo, hi, b = bounds[i]
        if lo == float("inf"):
            rec(i + 1, acc + [lo], used)
            return
        for v in range(lo, hi + 1):
            u = used + v - b
            if u > room:
                break
            rec(i + 1, acc + [v], u)
    rec(0, [], 0)
    return out


def cell_counts(legs, n, budget):
    """The same counts as :func:`slice_counts`, by direct cell-set search."""
    out = {}
    for level in extra_box_configurations(legs, budget):
        for s in level:
            e = [0] * n
            for (x, y, _z) in s:
                e[(x - y) % n] += 1
            e = tuple(e)
            out[e] = out.get(e, 0) + 1
    return out


@lru_cache(maxsize=None)
def _counts(a, b, c, n, budget):
    return slice_counts(Legs(a, b, c), n, budget)


def colored_generating_function(a, b, c, n, dq, reduced=True, relative=False):
    """Renormalized colored count of 3D partitions with legs (a, b, c).

    With ``reduced`` the result is divided by the leg-free series.  With
    ``relative`` the window is [lead, lead + dq], where lead is the degree of
    the bare legs' renormalized count; otherwise it is absolute.
    """
    a, b, c = Partition(a), Partition(b), Partition(c)
    table = q_table(n)
    const = leg_constant(Legs(a, b, c), n)
    shift = sum(const)
    if relative:
        window = Window(shift + dq, 0, min(shift, 0))
    else:
        window = Window(dq, 0, min(-dq, shift))
    need = window.dq - shift
    if need < 0:
        return LaurentSeries.zero(table, window)
    big = Window(need, 0, 0)
    f = LaurentSeries(table, big, _counts(a, b, c, n, need))
    if reduced:
        f = f * LaurentSeries(table, big, _counts(EMPTY, EMPTY, EMPTY, n, need)).invert()
    return f.shift(const, window)


def leg_normalization(rho_plus, rho_minus, n):
    """Per-leg monomial matching the vertex-operator normalization.

    A cell (i, j) of rho+ below the first row carries q_{j-i} to the number
    of cells from it to the bottom of its column; a cell of rho- right of the
    first column carries q_{j-i} to the number of cells from it to the end of
    its row.  The big-box renormalization fixes each leg's weight only up to
    a factor of this kind.
    """
    rp, rm = Partition(rho_plus), Partition(rho_minus)
    cols = conjugate(rp)
    e = [0] * n
    for i, j in rp.cells():
        if i >= 1:
            e[(j - i) % n] += cols[j] - i
    for i, j in rm.cells():
        if j >= 1:
            e[(j - i) % n] += rm[i] - j
    return tuple(e)


def oracle_vertex(rho_plus, rho_minus, lambda_bar, n, dq, relative=False):
    """Reduced vertex from 3D partitions: x-leg rho+, y-leg rho-, z-leg lambda_bar'."""
    lam = lambda_bar if isinstance(lambda_bar, ColoredPartition) else \
        ColoredPartition(Partition(lambda_bar), n)
    lam.check_balanced()
    rp, rm = Partition(rho_plus), Partition(rho_minus)
    m = leg_normalization(rp, rm, n)
    shift = sum(m)
    if relative:
        raw = colored_generating_function(rp, rm, conjugate(lam.shape), n, dq, relative=True)
        value = raw.shift(m)
    else:
        raw = colored_generating_function(rp, rm, conjugate(lam.shape), n, dq - shift)
        value = raw.shift(m, Window(dq, 0, min(-dq, raw.window.dlow + shift)))
    return VertexSeries(value, "enumeration", (rp, rm, lam.shape, n, dq))
