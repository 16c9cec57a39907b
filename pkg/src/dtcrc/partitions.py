"""Partitions, colored partitions and the n-quotient correspondence.

Young diagrams use English notation with rows and columns indexed from 0.
A cell (i, j) lies in row i and column j; its content is j - i and, for an
n-colored diagram, its color is (j - i) mod n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product


class PartitionError(ValueError):
    pass


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise PartitionError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise PartitionError(f"parts must be positive: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return ",".join(str(p) for p in self)

    def part(self, i):
        return self[i] if 0 <= i < len(self) else 0

    @property
    def size(self):
        return sum(self)

    def conjugate(self):
        return conjugate(self)

    def cells(self):
        return [(i, j) for i, row in enumerate(self) for j in range(row)]

    def contains(self, other):
        return len(other) <= len(self) and all(a >= b for a, b in zip(self, other))

    @classmethod
    def parse(cls, text):
        """Parse the comma-separated form; the empty string is the empty partition."""
        text = text.strip().strip("()")
        if not text:
            return cls()
        try:
            return cls(int(t) for t in text.split(","))
        except ValueError as exc:
            raise PartitionError(f"malformed partition {text!r}") from exc


EMPTY = Partition()


def conjugate(p):
    if not p:
        return EMPTY
    return Partition(sum(1 for r in p if r > j) for j in range(p[0]))


def partitions_of(n, max_part=None):
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    return [Partition(t) for t in _partitions(n, max_part)]


@lru_cache(maxsize=None)
def _partitions(n, max_part):
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_up_to(n):
    return [p for k in range(n + 1) for p in partitions_of(k)]


def diagonal_length(p, l):
    """Number of cells of ``p`` on the diagonal j - i = l."""
    count = 0
    i = max(0, -l)
    while i < len(p) and p[i] > i + l:
        count += 1
        i += 1
    return count


def slope(p, t):
    """+1 if t lies in {p_i - i - 1 : i >= 0}, else -1."""
    if t >= p.part(0):
        return -1
    if t < -len(p):
        return 1
    # p_i - i - 1 is strictly decreasing in i
    for i in range(len(p) + 1):
        v = p.part(i) - i - 1
        if v <= t:
            return 1 if v == t else -1
    return -1


def slope_set(p, lo):
    """The elements of {p_i - i - 1} that are >= lo, in decreasing order."""
    out = []
    i = 0
    while True:
        v = p.part(i) - i - 1
        if v < lo:
            return out
        out.append(v)
        i += 1


def from_slope_set(s):
    """Rebuild a partition from a decreasing finite head of its slope set.

    ``s`` must contain every element above some cutoff, and below the cutoff
    the set must be the staircase {-k-1, -k-2, ...}; this is what makes the
    charge zero.
    """
    s = sorted(s, reverse=True)
    parts = [v + i + 1 for i, v in enumerate(s)]
    return Partition(parts)


def interlaces(tau, sigma):
    """True when tau_0 >= sigma_0 >= tau_1 >= sigma_1 >= ..."""
    for i in range(max(len(tau), len(sigma))):
        if not tau.part(i) >= sigma.part(i) >= tau.part(i + 1):
            return False
    return True


@dataclass(frozen=True)
class ColoredPartition:
    shape: Partition
    modulus: int

    def __post_init__(self):
        if not isinstance(self.shape, Partition):
            object.__setattr__(self, "shape", Partition(self.shape))
        if self.modulus < 1:
            raise PartitionError("modulus must be >= 1")

    def __str__(self):
        return str(self.shape)

    @property
    def size(self):
        return self.shape.size

    def color(self, cell):
        i, j = cell
        return (j - i) % self.modulus

    def color_counts(self):
        counts = [0] * self.modulus
        for i, row in enumerate(self.shape):
            for j in range(row):
                counts[(j - i) % self.modulus] += 1
        return counts

    def is_balanced(self):
        counts = self.color_counts()
        return all(c == counts[0] for c in counts)

    def check_balanced(self):
        counts = self.color_counts()
        if any(c != counts[0] for c in counts):
            target = max(counts)
            short = [c for c, k in enumerate(counts) if k < target]
            raise PartitionError(
                f"{self.shape} is not balanced mod {self.modulus}: "
                f"color counts {counts}, deficient color {short[0]}"
            )

    def conjugate(self):
        return ColoredPartition(conjugate(self.shape), self.modulus)


def balanced_partitions(n, weight):
    """Balanced n-colored partitions with ``weight`` cells of each color."""
    out = []
    for q in quotient_tuples(n, weight):
        out.append(to_colored(q))
    return out


def quotient_tuples(n, total):
    """All n-tuples of partitions with sizes summing to ``total``."""
    out = []
    for sizes in _compositions(total, n):
        for combo in product(*(partitions_of(s) for s in sizes)):
            out.append(tuple(combo))
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# -- border strips -----------------------------------------------------------

def _beta(p, length):
    return [p.part(i) + length - 1 - i for i in range(length)]


def _from_beta(beta):
    beta = sorted(beta, reverse=True)
    length = len(beta)
    return Partition(b - (length - 1 - i) for i, b in enumerate(beta))


def removable_strips(p, n):
    """Every n-border strip of ``p`` as (smaller partition, cells, height)."""
    length = len(p) + n
    beta = _beta(p, length)
    occupied = set(beta)
    out = []
    for b in beta:
        if b - n >= 0 and b - n not in occupied:
            new_beta = [x if x != b else b - n for x in beta]
            smaller = _from_beta(new_beta)
            cells = sorted(set(p.cells()) - set(smaller.cells()))
            height = len({i for i, _ in cells}) - 1
            out.append((smaller, cells, height))
    return out


def strip_height(cells):
    return len({i for i, _ in cells}) - 1


def chi_over_dim(cp):
    """Sign (-1)^(total height) of a border-strip decomposition.

    Strips are removed greedily, always taking the strip whose head (its
    northeastern-most cell) is lexicographically last.
    """
    cp.check_balanced()
    p, n = cp.shape, cp.modulus
    total = 0
    while p:
        strips = removable_strips(p, n)
        if not strips:
            raise PartitionError(f"{p} has a non-empty {n}-core")
        p, cells, height = max(strips, key=lambda s: _strip_head(s[1]))
        total += height
    return -1 if total % 2 else 1


def _strip_head(cells):
    # northeastern-most cell: smallest row, then largest column
    return min(cells, key=lambda c: (c[0], -c[1]))


def all_strip_signs(p, n):
    """Set of signs over every maximal border-strip removal sequence."""
    return _all_signs(Partition(p), n)


@lru_cache(maxsize=None)
def _all_signs(p, n):
    if not p:
        return frozenset({1})
    out = set()
    for smaller, _, height in removable_strips(p, n):
        sgn = -1 if height % 2 else 1
        out |= {sgn * s for s in _all_signs(smaller, n)}
    return frozenset(out)


# -- n-quotients ---------------------------------------------------------------

def from_colored(cp):
    """De-interlace the slope sequence of a balanced colored partition.

    Component k reads the slope sequence at t = n*s + k.
    """
    p, n = cp.shape, cp.modulus
    lo = -len(p) - 1
    lo -= lo % n  # multiple of n, below every irregular position
    s = set(slope_set(p, lo))
    comps = []
    for k in range(n):
        sub = [(t - k) // n for t in s if t % n == k]
        # positions below lo are all +1; component k must then be the
        # staircase below (lo - k) / n, i.e. of charge zero
        floor = (lo - k + n - 1) // n  # smallest s with n*s + k >= lo
        expected = -floor  # staircase {-1, ..., floor}
        if len(sub) != expected:
            raise PartitionError(
                f"{p} has a non-empty {n}-core (component {k} has charge "
                f"{len(sub) - expected})"
            )
        comps.append(from_slope_set(sub))
    return tuple(comps)


def to_colored(q):
    """Interlace the slope sequences of an n-tuple of partitions."""
    q = tuple(Partition(x) for x in q)
    n = len(q)
    lo_s = -max([len(x) for x in q] + [0]) - 1
    s = []
    for k, comp in enumerate(q):
        s.extend(n * t + k for t in slope_set(comp, lo_s))
    # below n*lo_s everything is +1 in every component; truncating there
    # keeps the staircase shape, so the count of retained entries is
    # -(n*lo_s) exactly
    s = [t for t in s if t >= n * lo_s]
    return ColoredPartition(from_slope_set(s), n)


def add_box_strip(q, k, cell):
    """Add ``cell`` to component ``k`` of the quotient ``q``.

    Returns the new colored partition, the added border strip cells and the
    strip height.
    """
    q = tuple(Partition(x) for x in q)
    i, j = cell
    comp = list(q[k])
    if i > len(comp) or (i < len(comp) and comp[i] != j) or (i == len(comp) and j != 0):
        raise PartitionError(f"cannot add cell {cell} to {q[k]}")
    if i > 0 and comp[i - 1] <= j:
        raise PartitionError(f"cannot add cell {cell} to {q[k]}")
    if i == len(comp):
        comp.append(1)
    else:
        comp[i] += 1
    new_q = q[:k] + (Partition(comp),) + q[k + 1:]
    old = to_colored(q)
    new = to_colored(new_q)
    cells = sorted(set(new.shape.cells()) - set(old.shape.cells()))
    return new, cells, strip_height(cells)


def remove_box(q, k, cell):
    """Quotient with ``cell`` removed from component ``k``; cell must be a corner."""
    q = tuple(Partition(x) for x in q)
    i, j = cell
    comp = q[k]
    if not (i < len(comp) and comp[i] == j + 1 and comp.part(i + 1) <= j):
        raise PartitionError(f"cell {cell} is not removable from {comp}")
    parts = list(comp)
    parts[i] -= 1
    return q[:k] + (Partition(parts),) + q[k + 1:]


def removable_cells(p):
    return [(i, p[i] - 1) for i in range(len(p)) if p.part(i + 1) < p[i]]


def format_quotient(q):
    return " | ".join(f"({x})" for x in q)


def parse_quotient(text, n=None):
    pieces = text.split(";")
    q = tuple(Partition.parse(x) for x in pieces)
    if n is not None and len(q) != n:
        raise PartitionError(f"expected {n} components, got {len(q)}")
    return q
