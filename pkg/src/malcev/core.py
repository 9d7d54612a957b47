"""Finite semigroups as Cayley tables.

Elements are dense indices ``0..n-1``; names are display metadata.  Subsets
of a semigroup are passed around as integer bit masks (bit ``i`` set means
element ``i`` is a member).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 20


class SemigroupError(ValueError):
    """Base class for input and precondition errors."""


class MalformedTableError(SemigroupError):
    pass


class AssociativityError(SemigroupError):
    def __init__(self, triple: tuple[int, int, int], names: Sequence[str] | None = None):
        self.triple = triple
        if names is not None:
            shown = tuple(names[i] for i in triple)
        else:
            shown = triple
        super().__init__(f"(ab)c != a(bc) for (a, b, c) = {shown}")


class CapacityError(SemigroupError):
    """Raised when an exponential stage would exceed its configured bound."""


class PreconditionError(SemigroupError):
    pass


# -- bit mask helpers -------------------------------------------------------

def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_key(mask: int) -> tuple[int, int]:
    """Sort key: size first, then the mask value."""
    return (popcount(mask), mask)


# -- the semigroup type -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteSemigroup:
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    identity: int | None = field(init=False)
    zero: int | None = field(init=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise MalformedTableError("a semigroup needs at least one element")
        if len(self.names) != n:
            raise MalformedTableError(f"{len(self.names)} names for a table of order {n}")
        if len(set(self.names)) != n:
            seen = set()
            dup = next(x for x in self.names if x in seen or seen.add(x))
            raise MalformedTableError(f"duplicate element name {dup!r}")
        for a, row in enumerate(self.table):
            if len(row) != n:
                raise MalformedTableError(f"row {a} has {len(row)} entries, expected {n}")
            for b, v in enumerate(row):
                if not (isinstance(v, (int, np.integer)) and 0 <= v < n):
                    raise MalformedTableError(f"cell ({a}, {b}) holds out-of-range entry {v!r}")
        object.__setattr__(self, "identity", _find_identity(self.table))
        object.__setattr__(self, "zero", _find_zero(self.table))

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                   validate: bool = True) -> "FiniteSemigroup":
        rows = tuple(tuple(int(v) for v in row) for row in table)
        if names is None:
            names = [str(i) for i in range(len(rows))]
        s = cls(rows, tuple(names))
        if validate:
            bad = validate_associativity(s.table)
            if bad is not None:
                raise AssociativityError(bad, s.names)
        return s

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        return to_mask(self.index(x) for x in names)

    def labels(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def is_commutative(self) -> bool:
        t = self.array
        return bool((t == t.T).all())

    def is_band(self) -> bool:
        return all(self.table[a][a] == a for a in range(self.order))

    def __eq__(self, other):
        if not isinstance(other, FiniteSemigroup):
            return NotImplemented
        return self.table == other.table and self.names == other.names

    def __hash__(self):
        return hash((self.table, self.names))

    def __repr__(self):
        return f"FiniteSemigroup(order={self.order}, names={list(self.names)})"


def _find_identity(table) -> int | None:
    n = len(table)
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            return e
    return None


def _find_zero(table) -> int | None:
    n = len(table)
    for z in range(n):
        if all(table[z][x] == z and table[x][z] == z for x in range(n)):
            return z
    return None


def validate_associativity(table: Sequence[Sequence[int]]) -> tuple[int, int, int] | None:
    """Return None if the table is associative, else the smallest failing triple."""
    n = len(table)
    for a, row in enumerate(table):
        if len(row) != n:
            raise MalformedTableError(f"row {a} has {len(row)} entries, expected {n}")
        for b, v in enumerate(row):
            if not 0 <= v < n:
                raise MalformedTableError(f"cell ({a}, {b}) holds out-of-range entry {v}")
    t = np.asarray(table, dtype=np.int64)
    # lhs[a, b, c] = (ab)c, rhs[a, b, c] = a(bc)
    lhs = t[t]
    rhs = t[:, t]
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return None
    a, b, c = (int(v) for v in bad[0])
    return (a, b, c)


# -- constructions ----------------------------------------------------------

def adjoin_identity(s: FiniteSemigroup, name: str = "1") -> FiniteSemigroup:
    """S^1: ``s`` itself if it has an identity, else ``s`` with a new identity appended."""
    if s.identity is not None:
        return s
    n = s.order
    while name in s.names:
        name += "'"
    rows = [list(r) + [a] for a, r in enumerate(s.table)]
    rows.append(list(range(n + 1)))
    return FiniteSemigroup.from_table(rows, list(s.names) + [name], validate=False)


def closure(s: FiniteSemigroup, seed: int) -> int:
    """Mask of the subsemigroup generated by the elements of ``seed``."""
    if seed == 0:
        raise SemigroupError("cannot generate a subsemigroup from an empty seed")
    table = s.table
    members = list(bits(seed))
    closed = seed
    frontier = members[:]
    while frontier:
        new = []
        for x in frontier:
            rx = table[x]
            for y in members:
                for p in (rx[y], table[y][x]):
                    if not closed >> p & 1:
                        closed |= 1 << p
                        new.append(p)
        members.extend(new)
        frontier = new
    return closed


def is_closed(s: FiniteSemigroup, mask: int) -> bool:
    table = s.table
    els = list(bits(mask))
    return all(mask >> table[a][b] & 1 for a in els for b in els)


def enumerate_subsemigroups(s: FiniteSemigroup, max_order: int = DEFAULT_MAX_ORDER,
                            max_count: int | None = None) -> list[int]:
    """All nonempty subsemigroups, sorted by size then mask.

    Every subsemigroup is reached by closing a smaller one together with one
    extra element, so the search runs over closed sets rather than all 2^n seeds.
    """
    if s.order > max_order:
        raise CapacityError(f"subsemigroup enumeration is capped at order {max_order} (got {s.order})")
    cache: dict[int, int] = {}

    def close(seed):
        r = cache.get(seed)
        if r is None:
            r = cache[seed] = closure(s, seed)
        return r

    found = {close(1 << x) for x in range(s.order)}
    frontier = list(found)
    while frontier:
        new = []
        for t in frontier:
            for x in range(s.order):
                if t >> x & 1:
                    continue
                u = close(t | 1 << x)
                if u not in found:
                    found.add(u)
                    new.append(u)
                    if max_count is not None and len(found) > max_count:
                        raise CapacityError(f"more than {max_count} subsemigroups")
        frontier = new
    return sorted(found, key=mask_key)


def is_ideal(s: FiniteSemigroup, x: int, within: int | None = None) -> bool:
    """True iff ``x`` is empty or an ideal of the subsemigroup ``within`` (default: all of s)."""
    if x == 0:
        return True
    if within is None:
        within = s.full_mask
    if x & ~within:
        return False
    table = s.table
    for a in bits(x):
        for t in bits(within):
            if not (x >> table[a][t] & 1 and x >> table[t][a] & 1):
                return False
    return True


def principal_ideal(s: FiniteSemigroup, x: int, within: int | None = None) -> int:
    """Mask of T^1 x T^1 for the subsemigroup T = ``within``."""
    if within is None:
        within = s.full_mask
    table = s.table
    m = 1 << x
    for t in bits(within):
        m |= 1 << table[t][x] | 1 << table[x][t]
        for u in bits(within):
            m |= 1 << table[table[t][x]][u]
    return m


def enumerate_ideals(s: FiniteSemigroup, within: int | None = None) -> list[int]:
    """All ideals (including the empty set) of the subsemigroup ``within``.

    Ideals are exactly the down-closed unions of J-classes, so the enumeration
    walks down-sets of the J-order instead of all subsets.
    """
    if within is None:
        within = s.full_mask
    members = list(bits(within))
    below = {x: principal_ideal(s, x, within) for x in members}
    classes: list[int] = []
    seen = 0
    for x in members:
        if seen >> x & 1:
            continue
        cls = to_mask(y for y in members if below[y] == below[x])
        seen |= cls
        classes.append(cls)
    down = [below[next(bits(c))] for c in classes]
    # process classes from bottom to top so every prerequisite is decided first
    order = sorted(range(len(classes)), key=lambda k: popcount(down[k]))
    out: list[int] = []

    def walk(pos: int, current: int):
        if pos == len(order):
            out.append(current)
            return
        k = order[pos]
        walk(pos + 1, current)
        strict = down[k] & ~classes[k]
        if strict & ~current == 0:
            walk(pos + 1, current | classes[k])

    walk(0, 0)
    return sorted(out, key=mask_key)


# -- Rees quotients ---------------------------------------------------------

@dataclass(frozen=True)
class ReesQuotientView:
    """S/I with the surviving elements renumbered in order and θ appended."""

    parent: FiniteSemigroup
    collapsed: int
    semigroup: FiniteSemigroup
    to_parent: tuple[int | None, ...]
    zero_index: int | None

    def from_parent(self, x: int) -> int:
        if self.collapsed >> x & 1:
            return self.zero_index
        return self.to_parent.index(x)


def rees_quotient(s: FiniteSemigroup, ideal: int, zero_name: str = "theta",
                  check: bool = True) -> ReesQuotientView:
    if check and not is_ideal(s, ideal):
        raise PreconditionError(f"{s.labels(ideal)} is not an ideal")
    if ideal == 0:
        return ReesQuotientView(s, 0, s, tuple(range(s.order)), None)
    keep = [x for x in range(s.order) if not ideal >> x & 1]
    pos = {x: i for i, x in enumerate(keep)}
    z = len(keep)
    rows = []
    for a in keep:
        rows.append([pos.get(s.table[a][b], z) for b in keep] + [z])
    rows.append([z] * (z + 1))
    names = [s.names[x] for x in keep]
    zname = s.names[next(bits(ideal))] if popcount(ideal) == 1 else zero_name
    while zname in names:
        zname += "'"
    names.append(zname)
    q = FiniteSemigroup.from_table(rows, names, validate=__debug__ and check)
    return ReesQuotientView(s, ideal, q, tuple(keep) + (None,), z)


def restrict(s: FiniteSemigroup, mask: int) -> FiniteSemigroup:
    """The subsemigroup on ``mask`` as a standalone semigroup (indices renumbered in order)."""
    keep = list(bits(mask))
    pos = {x: i for i, x in enumerate(keep)}
    try:
        rows = [[pos[s.table[a][b]] for b in keep] for a in keep]
    except KeyError:
        raise PreconditionError(f"{s.labels(mask)} is not closed") from None
    return FiniteSemigroup.from_table(rows, [s.names[x] for x in keep], validate=False)


def all_tables(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every n×n table over n symbols (n^(n^2) of them)."""
    for cells in product(range(n), repeat=n * n):
        yield tuple(tuple(cells[r * n:(r + 1) * n]) for r in range(n))
