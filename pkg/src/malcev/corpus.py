"""Fixture semigroups, the chained band family, small groups, and a small-order census."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations, product
from typing import Iterator

import numpy as np

from .core import CapacityError, FiniteSemigroup, validate_associativity
from .formats import format_text, parse_text, row_checksum

THETA = "theta"


def _rows(text: str) -> list[list[str]]:
    return [line.split() for line in text.strip().splitlines()]


# name -> (element names, table rows, provenance, expected)
_TABLES: dict[str, tuple[list[str], list[list[str]], str, dict]] = {
    "S5": (
        ["a", "b", "c", "d", "e"],
        _rows("""
            a a a a a
            a b a a e
            a a c d a
            d d d d d
            e e e e e
        """),
        "five-element semigroup with the ideal {a, d, e}; not pseudo-nilpotent",
        {"associative": True, "mn": False, "pseudo": False, "non_edge": ["b", "e"],
         "witness": {"x": "b", "y": "e", "word": ["a", "a"], "t": 1, "m": 2, "bad_index": 0}},
    ),
    "S4": (
        [THETA, "a", "b", "c"],
        _rows("""
            theta theta theta theta
            theta theta a     theta
            theta a     b     a
            theta theta a     theta
        """),
        "commutative four-element semigroup whose complement set F' is not an ideal",
        {"associative": True, "frame": {"J": [THETA, "a"], "F": ["b"], "F_prime": [THETA, "c"],
                                        "F_prime_is_ideal": False}},
    ),
    "T5": (
        ["a", "b", "c", "d", "e"],
        _rows("""
            a a a a a
            a b a a b
            a a c d a
            a a c d a
            a e a a e
        """),
        "pseudo-nilpotent semigroup with two roots",
        {"associative": True, "pseudo": True, "roots": [["b", "e"], ["c", "d"]]},
    ),
    "T6": (
        [THETA, "a", "b", "c", "d", "f"],
        _rows("""
            theta theta theta theta theta theta
            theta a     b     theta theta b
            theta a     b     theta theta b
            theta theta theta c     d     d
            theta theta theta c     d     d
            theta a     b     c     d     f
        """),
        "two stems sharing the connection {f}",
        {"associative": True, "pseudo": True, "roots": [["a", "b"], ["c", "d"]],
         "stems": [["a", "b", "f"], ["c", "d", "f"]], "connections": [["f"]]},
    ),
    "R8": (
        [THETA, "a1", "a2", "a3", "a4", "b1", "b2", "b3"],
        _rows("""
            theta theta theta theta theta theta theta theta
            theta a1    a2    theta theta a1    a2    a2
            theta a1    a2    theta theta a1    a2    a2
            theta theta theta a3    a4    a3    a3    a4
            theta theta theta a3    a4    a3    a3    a4
            theta a1    a2    a3    a4    b1    b2    b3
            theta a1    a2    a3    a4    b1    b2    b3
            theta a1    a2    a3    a4    b1    b2    b3
        """),
        "strong pseudo-nilpotent semigroup with two roots and one connection",
        {"associative": True, "pseudo": True, "strong": True,
         "roots": [["a1", "a2"], ["a3", "a4"]], "connections": [["b1", "b2", "b3"]],
         "K": [THETA], "phi_classes": {"a1 a2": [["b1"], ["b2", "b3"]],
                                       "a3 a4": [["b1", "b2"], ["b3"]]}},
    ),
    "T11": (
        [THETA, "a1", "b1", "a2", "b2", "a3", "b3", "f1", "f2", "f3", "f4"],
        _rows("""
            theta theta theta theta theta theta theta theta theta theta theta
            theta a1    b1    theta theta theta theta b1    a1    theta theta
            theta a1    b1    theta theta theta theta b1    a1    theta theta
            theta theta theta a2    b2    theta theta b2    a2    b2    a2
            theta theta theta a2    b2    theta theta b2    a2    b2    a2
            theta theta theta theta theta a3    b3    theta theta b3    a3
            theta theta theta theta theta a3    b3    theta theta b3    a3
            theta a1    b1    a2    b2    theta theta f1    f2    b2    a2
            theta a1    b1    a2    b2    theta theta f1    f2    b2    a2
            theta theta theta a2    b2    a3    b3    b2    a2    f3    f4
            theta theta theta a2    b2    a3    b3    b2    a2    f3    f4
        """),
        "pseudo-nilpotent but not strong: three roots chained by two connections",
        {"associative": True, "pseudo": True, "strong": False,
         "roots": [["a1", "b1"], ["a2", "b2"], ["a3", "b3"]],
         "connections": [["f1", "f2"], ["f3", "f4"]],
         "connected_roots": [[["a1", "b1"], ["a2", "b2"]], [["a2", "b2"], ["a3", "b3"]]],
         "K_a1": ["a1", "b1", "f1", "f2"]},
    ),
    "M0_22": (
        [THETA, "e11", "e12", "e21", "e22"],
        _rows("""
            theta theta theta theta theta
            theta e11   e12   e11   e12
            theta theta theta e11   e12
            theta e21   e22   e21   e22
            theta theta theta e21   e22
        """),
        "Rees matrix semigroup over the trivial group, 2x2 sandwich [[1,1],[0,1]]",
        {"associative": True, "pseudo": False,
         "sandwich": [[1, 1], [None, 1]]},
    ),
}


@dataclass(frozen=True)
class Fixture:
    key: str
    semigroup: FiniteSemigroup
    provenance: str
    expected: dict = field(default_factory=dict)


def fixture_keys() -> list[str]:
    return list(_TABLES)


def _embedded(key: str) -> FiniteSemigroup:
    names, rows, _, _ = _TABLES[key]
    index = {x: i for i, x in enumerate(names)}
    return FiniteSemigroup.from_table([[index[v] for v in row] for row in rows], names)


def get_fixture(key: str) -> Fixture:
    if key not in _TABLES:
        raise KeyError(f"unknown fixture {key!r}; known: {', '.join(_TABLES)}")
    names, rows, prov, expected = _TABLES[key]
    return Fixture(key, _embedded(key), prov, expected)


def fixture_text(key: str) -> str:
    """The data-file rendering of an embedded fixture, with per-row checksums."""
    _, _, prov, _ = _TABLES[key]
    return format_text(_embedded(key), checksums=True, header=f"{key}: {prov}")


def load_fixture_file(key: str) -> FiniteSemigroup:
    """Read the checked-in data file, verifying every row checksum."""
    text = resources.files(__package__).joinpath("data", f"{key}.txt").read_text()
    return parse_text(text, verify_checksums=True)


def all_fixtures() -> list[Fixture]:
    return [get_fixture(k) for k in _TABLES]


# -- the chained band family ------------------------------------------------

def chained_band_names(n: int) -> list[str]:
    names = [THETA]
    for i in range(n + 2):
        names += [f"a{i}", f"b{i}"]
    names += [f"f{i}" for i in range(n + 1)]
    names += [f"l{i}" for i in range(1, n + 1)]
    return names


def chained_band_family(n: int, with_defaults: bool = False):
    """The band built from n+1 copies X_0..X_n of the six-element connection example.

    X_i = {θ, a_i, b_i, f_i, c_i, d_i} with c_i = a_{i+1}, d_i = b_{i+1}; the
    linking elements l_1..l_n glue neighbouring f's.  The explicit rules leave
    some products between far-apart blocks open.  They are set to θ, the only
    associative completion in which every {θ, a_k, b_k} is an ideal and
    f_j f_k lies in {θ, l_k}.  With ``with_defaults`` the list of those cells
    is returned too.
    """
    if n < 1:
        raise ValueError("the family starts at n = 1")
    names = chained_band_names(n)
    idx = {x: i for i, x in enumerate(names)}
    size = len(names)
    table: list[list[int | None]] = [[None] * size for _ in range(size)]

    def put(x, y, v):
        a, b, p = idx[x], idx[y], idx[v]
        old = table[a][b]
        if old is not None and old != p:
            raise ValueError(f"conflicting products for {x}{y}: {names[old]} vs {v}")
        table[a][b] = p

    def a(i): return f"a{i}"
    def b(i): return f"b{i}"
    def f(i): return f"f{i}"
    def l(i): return f"l{i}"

    for i in range(n + 1):
        c, d = a(i + 1), b(i + 1)
        block = [THETA, a(i), b(i), f(i), c, d]
        rows = [
            [THETA] * 6,
            [THETA, a(i), b(i), b(i), THETA, THETA],
            [THETA, a(i), b(i), b(i), THETA, THETA],
            [THETA, a(i), b(i), f(i), c, d],
            [THETA, THETA, THETA, d, c, d],
            [THETA, THETA, THETA, d, c, d],
        ]
        for x, row in zip(block, rows):
            for y, v in zip(block, row):
                put(x, y, v)

    def block_of(i):
        return [THETA, a(i), b(i), f(i), a(i + 1), b(i + 1)]

    for i in range(n - 1):
        for x in block_of(i):
            for y in block_of(i + 2):
                put(x, y, THETA)
                put(y, x, THETA)

    for i in range(n):
        c, d = a(i + 1), b(i + 1)
        cols = [f(i), f(i + 1), c, d, l(i + 1)]
        rows = [
            [f(i), l(i + 1), c, d, l(i + 1)],
            [l(i + 1), f(i + 1), c, d, l(i + 1)],
            [d, d, c, d, d],
            [d, d, c, d, d],
            [l(i + 1), l(i + 1), c, d, l(i + 1)],
        ]
        for x, row in zip(cols, rows):
            for y, v in zip(cols, row):
                put(x, y, v)
        for x in (a(i), b(i)):
            put(x, f(i + 1), THETA)
            put(f(i + 1), x, THETA)
        for x in (a(i + 2), b(i + 2)):
            put(x, f(i), THETA)
            put(f(i), x, THETA)

    for i in range(1, n + 1):
        keep = {l(i), f(i - 1), f(i), a(i), b(i)}
        for x in names:
            if x not in keep:
                put(l(i), x, THETA)
                put(x, l(i), THETA)

    defaults = []
    for r in range(size):
        for col in range(size):
            if table[r][col] is None:
                table[r][col] = idx[THETA]
                defaults.append((names[r], names[col]))
    s = FiniteSemigroup.from_table(table, names)
    if with_defaults:
        return s, defaults
    return s


# -- small groups -----------------------------------------------------------

def _permutation_group(gens: list[tuple[int, ...]], prefix: str = "g") -> FiniteSemigroup:
    ident = tuple(range(len(gens[0])))
    elems = [ident]
    seen = {ident}
    for p in elems:
        for g in gens:
            q = tuple(p[i] for i in g)
            if q not in seen:
                seen.add(q)
                elems.append(q)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[i] for i in q)] for q in elems] for p in elems]
    return FiniteSemigroup.from_table(table, ["e"] + [f"{prefix}{i}" for i in range(1, len(elems))])


def cyclic_group(n: int) -> FiniteSemigroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteSemigroup.from_table(table, ["e"] + [f"g{i}" for i in range(1, n)])


def direct_product(s: FiniteSemigroup, t: FiniteSemigroup) -> FiniteSemigroup:
    pairs = list(product(range(s.order), range(t.order)))
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(s.table[a][c], t.table[b][d])] for c, d in pairs] for a, b in pairs]
    return FiniteSemigroup.from_table(table, [f"{s.names[a]}.{t.names[b]}" for a, b in pairs])


def quaternion_group() -> FiniteSemigroup:
    # elements ±1, ±i, ±j, ±k as (sign, unit)
    units = ["1", "i", "j", "k"]
    mult = {
        ("1", x): (1, x) for x in units
    }
    mult.update({(x, "1"): (1, x) for x in units})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(sg, u) for sg in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            sg, u = mult[(u1, u2)]
            row.append(index[(s1 * s2 * sg, u)])
        table.append(row)
    names = [("" if sg == 1 else "-") + u for sg, u in elems]
    return FiniteSemigroup.from_table(table, names)


def small_groups() -> dict[str, FiniteSemigroup]:
    """Groups with known classical nilpotency, keyed by the usual name."""
    return {
        "C2": cyclic_group(2),
        "C6": cyclic_group(6),
        "C2xC2": direct_product(cyclic_group(2), cyclic_group(2)),
        "S3": _permutation_group([(1, 0, 2), (1, 2, 0)]),
        "D4": _permutation_group([(1, 2, 3, 0), (3, 2, 1, 0)]),
        "Q8": quaternion_group(),
        "A4": _permutation_group([(1, 2, 0, 3), (1, 0, 3, 2)]),
        "D6": _permutation_group([(1, 2, 3, 4, 5, 0), (5, 4, 3, 2, 1, 0)]),
        "C2xS3": direct_product(cyclic_group(2), _permutation_group([(1, 0, 2), (1, 2, 0)])),
    }


NILPOTENT_GROUPS = {"C2", "C6", "C2xC2", "D4", "Q8"}


# -- small-order census -----------------------------------------------------

def canonical_form(table, anti: bool = False) -> tuple:
    """Least relabelled table over all permutations (and transposes when ``anti``)."""
    t = np.asarray(table)
    n = len(t)
    variants = [t, t.T] if anti else [t]
    best = None
    for perm in permutations(range(n)):
        p = np.array(perm)
        inv = np.argsort(p)
        for v in variants:
            # relabel x -> p[x]: new[p[a], p[b]] = p[v[a, b]]
            new = p[v[np.ix_(inv, inv)]]
            key = tuple(new.reshape(-1).tolist())
            if best is None or key < best:
                best = key
    return best


def _associative_tables(n: int) -> Iterator[tuple]:
    if n <= 3:
        cells = n * n
        for flat in product(range(n), repeat=cells):
            rows = [flat[r * n:(r + 1) * n] for r in range(n)]
            if validate_associativity(rows) is None:
                yield flat
        return
    # backtracking with early associativity checks for order 4
    t = [[-1] * n for _ in range(n)]

    def ok():
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                if ab < 0:
                    continue
                for c in range(n):
                    bc = t[b][c]
                    if bc < 0:
                        continue
                    lhs, rhs = t[ab][c], t[a][bc]
                    if lhs >= 0 and rhs >= 0 and lhs != rhs:
                        return False
        return True

    def fill(k):
        if k == n * n:
            yield tuple(v for row in t for v in row)
            return
        r, c = divmod(k, n)
        for v in range(n):
            t[r][c] = v
            if ok():
                yield from fill(k + 1)
        t[r][c] = -1

    yield from fill(0)


def enumerate_small(order: int, up_to: str = "iso", allow_order4: bool = False) -> list[FiniteSemigroup]:
    """Every semigroup of the given order, once per isomorphism (or iso/anti-iso) class."""
    if up_to not in ("iso", "iso_and_anti"):
        raise ValueError(f"unknown equivalence {up_to!r}")
    if order < 1:
        raise ValueError("order must be positive")
    if order > 4 or (order == 4 and not allow_order4):
        raise CapacityError(f"exhaustive enumeration is limited to order 3 (4 with the flag), got {order}")
    anti = up_to == "iso_and_anti"
    seen = set()
    out = []
    for flat in _associative_tables(order):
        key = canonical_form(np.array(flat).reshape(order, order), anti)
        if key in seen:
            continue
        seen.add(key)
        rows = [key[r * order:(r + 1) * order] for r in range(order)]
        out.append(FiniteSemigroup.from_table(rows, validate=False))
    out.sort(key=lambda s: s.table)
    return out


def fixture_checksums(key: str) -> list[str]:
    s = get_fixture(key).semigroup
    return [row_checksum([s.names[v] for v in row]) for row in s.table]
