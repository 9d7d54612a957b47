"""Green's relations, principal series and Rees matrix coordinates."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .core import (FiniteSemigroup, PreconditionError, bits, popcount, to_mask)
from .nilpotency import group_nilpotency_class, is_acyclic_table, local_table

import numpy as np


@dataclass(frozen=True)
class GreenClasses:
    r_classes: list[int]
    l_classes: list[int]
    j_classes: list[int]
    h_classes: list[int]
    ideal_of: dict[int, int]  # element -> mask of S^1 x S^1

    def j_class_of(self, x: int) -> int:
        return next(c for c in self.j_classes if c >> x & 1)

    def r_class_of(self, x: int) -> int:
        return next(c for c in self.r_classes if c >> x & 1)

    def l_class_of(self, x: int) -> int:
        return next(c for c in self.l_classes if c >> x & 1)

    def j_leq(self, x: int, y: int) -> bool:
        """J_x <= J_y in the J-order."""
        return bool(self.ideal_of[y] >> x & 1)


def _partition(keys: list[int]) -> list[int]:
    groups: dict[int, int] = {}
    for x, k in enumerate(keys):
        groups[k] = groups.get(k, 0) | 1 << x
    return sorted(groups.values(), key=lambda m: (m & -m))


def green_classes(s: FiniteSemigroup) -> GreenClasses:
    t = s.table
    n = s.order
    right = [to_mask([x] + [t[x][y] for y in range(n)]) for x in range(n)]
    left = [to_mask([x] + [t[y][x] for y in range(n)]) for x in range(n)]
    two = []
    for x in range(n):
        m = left[x]
        for y in bits(left[x]):
            m |= right[y]
        two.append(m)
    r = _partition(right)
    l = _partition(left)
    j = _partition(two)
    h = _partition([right[x] * (1 << n) + left[x] for x in range(n)])
    return GreenClasses(r, l, j, h, {x: two[x] for x in range(n)})


# -- principal series -------------------------------------------------------

class FactorKind(str, Enum):
    NULL = "null"
    SIMPLE = "completely-simple"
    ZERO_SIMPLE = "completely-0-simple"


@dataclass
class ReesMatrix:
    """Coordinates (g; i, λ) of a regular J-class.

    ``group`` is the H-class of the chosen idempotent ``identity``; rows are
    R-classes, columns are L-classes.  ``sandwich[λ][i]`` is an element of
    the group or None (θ).  ``coords`` maps each element of the class to
    ``(g, i, λ)``.
    """

    j_class: int
    identity: int
    group: int
    rows: list[int]
    cols: list[int]
    row_reps: list[int]
    col_reps: list[int]
    sandwich: list[list[int | None]]
    coords: dict[int, tuple[int, int, int]]

    def element(self, g: int, i: int, lam: int, s: FiniteSemigroup) -> int:
        t = s.table
        return t[t[self.row_reps[i]][g]][self.col_reps[lam]]

    def cell(self, i: int, lam: int) -> int:
        """Mask of G_{i,λ}."""
        return to_mask(x for x, (_, r, c) in self.coords.items() if r == i and c == lam)

    def all_nonzero(self) -> bool:
        return all(p is not None for row in self.sandwich for p in row)

    def is_inverse(self) -> bool:
        rows_ok = all(sum(p is not None for p in row) == 1 for row in self.sandwich)
        cols_ok = all(sum(self.sandwich[lam][i] is not None for lam in range(len(self.cols))) == 1
                      for i in range(len(self.rows)))
        return rows_ok and cols_ok

    def reconstruct(self, s: FiniteSemigroup, below: int) -> bool:
        """Check (g;i,λ)(h;j,μ) = (g p_{λj} h; i, μ) or θ against the table of ``s``."""
        t = s.table
        for x, (g, i, lam) in self.coords.items():
            for y, (h, j, mu) in self.coords.items():
                p = self.sandwich[lam][j]
                xy = t[x][y]
                if p is None:
                    if not (below >> xy & 1) or self.j_class >> xy & 1:
                        return False
                else:
                    if self.coords.get(xy) != (t[t[g][p]][h], i, mu):
                        return False
        return True

    def as_dict(self, s: FiniteSemigroup) -> dict:
        name = s.names
        return {
            "group": s.labels(self.group),
            "identity": name[self.identity],
            "rows": [s.labels(r) for r in self.rows],
            "cols": [s.labels(c) for c in self.cols],
            "sandwich": [[None if p is None else name[p] for p in row] for row in self.sandwich],
            "coords": {name[x]: [name[g], i, lam] for x, (g, i, lam) in sorted(self.coords.items())},
        }


@dataclass
class PrincipalFactor:
    index: int
    j_class: int
    below: int  # S_{i+1}
    kind: FactorKind
    nilpotent: bool
    rees: ReesMatrix | None = None


@dataclass
class PrincipalSeries:
    """S = S_1 ⊃ ... ⊃ S_m ⊃ S_{m+1} = ∅, stored 0-based: ``chain[k]`` for k = 0..m."""

    semigroup: FiniteSemigroup
    chain: list[int]
    factors: list[PrincipalFactor] = field(default_factory=list)

    @property
    def classes(self) -> list[int]:
        return [f.j_class for f in self.factors]

    def factor_of(self, x: int) -> int:
        return next(k for k, f in enumerate(self.factors) if f.j_class >> x & 1)


def principal_series(s: FiniteSemigroup, tie_break: str = "lex",
                     greens: GreenClasses | None = None) -> PrincipalSeries:
    """Build the series bottom-up, each time adding a minimal remaining J-class.

    ``tie_break="lex"`` picks the class with the smallest least element;
    ``"reverse"`` picks the largest, giving a second linear extension.
    """
    if tie_break not in ("lex", "reverse"):
        raise ValueError(f"unknown tie-break {tie_break!r}")
    gr = greens or green_classes(s)
    remaining = list(gr.j_classes)
    ideal = 0
    stack = []
    while remaining:
        minimal = []
        for c in remaining:
            rep = next(bits(c))
            if gr.ideal_of[rep] & ~c & ~ideal == 0:
                minimal.append(c)
        pick = (min if tie_break == "lex" else max)(minimal, key=lambda m: m & -m)
        remaining.remove(pick)
        ideal |= pick
        stack.append(ideal)
    chain = stack[::-1] + [0]
    series = PrincipalSeries(s, chain)
    for k in range(len(chain) - 1):
        series.factors.append(classify_principal_factor(s, series, k, gr))
    return series


def factor_table(s: FiniteSemigroup, j_class: int, below: int) -> tuple[np.ndarray, list[int]]:
    """Table of the principal factor: the class, plus θ (last) when ``below`` is nonempty."""
    els = list(bits(j_class))
    pos = {x: i for i, x in enumerate(els)}
    z = len(els)
    size = z + (1 if below else 0)
    tab = np.full((size, size), z, dtype=np.int64)
    t = s.table
    for a in els:
        for b in els:
            p = t[a][b]
            tab[pos[a], pos[b]] = pos.get(p, z)
    if not below and (tab == z).any():
        raise PreconditionError("bottom J-class is not a subsemigroup")
    return tab, els


def classify_principal_factor(s: FiniteSemigroup, series: PrincipalSeries, k: int,
                              greens: GreenClasses | None = None) -> PrincipalFactor:
    j = series.chain[k] & ~series.chain[k + 1]
    below = series.chain[k + 1]
    t = s.table
    els = list(bits(j))
    inside = any(j >> t[a][b] & 1 for a in els for b in els)
    # a one-element kernel is its own zero, so it is the null semigroup {θ}
    if not inside or (not below and len(els) == 1 and s.zero == els[0]):
        return PrincipalFactor(k, j, below, FactorKind.NULL, True)
    kind = FactorKind.ZERO_SIMPLE if below else FactorKind.SIMPLE
    rees = rees_coordinatize(s, j, greens)
    tab, _ = factor_table(s, j, below)
    return PrincipalFactor(k, j, below, kind, is_acyclic_table(tab), rees)


def rees_coordinatize(s: FiniteSemigroup, j_class: int,
                      greens: GreenClasses | None = None) -> ReesMatrix:
    gr = greens or green_classes(s)
    t = s.table
    els = list(bits(j_class))
    idem = [x for x in els if t[x][x] == x]
    if not idem:
        raise PreconditionError(f"J-class {s.labels(j_class)} has no idempotent")
    e = idem[0]
    r_e, l_e = gr.r_class_of(e), gr.l_class_of(e)
    rows = sorted({gr.r_class_of(x) for x in els}, key=lambda m: (m != r_e, m & -m))
    cols = sorted({gr.l_class_of(x) for x in els}, key=lambda m: (m != l_e, m & -m))
    group = r_e & l_e
    row_reps = [next(bits(r & l_e)) if r != r_e else e for r in rows]
    col_reps = [next(bits(l & r_e)) if l != l_e else e for l in cols]
    coords = {}
    for x in els:
        i = rows.index(gr.r_class_of(x))
        lam = cols.index(gr.l_class_of(x))
        a, b = row_reps[i], col_reps[lam]
        g = next((g for g in bits(group) if t[t[a][g]][b] == x), None)
        if g is None:
            raise PreconditionError(f"cannot coordinatize {s.names[x]}")
        coords[x] = (g, i, lam)
    sandwich = []
    for b in col_reps:
        row = []
        for a in row_reps:
            p = t[b][a]
            row.append(p if group >> p & 1 else None)
        sandwich.append(row)
    return ReesMatrix(j_class, e, group, rows, cols, row_reps, col_reps, sandwich, coords)


class C0SConstraint(str, Enum):
    NILPOTENT = "nilpotent"
    UNION_OF_GROUPS = "union-of-groups"
    VIOLATES = "violates"


def check_c0s_pseudo_constraint(s: FiniteSemigroup, factor: PrincipalFactor) -> C0SConstraint:
    """Which branch of the regular-factor dichotomy a non-null factor falls in.

    VIOLATES certifies that the ambient semigroup is not pseudo-nilpotent.
    """
    if factor.kind == FactorKind.NULL:
        raise PreconditionError("null factors carry no Rees coordinates")
    if factor.nilpotent:
        return C0SConstraint.NILPOTENT
    rees = factor.rees
    if rees.all_nonzero() and group_nilpotency_class(s, rees.group) is not None:
        return C0SConstraint.UNION_OF_GROUPS
    return C0SConstraint.VIOLATES


def factor_semigroup(s: FiniteSemigroup, factor: PrincipalFactor) -> FiniteSemigroup:
    """The principal factor S_i/S_{i+1} as a standalone semigroup."""
    tab, els = factor_table(s, factor.j_class, factor.below)
    names = [s.names[x] for x in els]
    if factor.below:
        z = "theta"
        while z in names:
            z += "'"
        names.append(z)
    return FiniteSemigroup.from_table(tab.tolist(), names, validate=False)
