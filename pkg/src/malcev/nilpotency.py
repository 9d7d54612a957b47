"""Mal'cev nilpotency and its weaker relatives, decided on the pair graph.

For elements x, y and multipliers w_1, w_2, ... the sequences
``λ_0 = x, ρ_0 = y, λ_{k+1} = λ_k w_{k+1} ρ_k, ρ_{k+1} = ρ_k w_{k+1} λ_k``
are walks in the directed *pair graph* whose vertices are ordered pairs and
whose edges are ``(a, b) --w--> (awb, bwa)``.  The diagonal is absorbing, so
a finite semigroup is nilpotent exactly when the off-diagonal part of this
graph is acyclic, and its class is one more than the longest off-diagonal
path.

Words are lists whose entries are element indices or ``None`` for the formal
identity of S^1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .core import FiniteSemigroup, PreconditionError, bits, closure, is_closed, to_mask

Word = list  # entries: int element index, or None for the formal identity


# -- replay -----------------------------------------------------------------

def step(s: FiniteSemigroup, a: int, b: int, w: int | None) -> tuple[int, int]:
    t = s.table
    if w is None:
        return t[a][b], t[b][a]
    return t[t[a][w]][b], t[t[b][w]][a]


def replay(s: FiniteSemigroup, x: int, y: int, word: Sequence[int | None]) -> list[tuple[int, int]]:
    """The pairs (λ_i, ρ_i) for i = 0..len(word)."""
    out = [(x, y)]
    for w in word:
        out.append(step(s, *out[-1], w))
    return out


@dataclass(frozen=True)
class CycleWitness:
    """λ/ρ data with (λ_t, ρ_t) = (λ_m, ρ_m) and λ_m != ρ_m."""

    x: int
    y: int
    word: tuple
    t: int
    m: int

    def check(self, s: FiniteSemigroup) -> bool:
        trace = replay(s, self.x, self.y, self.word)
        return (len(self.word) == self.m and 0 <= self.t < self.m
                and trace[self.t] == trace[self.m] and trace[self.m][0] != trace[self.m][1])

    def as_dict(self, s: FiniteSemigroup) -> dict:
        trace = replay(s, self.x, self.y, self.word)
        return {
            "x": s.names[self.x],
            "y": s.names[self.y],
            "word": [word_label(s, w) for w in self.word],
            "t": self.t,
            "m": self.m,
            "trace": [[s.names[a], s.names[b]] for a, b in trace],
        }


def word_label(s: FiniteSemigroup, w: int | None) -> str:
    return "1" if w is None else s.names[w]


# -- the pair graph ---------------------------------------------------------

@dataclass
class PairGraph:
    """Transitions of the pair graph over a (sub)semigroup given by a local table.

    ``succ[v, j]`` is the target of vertex ``v = a*k + b`` under multiplier
    column ``j`` (the last column is the formal identity when
    ``with_identity``), or -1 when the target is pruned (diagonal, or a
    component outside ``alive``).
    """

    k: int
    succ: np.ndarray
    valid: np.ndarray
    columns: list  # column -> multiplier (local index) or None
    elements: list  # local index -> parent index

    def vertex(self, a: int, b: int) -> int:
        return a * self.k + b

    def pair(self, v: int) -> tuple[int, int]:
        return divmod(int(v), self.k)


def local_table(s: FiniteSemigroup, mask: int) -> tuple[np.ndarray, list[int]]:
    els = list(bits(mask))
    if len(els) == s.order:
        return s.array, els
    idx = np.array(els, dtype=np.int64)
    pos = np.full(s.order, -1, dtype=np.int64)
    pos[idx] = np.arange(len(els))
    sub = pos[s.array[np.ix_(idx, idx)]]
    if (sub < 0).any():
        raise PreconditionError(f"{s.labels(mask)} is not closed")
    return sub, els


def build_pair_graph(tab: np.ndarray, alive: np.ndarray | None = None,
                     multipliers: Sequence[int] | None = None, with_identity: bool = True,
                     elements: list | None = None, prune: bool = True) -> PairGraph:
    """Pair graph on a local table.

    With ``prune`` (the default) edges into the diagonal or leaving ``alive``
    are dropped; without it every transition of the full graph is kept.
    """
    k = tab.shape[0]
    if alive is None:
        alive = np.ones(k, dtype=bool)
    if multipliers is None:
        multipliers = list(range(k))
    cols: list = list(multipliers) + ([None] if with_identity else [])
    targets = []
    for w in cols:
        lam = tab if w is None else tab[tab[:, w], :]
        rho = lam.T
        tgt = lam * k + rho
        if prune:
            dead = (lam == rho) | ~alive[lam] | ~alive[rho]
            tgt = np.where(dead, -1, tgt)
        targets.append(tgt.reshape(-1))
    succ = np.stack(targets, axis=1) if targets else np.zeros((k * k, 0), dtype=np.int64)
    a = np.repeat(np.arange(k), k)
    b = np.tile(np.arange(k), k)
    valid = alive[a] & alive[b] & (a != b) if prune else np.ones(k * k, dtype=bool)
    if elements is None:
        elements = list(range(k))
    return PairGraph(k, succ, valid, cols, elements)


def peel(g: PairGraph) -> tuple[np.ndarray, np.ndarray]:
    """Repeatedly strip vertices with no surviving successor.

    Returns ``(height, cyclic)``: ``height[v]`` is the number of edges on the
    longest walk from ``v`` (-1 for stripped-never vertices) and ``cyclic``
    marks the vertices that can reach a cycle.
    """
    succ = g.succ
    remaining = g.valid.copy()
    height = np.full(len(remaining), -1, dtype=np.int64)
    has_edge = succ >= 0
    safe = np.where(has_edge, succ, 0)
    r = 0
    while True:
        live_succ = (remaining[safe] & has_edge).any(axis=1)
        done = remaining & ~live_succ
        if not done.any():
            break
        height[done] = r
        remaining &= ~done
        r += 1
    return height, remaining


def is_acyclic_table(tab: np.ndarray, alive: np.ndarray | None = None) -> bool:
    """Fast boolean nilpotency test for a local table (pairs restricted to ``alive``)."""
    g = build_pair_graph(tab, alive)
    _, cyclic = peel(g)
    return not cyclic.any()


# -- shortest lassos --------------------------------------------------------

class LassoFinder:
    """Shortest lexicographically least lassos in a pruned pair graph.

    A lasso from ``v`` is a word whose walk ``v = v_0, ..., v_m`` ends at an
    earlier vertex ``v_t``.  Columns are tried in order (elements ascending,
    then the formal identity), so the word found is the least one among the
    shortest.
    """

    def __init__(self, g: PairGraph):
        self.g = g
        n = g.succ.shape[0]
        rows, cols = np.nonzero(g.succ >= 0)
        tg = g.succ[rows, cols]
        keep = g.valid[rows] & g.valid[tg]
        adj = csr_matrix((np.ones(int(keep.sum())), (rows[keep], tg[keep])), shape=(n, n))
        d = shortest_path(adj, unweighted=True, directed=True)
        self.dist = d
        girth = np.full(n, np.inf)
        for v in range(n):
            if not g.valid[v]:
                continue
            for x in g.succ[v]:
                if x >= 0 and g.valid[x]:
                    girth[v] = min(girth[v], 1 + d[x, v])
        self.girth = girth
        # shortest lasso from v: walk to some u, then a closed walk through u
        self.best = np.min(d + girth[None, :], axis=1)

    def shortest(self, start: int) -> tuple[list[int], int] | None:
        """Column word and repeat index of the least shortest lasso from ``start``."""
        m = self.best[start]
        if not np.isfinite(m):
            return None
        m = int(m)
        g, dist, best = self.g, self.dist, self.best
        path = [start]
        word: list[int] = []

        def dfs() -> bool:
            j = len(word)
            c = path[-1]
            left = m - j
            if left == 0:
                return c in path[:-1]
            for col, x in enumerate(g.succ[c]):
                if x < 0 or not g.valid[x]:
                    continue
                rest = left - 1
                if rest == 0:
                    if x not in path:
                        continue
                else:
                    lb = min(best[x], min(dist[x, p] for p in path))
                    if lb > rest:
                        continue
                path.append(int(x))
                word.append(col)
                if dfs():
                    return True
                path.pop()
                word.pop()
            return False

        if not dfs():
            return None
        t = path.index(path[-1])
        return word, t


# -- Mal'cev nilpotency -----------------------------------------------------

@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    nilpotency_class: int | None = None
    witness: CycleWitness | None = None


def _graph(s: FiniteSemigroup) -> PairGraph:
    return build_pair_graph(s.array)


def _column_word(g: PairGraph, cols: list[int]) -> tuple:
    return tuple(None if g.columns[c] is None else g.elements[g.columns[c]] for c in cols)


def _word_key(word) -> tuple:
    # the formal identity sorts after every element
    return tuple(float("inf") if w is None else w for w in word)


def is_nilpotent(s: FiniteSemigroup, mask: int | None = None) -> bool:
    """Boolean Mal'cev nilpotency of ``s`` or of its subsemigroup ``mask``."""
    if mask is None:
        return is_acyclic_table(s.array)
    tab, _ = local_table(s, mask)
    return is_acyclic_table(tab)


def is_malcev_nilpotent(s: FiniteSemigroup) -> NilpotencyReport:
    g = _graph(s)
    height, cyclic = peel(g)
    if not cyclic.any():
        cls = 0 if s.order == 1 else 1 + int(height.max())
        return NilpotencyReport(True, cls)
    finder = LassoFinder(g)
    best = None
    for v in np.flatnonzero(cyclic):
        if not np.isfinite(finder.girth[v]):
            continue
        found = finder.shortest(int(v))
        if found is None:
            continue
        cols, t = found
        x, y = g.pair(v)
        word = _column_word(g, cols)
        key = (len(word), _word_key(word), x, y)
        if best is None or key < best[0]:
            best = (key, CycleWitness(x, y, word, t, len(word)))
    return NilpotencyReport(False, None, best[1])


def nilpotency_class(s: FiniteSemigroup) -> int:
    rep = is_malcev_nilpotent(s)
    if not rep.nilpotent:
        raise PreconditionError("nilpotency class is only defined for nilpotent semigroups")
    return rep.nilpotency_class


# -- Neumann-Taylor ---------------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    holds: bool
    witness: CycleWitness | None = None
    detail: dict | None = None


def is_neumann_taylor(s: FiniteSemigroup) -> PropertyReport:
    """NT fails iff some (ab, ba) reaches an off-diagonal cycle.

    A leading multiplier 1 turns (a, b) into (ab, ba); taking a or b to be the
    formal identity lands on the diagonal, so only a, b in S matter.
    """
    g = _graph(s)
    _, cyclic = peel(g)
    n = s.order
    t = s.table
    starts = sorted({(a, b) for a in range(n) for b in range(n)
                     if cyclic[g.vertex(t[a][b], t[b][a])]})
    if not starts:
        return PropertyReport(True)
    finder = LassoFinder(g)
    best = None
    for a, b in starts:
        found = finder.shortest(g.vertex(t[a][b], t[b][a]))
        cols, rep = found
        word = (None,) + _column_word(g, cols)
        key = (len(word), _word_key(word), a, b)
        if best is None or key < best[0]:
            best = (key, CycleWitness(a, b, word, rep + 1, len(word)))
    return PropertyReport(False, best[1])


# -- deterministic-word variants --------------------------------------------

def _trajectory(s: FiniteSemigroup, a: int, b: int, first: list, nxt, state0):
    """Follow a deterministic multiplier sequence until the diagonal or a repeat.

    ``first`` is a fixed prefix of multipliers; afterwards ``nxt(state)``
    returns ``(multiplier, next_state)``.  Returns None on absorption, else a
    CycleWitness.
    """
    pair = (a, b)
    word = []
    for w in first:
        if pair[0] == pair[1]:
            return None
        pair = step(s, *pair, w)
        word.append(w)
    seen = {}
    trace = [pair]
    state = state0
    while pair[0] != pair[1]:
        key = (pair, state)
        if key in seen:
            t = len(first) + seen[key]
            return CycleWitness(a, b, tuple(word), t, len(word))
        seen[key] = len(trace) - 1
        w, state = nxt(state)
        pair = step(s, *pair, w)
        word.append(w)
        trace.append(pair)
    return None


def is_positively_engel(s: FiniteSemigroup) -> PropertyReport:
    """PE via the deterministic word 1, 1, c, c^2, ... for every (a, b, c)."""
    n = s.order
    t = s.table
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            for c in [None] + list(range(n)):
                if c is None:
                    wit = _trajectory(s, a, b, [None, None], lambda st: (None, st), None)
                else:
                    # state: the power of c to use next
                    wit = _trajectory(s, a, b, [None, None], lambda p, c=c: (p, t[p][c]), c)
                if wit is not None:
                    return PropertyReport(False, wit, {"c": c})
    return PropertyReport(True)


def is_weakly_malcev_nilpotent(s: FiniteSemigroup) -> PropertyReport:
    """WMN via the alternating word c1, c2, c1, c2, ... for every (a, b, c1, c2)."""
    n = s.order
    opts = [None] + list(range(n))
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            for c1 in opts:
                for c2 in opts:
                    cs = (c1, c2)
                    wit = _trajectory(s, a, b, [], lambda par: (cs[par], 1 - par), 0)
                    if wit is not None:
                        return PropertyReport(False, wit, {"c1": c1, "c2": c2})
    return PropertyReport(True)


# -- classical group nilpotency ---------------------------------------------

def group_structure(s: FiniteSemigroup, h: int) -> tuple[int, dict[int, int]]:
    """Identity and inverse map of the subgroup ``h``; raises if ``h`` is not a group."""
    if h == 0 or not is_closed(s, h):
        raise PreconditionError("not a subgroup: the set is not closed under multiplication")
    t = s.table
    els = list(bits(h))
    ids = [e for e in els if all(t[e][x] == x == t[x][e] for x in els)]
    if not ids:
        raise PreconditionError("not a subgroup: no identity element")
    e = ids[0]
    inv = {}
    for x in els:
        # x^k = e for some k when x lies in a group; then x^(k-1) inverts x
        p, prev = x, e
        for _ in range(len(els)):
            if p == e:
                inv[x] = prev
                break
            prev, p = p, t[p][x]
        else:
            raise PreconditionError(f"not a subgroup: {s.names[x]} has no inverse")
        if t[x][inv[x]] != e:
            raise PreconditionError(f"not a subgroup: {s.names[x]} has no inverse")
    return e, inv


def group_nilpotency_class(s: FiniteSemigroup, h: int | None = None) -> int | None:
    """Class of the subgroup ``h`` via the lower central series, or None if not nilpotent."""
    if h is None:
        h = s.full_mask
    e, inv = group_structure(s, h)
    t = s.table
    whole = list(bits(h))
    current = h
    cls = 0
    while current != 1 << e:
        comms = {t[t[inv[g]][inv[x]]][t[g][x]] for g in bits(current) for x in whole}
        nxt = closure(s, to_mask(comms))
        if nxt == current:
            return None
        current = nxt
        cls += 1
    return cls
