"""Deciding pseudo-nilpotency.

A semigroup S fails to be pseudo-nilpotent when some walk of the pair graph,
started at x, y with multipliers w_1..w_m, repeats an off-diagonal pair
outside an ideal I of T = <x, y, w_1, ..., w_m> while visiting a pair that
generates a nilpotent subsemigroup of T/I.  Cut the walk at such a *bad* pair:
what remains is a walk from a bad pair into a cycle of the pair graph over
T \\ I.  Conversely such a walk, closed up with its cycle, is itself a
violation for T' = the subsemigroup generated by its letters and I' = I ∩ T'
(the generated subsemigroup of a pair does not change, and I' is an ideal of
T').  So the search runs over subsemigroups T and their ideals I, asking
whether a bad pair reaches a cycle, instead of over unbounded words.

Only off-diagonal pairs need following: once λ_i = ρ_i every later pair is
diagonal, so a diagonal pair never precedes a repetition with λ_m ≠ ρ_m.

A formal identity multiplier adds nothing to the generated subsemigroup; an
identity element of S is an ordinary generator.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import (DEFAULT_MAX_ORDER, FiniteSemigroup, bits, closure, enumerate_ideals,
                   enumerate_subsemigroups, is_ideal, to_mask)
from .nilpotency import (LassoFinder, _word_key, build_pair_graph, local_table, peel, replay,
                         word_label)


@dataclass(frozen=True)
class PseudoWitness:
    x: int
    y: int
    word: tuple
    subsemigroup: int
    ideal: int
    t: int
    m: int
    bad_index: int = 0

    def failures(self, s: FiniteSemigroup) -> list[str]:
        """Clauses of the witness that do not hold when replayed through the table."""
        out = []
        trace = replay(s, self.x, self.y, self.word)
        if len(self.word) != self.m or not 0 <= self.t < self.m:
            return ["repeat indices out of range"]
        lt, rt = trace[self.t]
        lm, rm = trace[self.m]
        if (lt, rt) != (lm, rm):
            out.append("pair at t differs from pair at m")
        if lm == rm:
            out.append("repeated pair is on the diagonal")
        if self.ideal >> lm & 1 or self.ideal >> rm & 1:
            out.append("repeated pair meets the ideal")
        gens = to_mask([self.x, self.y] + [w for w in self.word if w is not None])
        if closure(s, gens) != self.subsemigroup:
            out.append("subsemigroup is not generated by x, y and the word")
        if not is_ideal(s, self.ideal, self.subsemigroup):
            out.append("ideal is not an ideal of the subsemigroup")
        a, b = trace[self.bad_index]
        if not quotient_pair_nilpotent(s, a, b, self.ideal):
            out.append("pair at the bad index generates a non-nilpotent subsemigroup of T/I")
        return out

    def check(self, s: FiniteSemigroup) -> bool:
        return not self.failures(s)

    def non_edge(self, s: FiniteSemigroup) -> tuple[int, int]:
        return replay(s, self.x, self.y, self.word)[self.bad_index]

    def as_dict(self, s: FiniteSemigroup) -> dict:
        trace = replay(s, self.x, self.y, self.word)
        return {
            "x": s.names[self.x],
            "y": s.names[self.y],
            "word": [word_label(s, w) for w in self.word],
            "subsemigroup": s.labels(self.subsemigroup),
            "ideal": s.labels(self.ideal),
            "t": self.t,
            "m": self.m,
            "bad_index": self.bad_index,
            "trace": [[s.names[a], s.names[b]] for a, b in trace],
        }


@dataclass
class PseudoResult:
    holds: bool
    witness: PseudoWitness | None = None
    subsemigroups: int = 0
    ideals: int = 0


def quotient_pair_nilpotent(s: FiniteSemigroup, a: int, b: int, ideal: int) -> bool:
    """Whether <a, b> is nilpotent in T/I (only <a, b> ∩ I matters)."""
    u = closure(s, 1 << a | 1 << b)
    return _quotient_nilpotent(s, u, u & ideal)


def _quotient_nilpotent(s: FiniteSemigroup, u: int, j: int) -> bool:
    tab, els = local_table(s, u)
    alive = np.array([not j >> e & 1 for e in els], dtype=bool)
    _, cyclic = peel(build_pair_graph(tab, alive))
    return not cyclic.any()


# (local table bytes, order) -> True when some ideal yields a violation
_VERDICTS: dict[tuple[bytes, int], bool] = {}
_VERDICT_LIMIT = 200_000


@dataclass
class _Search:
    s: FiniteSemigroup
    closures: dict = field(default_factory=dict)
    quotient_nil: dict = field(default_factory=dict)

    def closure(self, seed: int) -> int:
        r = self.closures.get(seed)
        if r is None:
            r = self.closures[seed] = closure(self.s, seed)
        return r

    def bad(self, a: int, b: int, ideal: int) -> bool:
        u = self.closure(1 << a | 1 << b)
        key = (u, u & ideal)
        r = self.quotient_nil.get(key)
        if r is None:
            r = self.quotient_nil[key] = _quotient_nilpotent(self.s, u, u & ideal)
        return r

    def examine(self, t: int, want_witness: bool):
        """(violated, ideals examined, best witness candidate) for the subsemigroup ``t``."""
        s = self.s
        tab, els = local_table(s, t)
        k = len(els)
        key = (tab.tobytes(), k)
        if not want_witness and key in _VERDICTS:
            return _VERDICTS[key], 0, None
        full = build_pair_graph(tab)
        _, cyclic0 = peel(full)
        if not cyclic0.any():
            # a nilpotent T has nilpotent quotients, so no ideal can help
            _remember(key, False)
            return False, 0, None
        violated = False
        best = None
        count = 0
        for ideal in enumerate_ideals(s, t):
            if ideal == t:
                continue
            count += 1
            alive = np.array([not ideal >> e & 1 for e in els], dtype=bool)
            g = full if ideal == 0 else build_pair_graph(tab, alive)
            _, cyclic = peel(g) if ideal else (None, cyclic0)
            starts = [v for v in np.flatnonzero(cyclic)
                      if self.bad(els[v // k], els[v % k], ideal)]
            if not starts:
                continue
            violated = True
            if not want_witness:
                break
            cand = _least_lasso(s, g, els, starts, t, ideal)
            if best is None or cand[0] < best[0]:
                best = cand
        _remember(key, violated)
        return violated, count, best


def _remember(key, value):
    if len(_VERDICTS) >= _VERDICT_LIMIT:
        _VERDICTS.clear()
    _VERDICTS[key] = value


def _least_lasso(s, g, els, starts, t, ideal):
    finder = LassoFinder(g)
    m = min(finder.best[v] for v in starts)
    best = None
    for v in starts:
        if finder.best[v] != m:
            continue
        cols, rep = finder.shortest(int(v))
        word = tuple(None if g.columns[c] is None else els[g.columns[c]] for c in cols)
        a, b = els[v // g.k], els[v % g.k]
        key = (len(word), _word_key(word), a, b)
        if best is None or key < best[0]:
            best = (key, a, b, word, rep)
    key, a, b, word, rep = best
    gens = to_mask([a, b] + [w for w in word if w is not None])
    sub = closure(s, gens)
    # the first ideal in size order whose trace on the witness' subsemigroup is this one
    return key, PseudoWitness(a, b, word, sub, ideal & sub, rep, len(word), 0)


def is_pseudo_nilpotent(s: FiniteSemigroup, witness: bool = True,
                        max_order: int = DEFAULT_MAX_ORDER,
                        max_subsemigroups: int | None = None,
                        threads: int = 1) -> PseudoResult:
    """Decide pseudo-nilpotency; on failure return the least witness.

    Witnesses are compared by word length, then word (element indices, with
    the formal identity after every element), then the starting pair.  With ``witness=False``
    the search stops at the first violating subsemigroup.
    """
    subs = enumerate_subsemigroups(s, max_order=max_order, max_count=max_subsemigroups)
    search = _Search(s)
    n_ideals = 0
    best = None
    if threads > 1 and witness:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda t: _Search(s).examine(t, True), subs))
    else:
        results = []
        for t in subs:
            r = search.examine(t, witness)
            results.append(r)
            if r[0] and not witness:
                break
    violated = False
    for v, c, cand in results:
        n_ideals += c
        violated |= v
        if cand is not None and (best is None or cand[0] < best[0]):
            best = cand
    if not violated:
        return PseudoResult(True, None, len(subs), n_ideals)
    return PseudoResult(False, best[1] if best else None, len(subs), n_ideals)


def clear_cache() -> None:
    _VERDICTS.clear()
