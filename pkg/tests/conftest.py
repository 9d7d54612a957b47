from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from malcev import corpus  # noqa: E402
from malcev.core import (FiniteSemigroup, closure, enumerate_ideals, enumerate_subsemigroups,
                         rees_quotient, restrict)  # noqa: E402

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


def transformation_semigroup(gens: list[tuple[int, ...]]) -> FiniteSemigroup:
    """Semigroup generated by maps on {0..k-1}, composed left to right."""
    elems = list(dict.fromkeys(gens))
    index = {g: i for i, g in enumerate(elems)}
    i = 0
    while i < len(elems):
        for g in list(elems):
            for a, b in ((elems[i], g), (g, elems[i])):
                c = tuple(b[x] for x in a)
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
        i += 1
    table = [[index[tuple(b[x] for x in a)] for b in elems] for a in elems]
    names = ["".join(map(str, e)) for e in elems]
    return FiniteSemigroup.from_table(table, names)


@lru_cache(maxsize=None)
def _pool() -> tuple[FiniteSemigroup, ...]:
    """Order-4 census plus every subsemigroup of the small fixtures."""
    out = list(corpus.enumerate_small(4, "iso", allow_order4=True))
    for key in ("S5", "T5", "T6", "R8", "M0_22"):
        fx = corpus.get_fixture(key).semigroup
        out.extend(restrict(fx, m) for m in enumerate_subsemigroups(fx) if bin(m).count("1") > 2)
    return tuple(out)


@st.composite
def transformations(draw, degree: int = 3, max_gens: int = 3, max_order: int = 8):
    k = draw(st.integers(2, degree))
    maps = st.tuples(*[st.integers(0, k - 1)] * k)
    gens = draw(st.lists(maps, min_size=1, max_size=max_gens))
    s = transformation_semigroup(gens)
    if s.order > max_order:
        s = transformation_semigroup(gens[:1])
    return s


@st.composite
def semigroups(draw, max_order: int = 8):
    """Small semigroups from transformations or a fixed pool, optionally with an ideal collapsed."""
    pool = st.sampled_from([p for p in _pool() if p.order <= max_order])
    s = draw(st.one_of(transformations(max_order=max_order), pool))
    if s.order > max_order:
        s = restrict(s, closure(s, 1))
    if draw(st.booleans()) and s.order > 1:
        ideals = [i for i in enumerate_ideals(s) if i]
        s = rees_quotient(s, draw(st.sampled_from(ideals))).semigroup
    return s


@pytest.fixture(scope="session")
def small_sweep() -> list[FiniteSemigroup]:
    return [s for n in (1, 2, 3) for s in corpus.enumerate_small(n, "iso")]


@pytest.fixture(scope="session")
def fixtures() -> dict[str, FiniteSemigroup]:
    return {k: corpus.get_fixture(k).semigroup for k in corpus.fixture_keys()}
