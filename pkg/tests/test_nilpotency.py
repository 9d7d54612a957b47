from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given

import oracles as O
from conftest import semigroups
from malcev import corpus
from malcev.core import FiniteSemigroup, PreconditionError, enumerate_subsemigroups, restrict
from malcev.nilpotency import (group_nilpotency_class, is_malcev_nilpotent, is_nilpotent,
                               is_neumann_taylor, is_positively_engel, is_weakly_malcev_nilpotent,
                               nilpotency_class, replay)


@given(semigroups())
def test_class_matches_layered_enumeration(s):
    r = is_malcev_nilpotent(s)
    assert r.nilpotency_class == O.layered_class(s.table)
    assert r.nilpotent == is_nilpotent(s)


@given(semigroups())
def test_failure_carries_replayable_cycle(s):
    r = is_malcev_nilpotent(s)
    if r.nilpotent:
        assert r.witness is None
        return
    w = r.witness
    assert w.check(s)
    trace = replay(s, w.x, w.y, w.word)
    assert trace[w.t] == trace[w.m] and trace[w.m][0] != trace[w.m][1]


@given(semigroups())
def test_variants_match_direct_simulation(s):
    assert is_neumann_taylor(s).holds == O.neumann_taylor(s.table)
    assert is_positively_engel(s).holds == O.positively_engel(s.table)
    assert is_weakly_malcev_nilpotent(s).holds == O.weakly_malcev(s.table)


@given(semigroups())
def test_strength_chain(s):
    mn = is_malcev_nilpotent(s).nilpotent
    nt = is_neumann_taylor(s).holds
    pe = is_positively_engel(s).holds
    wmn = is_weakly_malcev_nilpotent(s).holds
    assert not mn or (nt and pe and wmn)
    assert not nt or pe


@given(semigroups())
def test_variant_witnesses_replay(s):
    for rep in (is_neumann_taylor(s), is_positively_engel(s), is_weakly_malcev_nilpotent(s)):
        if not rep.holds:
            assert rep.witness.check(s)


@given(semigroups(max_order=6))
def test_nilpotency_is_inherited(s):
    if not is_nilpotent(s):
        return
    for t in enumerate_subsemigroups(s):
        assert is_nilpotent(restrict(s, t))


def test_class_distribution_on_small_sweep(small_sweep):
    # frozen from the layered-set oracle over all 30 semigroups of order <= 3
    got = Counter(is_malcev_nilpotent(s).nilpotency_class for s in small_sweep)
    assert got == Counter({1: 15, None: 12, 2: 2, 0: 1})


def test_nilpotency_class_requires_nilpotent(fixtures):
    assert nilpotency_class(fixtures["S4"]) == 1
    with pytest.raises(PreconditionError):
        nilpotency_class(fixtures["S5"])


def test_s5_witness_is_least_lasso(fixtures):
    s = fixtures["S5"]
    w = is_malcev_nilpotent(s).witness
    assert w.m == len(w.word)
    assert w.check(s)


@pytest.mark.parametrize("name, cls", [("C2", 1), ("C6", 1), ("C2xC2", 1), ("D4", 2), ("Q8", 2),
                                       ("S3", None), ("A4", None), ("D6", None), ("C2xS3", None)])
def test_group_class_matches_malcev_class(name, cls):
    g = corpus.small_groups()[name]
    assert group_nilpotency_class(g) == cls
    assert is_malcev_nilpotent(g).nilpotency_class == cls


def test_group_class_rejects_non_groups(fixtures):
    with pytest.raises(PreconditionError):
        group_nilpotency_class(fixtures["S5"])


def test_null_and_trivial_classes():
    null = FiniteSemigroup.from_table([[0, 0, 0]] * 3, ["theta", "u", "v"])
    assert is_malcev_nilpotent(null).nilpotency_class == 1
    assert is_malcev_nilpotent(FiniteSemigroup.from_table([[0]])).nilpotency_class == 0
