from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

import oracles as O
from conftest import semigroups, transformation_semigroup
from malcev.core import (AssociativityError, CapacityError, FiniteSemigroup, MalformedTableError,
                         PreconditionError, adjoin_identity, bits, closure, enumerate_ideals,
                         enumerate_subsemigroups, is_closed, is_ideal, rees_quotient, restrict,
                         to_mask, validate_associativity)


def fs(mask):
    return frozenset(bits(mask))


def test_non_associative_table_reports_smallest_triple():
    table = [[1, 0], [0, 0]]
    triple = validate_associativity(table)
    a, b, c = triple
    assert table[table[a][b]][c] != table[a][table[b][c]]
    with pytest.raises(AssociativityError) as e:
        FiniteSemigroup.from_table(table)
    assert e.value.triple == triple


@pytest.mark.parametrize("table, names", [
    ([[0, 1], [1]], None),
    ([[0, 2], [1, 1]], None),
    ([[0]], ["a", "b"]),
    ([[0, 0], [0, 0]], ["a", "a"]),
    ([], None),
])
def test_malformed_tables_are_rejected(table, names):
    with pytest.raises(MalformedTableError):
        FiniteSemigroup.from_table(table, names)


def test_identity_and_zero_detection(fixtures):
    m = fixtures["M0_22"]
    assert m.names[m.zero] == "theta"
    assert m.identity is None
    one = adjoin_identity(m)
    assert one.order == m.order + 1 and one.identity == m.order
    assert adjoin_identity(one) is one


@given(semigroups(), st.data())
def test_closure_matches_naive_fixpoint(s, data):
    seed = data.draw(st.sets(st.integers(0, s.order - 1), min_size=1))
    got = closure(s, to_mask(seed))
    assert fs(got) == O.naive_closure(s.table, seed)
    assert is_closed(s, got)


@given(semigroups())
def test_subsemigroups_match_subset_filter(s):
    got = {fs(m) for m in enumerate_subsemigroups(s)}
    assert got == O.naive_subsemigroups(s.table)


@given(semigroups())
def test_ideals_match_subset_filter(s):
    got = {fs(m) for m in enumerate_ideals(s)}
    assert got == set(O.naive_ideals(s.table, range(s.order)))
    assert all(is_ideal(s, m) for m in enumerate_ideals(s))


@given(semigroups(), st.data())
def test_ideals_of_subsemigroup_match_subset_filter(s, data):
    subs = enumerate_subsemigroups(s)
    t = data.draw(st.sampled_from(subs))
    got = {fs(m) for m in enumerate_ideals(s, t)}
    assert got == set(O.naive_ideals(s.table, fs(t)))


@given(semigroups(), st.data())
def test_rees_quotient_is_associative_and_collapses_the_ideal(s, data):
    ideal = data.draw(st.sampled_from(enumerate_ideals(s)))
    view = rees_quotient(s, ideal)
    q = view.semigroup
    assert validate_associativity(q.table) is None
    assert q.order == s.order - bin(ideal).count("1") + (1 if ideal else 0)
    if ideal:
        assert q.zero == view.zero_index
    for a in range(s.order):
        for b in range(s.order):
            ab = s.table[a][b]
            assert q.table[view.from_parent(a)][view.from_parent(b)] == view.from_parent(ab)


def test_rees_quotient_rejects_non_ideal(fixtures):
    s = fixtures["S5"]
    with pytest.raises(PreconditionError):
        rees_quotient(s, s.mask(["b"]))


def test_restrict_requires_closed_mask(fixtures):
    s = fixtures["S5"]
    full = restrict(s, s.full_mask)
    assert full.table == s.table
    with pytest.raises(PreconditionError):
        restrict(s, s.mask(["c", "e"]))  # ce = a


def test_subsemigroup_enumeration_respects_caps():
    s = transformation_semigroup([(1, 2, 0), (0, 0, 2)])
    with pytest.raises(CapacityError):
        enumerate_subsemigroups(s, max_order=s.order - 1)
    with pytest.raises(CapacityError):
        enumerate_subsemigroups(s, max_count=2)


def test_subsemigroup_count_of_t11_is_frozen(fixtures):
    # computed once by the naive subset filter in oracles.py and frozen here
    assert len(enumerate_subsemigroups(fixtures["T11"])) == 368
