from __future__ import annotations

import pytest
from hypothesis import given

import oracles as O
from conftest import semigroups
from malcev.core import bits, is_ideal
from malcev.pseudo import is_pseudo_nilpotent
from malcev.structure import (C0SConstraint, FactorKind, check_c0s_pseudo_constraint,
                              factor_semigroup, green_classes, principal_series)


def two_sided(t, x):
    n = len(t)
    one = [None] + list(range(n))
    return frozenset(O.mul(t, O.mul(t, a, x), b) for a in one for b in one)


@given(semigroups())
def test_green_classes_match_principal_ideals(s):
    gr = green_classes(s)
    t = s.table
    right = {x: frozenset([x] + [t[x][y] for y in range(s.order)]) for x in range(s.order)}
    left = {x: frozenset([x] + [t[y][x] for y in range(s.order)]) for x in range(s.order)}
    for x in range(s.order):
        for y in range(s.order):
            assert (gr.j_class_of(x) == gr.j_class_of(y)) == (two_sided(t, x) == two_sided(t, y))
            assert (gr.r_class_of(x) == gr.r_class_of(y)) == (right[x] == right[y])
            assert (gr.l_class_of(x) == gr.l_class_of(y)) == (left[x] == left[y])
            assert gr.j_leq(x, y) == (x in two_sided(t, y))


@pytest.mark.parametrize("tie_break", ["lex", "reverse"])
@given(s=semigroups())
def test_series_is_a_maximal_chain_of_ideals(tie_break, s):
    series = principal_series(s, tie_break)
    chain = series.chain
    ideals = {frozenset(i) for i in O.naive_ideals(s.table, range(s.order))}
    assert chain[0] == s.full_mask and chain[-1] == 0
    for k in range(len(chain) - 1):
        assert is_ideal(s, chain[k])
        big, small = frozenset(bits(chain[k])), frozenset(bits(chain[k + 1]))
        assert small < big
        assert not any(small < i < big for i in ideals)
    assert sorted(series.classes) == sorted(green_classes(s).j_classes)


@given(semigroups())
def test_non_null_factors_reconstruct_from_coordinates(s):
    for f in principal_series(s).factors:
        if f.kind is FactorKind.NULL:
            q = factor_semigroup(s, f)
            z = q.zero
            assert all(q.table[a][b] == z for a in range(q.order) for b in range(q.order))
            continue
        assert f.rees.reconstruct(s, f.below)
        assert f.kind is (FactorKind.ZERO_SIMPLE if f.below else FactorKind.SIMPLE)
        assert all(any(p is not None for p in row) for row in f.rees.sandwich)


@given(semigroups(max_order=7))
def test_pseudo_nilpotent_semigroups_respect_factor_dichotomy(s):
    if not is_pseudo_nilpotent(s, witness=False).holds:
        return
    for f in principal_series(s).factors:
        if f.kind is not FactorKind.NULL:
            assert check_c0s_pseudo_constraint(s, f) is not C0SConstraint.VIOLATES


def test_m0_22_sandwich_has_one_zero_entry(fixtures):
    s = fixtures["M0_22"]
    top = principal_series(s).factors[0]
    assert top.kind is FactorKind.ZERO_SIMPLE
    assert s.labels(top.j_class) == ["e11", "e12", "e21", "e22"]
    p = top.rees.sandwich
    assert len(p) == 2 and len(p[0]) == 2
    assert sum(v is None for row in p for v in row) == 1
    assert check_c0s_pseudo_constraint(s, top) is C0SConstraint.VIOLATES
    assert not top.nilpotent


def test_s4_series_and_kinds(fixtures):
    s = fixtures["S4"]
    series = principal_series(s)
    kinds = [(s.labels(f.j_class), f.kind) for f in series.factors]
    assert kinds == [(["c"], FactorKind.NULL), (["b"], FactorKind.ZERO_SIMPLE),
                     (["a"], FactorKind.NULL), (["theta"], FactorKind.NULL)]


def test_unknown_tie_break_is_rejected(fixtures):
    with pytest.raises(ValueError):
        principal_series(fixtures["S5"], "random")
