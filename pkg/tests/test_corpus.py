from __future__ import annotations

import pytest

import oracles as O
from malcev import corpus
from malcev.core import CapacityError, validate_associativity
from malcev.formats import ParseError, parse_text
from malcev.nilpotency import group_structure
from malcev.stems import analyze


@pytest.mark.parametrize("key", corpus.fixture_keys())
def test_data_file_matches_embedded_table(key):
    fx = corpus.get_fixture(key)
    assert corpus.load_fixture_file(key) == fx.semigroup
    assert validate_associativity(fx.semigroup.table) is None
    assert fx.expected["associative"] is True
    assert fx.provenance


def test_checksum_catches_transcription_error():
    text = corpus.fixture_text("S5")
    lines = text.splitlines()
    row = next(i for i, line in enumerate(lines) if line.startswith("a b a a e"))
    lines[row] = lines[row].replace("a b a a e", "a b a a d", 1)
    with pytest.raises(ParseError, match="checksum"):
        parse_text("\n".join(lines), verify_checksums=True)


def test_s5_row_b():
    s = corpus.get_fixture("S5").semigroup
    b = s.index("b")
    assert [s.names[v] for v in s.table[b]] == ["a", "b", "a", "a", "e"]


def test_unknown_key_lists_known_keys():
    with pytest.raises(KeyError) as e:
        corpus.get_fixture("nope")
    assert all(k in str(e.value) for k in corpus.fixture_keys())


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_family_is_a_band_of_expected_order(n):
    s = corpus.chained_band_family(n)
    assert s.order == 4 * n + 6
    assert s.is_band()
    assert validate_associativity(s.table) is None


def test_family_filled_cells_are_frozen():
    # products left open by the construction rules, all set to θ
    counts = {n: len(corpus.chained_band_family(n, with_defaults=True)[1]) for n in (1, 2, 3, 4)}
    assert counts == {1: 8, 2: 0, 3: 18, 4: 54}


def associative_completions(n: int) -> list[tuple]:
    """Backtrack over the open cells of the family, each restricted by the ideal and f-product facts."""
    s, open_cells = corpus.chained_band_family(n, with_defaults=True)
    idx = {x: i for i, x in enumerate(s.names)}
    t = [list(r) for r in s.table]
    ideals = [{idx["theta"], idx[f"a{k}"], idx[f"b{k}"]} for k in range(n + 2)]
    fs = {idx[f"f{k}"]: k for k in range(n + 1)}
    cells = [(idx[a], idx[b]) for a, b in open_cells]
    domain = {}
    for r, c in cells:
        d = set(range(s.order))
        for y in ideals:
            if r in y or c in y:
                d &= y
        if r in fs and c in fs:
            for k in (fs[r], fs[c]):
                if k >= 1:
                    d &= {idx["theta"], idx[f"l{k}"]}
        domain[r, c] = sorted(d)
        t[r][c] = -1

    def consistent():
        for a in range(s.order):
            for b in range(s.order):
                if t[a][b] < 0:
                    continue
                for c in range(s.order):
                    if t[b][c] < 0:
                        continue
                    lhs, rhs = t[t[a][b]][c], t[a][t[b][c]]
                    if lhs >= 0 and rhs >= 0 and lhs != rhs:
                        return False
        return True

    found = []

    def fill(k):
        if k == len(cells):
            found.append(tuple(s.names[t[r][c]] for r, c in cells))
            return
        r, c = cells[k]
        for v in domain[r, c]:
            t[r][c] = v
            if consistent():
                fill(k + 1)
        t[r][c] = -1

    fill(0)
    return found


@pytest.mark.parametrize("n", [1, 3])
def test_family_open_cells_are_forced(n):
    found = associative_completions(n)
    assert len(found) == 1 and set(found[0]) == {"theta"}


def test_family_rejects_n_zero():
    with pytest.raises(ValueError):
        corpus.chained_band_family(0)


def test_family_n2_connects_only_neighbouring_roots():
    a = analyze(corpus.chained_band_family(2), check_pseudo=False)
    s = a.semigroup
    idx = {frozenset(s.labels(a.j(r))): int(s.labels(a.j(r))[0][1:]) for r in a.roots}
    pairs = {tuple(sorted((idx[frozenset(s.labels(a.j(r1)))], idx[frozenset(s.labels(a.j(r2)))])))
             for _, r1, r2 in a.connections}
    assert pairs == {(0, 1), (1, 2), (2, 3)}


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("up_to", ["iso", "iso_and_anti"])
def test_census_matches_brute_force(order, up_to):
    got = corpus.enumerate_small(order, up_to)
    assert len(got) == O.brute_census(order, anti=up_to == "iso_and_anti")
    forms = {corpus.canonical_form(s.table, up_to == "iso_and_anti") for s in got}
    assert len(forms) == len(got)


def test_census_order_four_counts():
    assert len(corpus.enumerate_small(4, "iso", allow_order4=True)) == 188
    assert len(corpus.enumerate_small(4, "iso_and_anti", allow_order4=True)) == 126


def test_census_capacity():
    with pytest.raises(CapacityError):
        corpus.enumerate_small(4)
    with pytest.raises(CapacityError):
        corpus.enumerate_small(5, allow_order4=True)


@pytest.mark.parametrize("name, order", [("C2", 2), ("C6", 6), ("C2xC2", 4), ("S3", 6), ("D4", 8),
                                         ("Q8", 8), ("A4", 12), ("D6", 12), ("C2xS3", 12)])
def test_small_groups_are_groups(name, order):
    g = corpus.small_groups()[name]
    assert g.order == order
    e, inv = group_structure(g, g.full_mask)
    assert g.identity == e and len(inv) == order
