"""Exhaustive minimum-index search and its orbit pruning."""

import pytest

from cayley_index.cayley import cayley_index_of, connection_set, parse_connection_set
from cayley_index.homs import automorphism_group
from cayley_index.search import (
    SearchBudget,
    class_permutations,
    inverse_classes,
    mask_to_set,
    min_cayley_index,
    orbit_representatives,
    verify_upper_bound,
)
from cayley_index.syntax import parse_group


def test_inverse_classes_partition():
    G = parse_group("dic:ab:6@3")
    classes = inverse_classes(G)
    flat = sorted(e for c in classes for e in c)
    assert flat == list(range(1, G.order))
    for c in classes:
        assert set(c) == {c[0], G.inv[c[0]]}


def _brute_orbits(G):
    """Orbits of Aut(G) x complement on class masks, from the full Aut(G)."""
    classes = inverse_classes(G)
    k = len(classes)
    perms = class_permutations(G, classes, automorphism_group(G))
    full = (1 << k) - 1
    orbit_of = {}
    for m in range(1 << k):
        if m in orbit_of:
            continue
        images = set()
        for p in perms:
            img = sum(1 << p[i] for i in range(k) if m >> i & 1)
            images.update((img, full ^ img))
        for x in images:
            orbit_of[x] = m
    return orbit_of


@pytest.mark.parametrize("spec", ["ab:2,2", "ab:4,2", "q8", "dih:8", "ab:3,3", "a4"])
def test_orbit_representatives_one_per_orbit(spec):
    G = parse_group(spec)
    classes = inverse_classes(G)
    from cayley_index.homs import automorphism_generators

    gens = automorphism_generators(automorphism_group(G))
    reps = orbit_representatives(len(classes), class_permutations(G, classes, gens))
    orbit_of = _brute_orbits(G)
    assert sorted(reps) == sorted(set(orbit_of.values()))
    assert all(r == min(m for m, o in orbit_of.items() if o == orbit_of[r]) for r in reps)


@pytest.mark.parametrize("spec", ["ab:2,2,2", "dih:8", "q8", "a4"])
def test_index_constant_on_orbits(spec):
    """The pruning is sound: every mask in an orbit has the same index."""
    G = parse_group(spec)
    classes = inverse_classes(G)
    orbit_of = _brute_orbits(G)
    index_of_orbit = {}
    for m, o in orbit_of.items():
        idx = cayley_index_of(mask_to_set(G, classes, m)).cayley_index
        assert index_of_orbit.setdefault(o, idx) == idx


def test_complement_has_same_index():
    G = parse_group("ab:3,3")
    S = parse_connection_set(G, "z1^pm1, z2^pm1")
    assert cayley_index_of(S).cayley_index == cayley_index_of(S.complement()).cayley_index


@pytest.mark.parametrize("spec", ["ab:2", "ab:3", "ab:4", "ab:2,2", "ab:5", "ab:6", "dih:6",
                                  "ab:7", "ab:8", "ab:4,2", "ab:2,2,2", "dih:8", "q8"])
def test_prune_and_no_prune_agree(spec):
    G = parse_group(spec)
    a = min_cayley_index(G)
    b = min_cayley_index(G, prune=False)
    assert a.exhaustive and b.exhaustive
    assert a.min_index == b.min_index
    assert cayley_index_of(a.witness).cayley_index == a.min_index
    assert b.candidates_examined >= a.candidates_examined


def test_witness_is_sparser_side():
    G = parse_group("ab:3,3")
    res = min_cayley_index(G)
    assert 2 * len(res.witness) <= G.order - 1


def test_budget_truncation_is_reported():
    G = parse_group("ab:2,2,2,2")
    res = min_cayley_index(G, SearchBudget(max_candidates=3), prune=False)
    assert not res.exhaustive
    assert res.candidates_examined <= 3


def test_class_count_limit_is_reported():
    G = parse_group("ab:3,3")
    res = min_cayley_index(G, SearchBudget(max_classes=2))
    assert not res.exhaustive


def test_budget_env(monkeypatch):
    monkeypatch.setenv("CAYLEY_INDEX_MAX_CANDIDATES", "5")
    assert SearchBudget().max_candidates == 5
    with pytest.raises(ValueError):
        SearchBudget(max_candidates=0)


def test_parallel_matches_serial():
    G = parse_group("ab:4,2,2")
    serial = min_cayley_index(G)
    parallel = min_cayley_index(G, SearchBudget(parallel_width=2))
    assert (serial.min_index, parallel.exhaustive) == (parallel.min_index, True)


def test_progress_callback():
    calls = []
    min_cayley_index(parse_group("ab:2,2,2"), SearchBudget(progress_every=1),
                     progress=lambda n, best: calls.append((n, best)))
    assert calls and calls[-1][1] == 6


def test_verify_upper_bound():
    G = parse_group("ab:5")
    S = parse_connection_set(G, "z1^pm1")
    assert verify_upper_bound(G, S, 2)
    assert not verify_upper_bound(G, S, 1)
    with pytest.raises(ValueError):
        verify_upper_bound(parse_group("ab:5"), S, 2)
    assert len(connection_set(G, [])) == 0
