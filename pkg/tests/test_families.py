"""Hamiltonian 2-groups, dicyclic constructions and the dicyclic enumeration."""

import pytest

from cayley_index.cayley import (
    NotRelativelyPrime,
    cayley_graph,
    cayley_index_of,
    connection_set,
    parse_connection_set,
)
from cayley_index.families import (
    SUITABLE_CONDITIONS,
    EnumerationLog,
    abelian_invariant_factors,
    cor44_bound,
    dicyclic_parts,
    enumerate_dicyclic_targets,
    family_groups,
    family_member,
    hamiltonian,
    is_suitable_pair,
    lemma52_graph,
    lemma53_graph,
    prime_mrr_search,
    quasi_automorphisms,
    verify_lower_bound_8,
    x_coset_part,
)
from cayley_index.graphs import is_prime
from cayley_index.groups import BudgetExceeded, GroupError
from cayley_index.homs import groups_isomorphic
from cayley_index.catalog import load_catalog
from cayley_index.syntax import parse_element, parse_group


# -- quasi-automorphisms ---------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_hamiltonian_quasi_count(n):
    G = hamiltonian(n)
    qs = quasi_automorphisms(G)
    assert len(qs) == 8
    assert len(set(qs)) == 8
    for q in qs:
        assert q[0] == 0
        assert all(q[g] in (g, G.inv[g]) for g in G.elements())


@pytest.mark.parametrize("spec, count", [("ab:3", 2), ("dic:ab:6@3", 2), ("dic:ab:8@4", 2),
                                         ("dic:ab:10@5", 2), ("ab:2,2", 1)])
def test_quasi_count_other_groups(spec, count):
    assert len(quasi_automorphisms(parse_group(spec))) == count


def test_quasi_order_limit():
    with pytest.raises(BudgetExceeded):
        quasi_automorphisms(hamiltonian(4), max_order=32)


def test_lower_bound_8():
    G = hamiltonian(2)
    S = parse_connection_set(G, "i^pm1, j^pm1, z1, z2")
    assert verify_lower_bound_8(G, S)
    assert cayley_index_of(S).stabilizer_of_identity_order >= 8
    Z = parse_group("ab:3")
    assert not verify_lower_bound_8(Z, parse_connection_set(Z, "z1^pm1"))


def test_quasi_automorphisms_are_graph_automorphisms():
    """Each quasi-automorphism preserves every Cayley graph of Q8."""
    G = hamiltonian(0)
    qs = quasi_automorphisms(G)
    for text in ["i^pm1", "i^pm1, j^pm1", "-1, i^pm1"]:
        g = cayley_graph(parse_connection_set(G, text))
        assert all(g.is_automorphism(q) for q in qs)


# -- suitable pairs --------------------------------------------------------------

def test_suitable_pair_example():
    D = parse_group("dic:ab:12@6")
    z1 = D.element("z1")
    assert is_suitable_pair(D, z1, D.power(z1, -2))


# For each condition, a pair in Dic(Z12, z1^6, x) violating that condition alone.
SINGLE_FAILURES = [("z1", "z1"), ("1", "z1"), ("z1", "z1^2"), ("z1", "z1^5")]


@pytest.mark.parametrize("which", range(4))
def test_each_condition_fails_independently(which):
    D = parse_group("dic:ab:12@6")
    _, _, y = dicyclic_parts(D)
    a1, a2 = (parse_element(D, t) for t in SINGLE_FAILURES[which])
    results = [cond(D, y, a1, a2) for cond in SUITABLE_CONDITIONS]
    assert results == [i != which for i in range(4)]
    assert not is_suitable_pair(D, a1, a2)


def test_suitable_pair_is_conjunction():
    D = parse_group("dic:ab:8,2@(4,0)")
    _, _, y = dicyclic_parts(D)
    for a1 in range(D.order // 2):
        for a2 in range(D.order // 2):
            expect = all(c(D, y, a1, a2) for c in SUITABLE_CONDITIONS)
            assert is_suitable_pair(D, a1, a2) == expect


def test_suitable_pair_rejects_non_abelian_part():
    D = parse_group("dic:ab:6@3")
    with pytest.raises(GroupError):
        is_suitable_pair(D, D.element("x"), 1)
    with pytest.raises(GroupError):
        dicyclic_parts(parse_group("q8"))


def test_z10_pair_is_not_suitable():
    # y * a2^2 = z1^5 * z1^-4 = z1 = a1 breaks the third condition
    D = parse_group("dic:ab:10@5")
    z1 = D.element("z1")
    _, _, y = dicyclic_parts(D)
    a2 = D.power(z1, -2)
    assert [c(D, y, z1, a2) for c in SUITABLE_CONDITIONS] == [True, True, False, True]


def test_x_coset_part_is_inverse_closed():
    D = parse_group("dic:ab:8,2@(0,1)")
    z1 = D.element("z1")
    part = set(x_coset_part(D, z1, D.power(z1, -2)))
    assert len(part) == 6
    assert {D.inv[p] for p in part} == part


# -- the two index-2 families ----------------------------------------------------------

@pytest.mark.parametrize("n", [6, 7, 8, 9])
def test_cyclic_family_index_two(n):
    r = cayley_index_of(lemma52_graph(n))
    assert r.cayley_index == 2


def test_cyclic_family_n5_has_index_four():
    """The cyclic construction degenerates at n = 5; c(Dic(Z10)) is 4."""
    r = cayley_index_of(lemma52_graph(5))
    assert r.cayley_index == 4


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cyclic_by_two_family_index_two(n):
    assert cayley_index_of(lemma53_graph(n)).cayley_index == 2


def test_family_lower_limits():
    with pytest.raises(ValueError):
        lemma52_graph(4)
    with pytest.raises(ValueError):
        lemma53_graph(2)


def test_family_groups_lookup():
    fams = {(f, n, k) for f, n, k, _ in family_groups(48)}
    assert ("cyclic", 6, 1) in fams
    assert ("cyclic-by-2", 6, 0) in fams
    assert ("cyclic-by-2", 3, 1) in fams
    assert all(G.order == 48 for *_, G in family_groups(48))


# -- products with K2 -------------------------------------------------------------------

def test_product_with_k2_doubles_group_keeps_index():
    S = lemma53_graph(3)
    r = cor44_bound(S.group, S)
    assert r.cayley_index == 2
    assert r.graph.n == 2 * S.group.order
    assert groups_isomorphic(r.connection_set.group, parse_group("dic:ab:6,2,2@(0,1,0)"))


def test_product_with_k2_rejects_exceptions_and_disconnected():
    G = parse_group("ab:4,2")
    with pytest.raises(NotRelativelyPrime):
        cor44_bound(G, parse_connection_set(G, "z1^pm1, z2"))
    D = parse_group("dic:ab:6@3")
    with pytest.raises(NotRelativelyPrime):
        cor44_bound(D, parse_connection_set(D, "z1^pm1"))
    with pytest.raises(ValueError):
        cor44_bound(D, lemma53_graph(3))


def test_product_with_k2_cannot_be_iterated_directly():
    S = lemma53_graph(3)
    once = cor44_bound(S.group, S).connection_set
    with pytest.raises(NotRelativelyPrime):
        cor44_bound(once.group, once)


def test_prime_mrr_search():
    G = family_member("cyclic-by-2", 3, 1).group
    S = prime_mrr_search(G, 2)
    assert S is not None and S.group is G
    assert is_prime(cayley_graph(S))
    assert cayley_index_of(S).cayley_index == 2
    assert prime_mrr_search(G, 2, tries=0) is None


def test_product_with_k2_rejects_shared_k2_factor():
    G = parse_group("dih:6")
    with pytest.raises(NotRelativelyPrime):
        cor44_bound(G, parse_connection_set(G, "b^pm1, a"))


@pytest.mark.parametrize("family, n, k", [
    ("cyclic", 6, 0), ("cyclic", 6, 1), ("cyclic", 7, 1), ("cyclic", 8, 1),
    ("cyclic-by-2", 3, 0), ("cyclic-by-2", 3, 1), ("cyclic-by-2", 3, 2), ("cyclic-by-2", 4, 1),
    ("cyclic-by-2", 5, 1), ("cyclic-by-2", 4, 2), ("cyclic", 6, 2), ("cyclic", 16, 0),
    ("cyclic-by-2", 8, 1), ("cyclic-by-2", 16, 0),
])
def test_family_member_spot_checks(family, n, k):
    m = family_member(family, n, k)
    assert m.report.cayley_index == 2
    expected = {g for f, nn, kk, g in family_groups(m.group.order) if (f, nn, kk) == (family, n, k)}
    assert len(expected) == 1
    assert groups_isomorphic(m.group, expected.pop())


# -- enumeration ------------------------------------------------------------------------

@pytest.mark.parametrize("m, count", [(1, 1), (8, 3), (16, 5), (36, 4), (48, 5), (32, 7)])
def test_abelian_invariant_factor_counts(m, count):
    facs = abelian_invariant_factors(m)
    assert len(facs) == count
    for f in facs:
        assert all(f[i + 1] and f[i] % f[i + 1] == 0 for i in range(len(f) - 1))


def test_empty_connection_set_is_fine():
    G = parse_group("ab:2")
    assert len(connection_set(G, [])) == 0


@pytest.fixture(scope="module")
def enumeration():
    log = EnumerationLog()
    return enumerate_dicyclic_targets(log_to=log), log


def test_enumeration_survivors_are_distinct(enumeration):
    targets, _ = enumeration
    for i, a in enumerate(targets):
        for b in targets[i + 1:]:
            assert not (a.group.order == b.group.order and groups_isomorphic(a.group, b.group))


def test_enumeration_covers_dicyclic_rows_plus_one(enumeration):
    """Every dicyclic catalog row survives; the one extra survivor is the catalog's
    enumeration entry, isomorphic to (row 4) x Z2."""
    targets, _ = enumeration
    rows = [e for e in load_catalog() if e.id.startswith("table4.")]
    extra = [e for e in load_catalog() if e.id.startswith("enumeration.")]
    assert len(rows) == 15 and len(extra) == 1

    def matches(entry):
        G = parse_group(entry.group_spec)
        return [t for t in targets if t.group.order == G.order and groups_isomorphic(t.group, G)]

    assert all(len(matches(e)) == 1 for e in rows + extra)
    assert len(targets) == 16


def test_enumeration_log_explains_drops(enumeration):
    targets, log = enumeration
    assert len(log.considered) == len(targets) + len(log.dropped)
    reasons = " ".join(log.dropped.values())
    for word in ("abelian", "Q8xZ2", "cyclic family", "cyclic-by-2 family"):
        assert word in reasons
