"""Cayley graphs, indices and cartesian products of Cayley graphs."""

import pytest

from cayley_index.cayley import (
    NotRelativelyPrime,
    cayley_graph,
    cayley_index_of,
    connection_set,
    is_grr,
    left_multiplication,
    left_regular_embedding_check,
    parse_connection_set,
    product_connection_set,
    product_mrr,
)
from cayley_index.graphs import is_connected
from cayley_index.syntax import parse_group


def test_cycle_as_cayley_graph():
    G = parse_group("ab:7")
    S = parse_connection_set(G, "z1^pm1")
    g = cayley_graph(S)
    assert g.degrees() == [2] * 7
    r = cayley_index_of(S)
    assert r.aut_order == 14
    assert r.cayley_index == 2
    assert r.stabilizer_of_identity_order == 2


def test_complete_graph_index():
    G = parse_group("ab:2,2")
    S = connection_set(G, [1, 2, 3])
    assert cayley_index_of(S).cayley_index == 6


def test_left_multiplication_is_automorphism():
    G = parse_group("dic:ab:6@3")
    S = parse_connection_set(G, "z1^pm1, x^pm1")
    g = cayley_graph(S)
    for h in G.elements():
        assert g.is_automorphism(left_multiplication(G, h))
    assert left_regular_embedding_check(S)


def test_index_is_integer_multiple():
    G = parse_group("a4")
    S = parse_connection_set(G, "(1 2 3)^pm1, (1 2)(3 4)")
    r = cayley_index_of(S)
    assert r.aut_order == r.cayley_index * G.order


def test_empty_connection_set():
    G = parse_group("ab:3")
    S = connection_set(G, [])
    assert not is_connected(cayley_graph(S))
    assert cayley_index_of(S).cayley_index == 2


def test_product_mrr_multiplies_indices():
    G1 = parse_group("dih:6")
    S1 = parse_connection_set(G1, "a, a*b")
    S2 = parse_connection_set(parse_group("ab:2"), "z1")
    r1 = cayley_index_of(S1)
    assert r1.cayley_index == 2
    r = product_mrr(S1, S2)
    assert r.cayley_index == r1.cayley_index * cayley_index_of(S2).cayley_index
    assert r.graph.n == 12


def test_product_mrr_rejects_shared_prime_factor():
    # Cay(D6, {b, b^-1, a}) is the triangular prism C3 x K2
    S1 = parse_connection_set(parse_group("dih:6"), "b^pm1, a")
    S2 = parse_connection_set(parse_group("ab:2"), "z1")
    with pytest.raises(NotRelativelyPrime):
        product_mrr(S1, S2)


def test_product_mrr_rejects_shared_factor():
    G = parse_group("ab:2")
    S = parse_connection_set(G, "z1")
    with pytest.raises(NotRelativelyPrime):
        product_mrr(S, S)


def test_product_connection_set_degree():
    G1, G2 = parse_group("ab:3"), parse_group("ab:2")
    S = product_connection_set(parse_connection_set(G1, "z1^pm1"),
                               parse_connection_set(G2, "z1"))
    assert len(S) == 3


def test_z2_to_the_fifth_has_a_grr():
    from cayley_index.catalog import load_catalog, verify_entry

    entry = next(e for e in load_catalog() if e.group_spec == "ab:2,2,2,2,2")
    cert = verify_entry(entry)
    assert cert.passed and cert.computed_index == 1
    G = parse_group(entry.group_spec)
    assert is_grr(connection_set(G, cert.witness_elements))
