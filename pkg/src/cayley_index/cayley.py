"""Connection sets, Cayley graphs and Cayley indices.

Vertex ``g`` of ``Cay(G, S)`` is the element index ``g`` itself, adjacent to
``g*s`` for each ``s`` in ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .autgraph import AutResult, automorphisms
from .graphs import Graph, cartesian_product, is_connected, relatively_prime
from .groups import Group, direct_product
from .permgroup import orbit as perm_orbit


class ConnectionSetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConnectionSet:
    group: Group
    mask: int

    def __post_init__(self):
        G = self.group
        if self.mask & 1:
            raise ConnectionSetError("connection set contains the identity")
        for s in self.elements:
            if not self.mask >> G.inv[s] & 1:
                raise ConnectionSetError(
                    f"connection set is not inverse-closed: {G.describe(s)} without its inverse")

    @property
    def elements(self) -> list[int]:
        out, m = [], self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ConnectionSet) and other.group is self.group
                and other.mask == self.mask)

    def __hash__(self) -> int:
        return hash((id(self.group), self.mask))

    def complement(self) -> "ConnectionSet":
        full = (1 << self.group.order) - 2
        return ConnectionSet(self.group, full & ~self.mask)

    def describe(self) -> str:
        return "{" + ", ".join(self.group.describe(s) for s in self.elements) + "}"


def connection_set(G: Group, elems: Iterable[int], close: bool = False) -> ConnectionSet:
    mask = 0
    for s in elems:
        if not 0 <= s < G.order:
            raise ConnectionSetError(f"element {s} is not in {G.label}")
        if s == 0:
            raise ConnectionSetError("connection set contains the identity")
        mask |= 1 << s
        if close:
            mask |= 1 << G.inv[s]
    return ConnectionSet(G, mask)


def parse_connection_set(G: Group, text: str, close: bool = False) -> ConnectionSet:
    """Connection set from the text syntax; errors carry the item's offset."""
    from .syntax import ParseError, parse_connection_items

    items = parse_connection_items(G, text)
    mask = 0
    for g, at in items:
        if g == 0:
            raise ParseError("connection set contains the identity", at)
        mask |= 1 << g
        if close:
            mask |= 1 << G.inv[g]
    for g, at in items:
        if not mask >> G.inv[g] & 1:
            raise ParseError(
                f"connection set is not inverse-closed: missing inverse of {G.describe(g)}", at)
    return ConnectionSet(G, mask)


def cayley_graph(S: ConnectionSet) -> Graph:
    G = S.group
    elems = S.elements
    rows = []
    for g in G.elements():
        row = G.mul[g]
        r = 0
        for s in elems:
            r |= 1 << row[s]
        rows.append(r)
    return Graph(G.order, tuple(rows))


def left_multiplication(G: Group, g: int) -> tuple[int, ...]:
    return tuple(G.mul[g][h] for h in G.elements())


def left_regular_embedding_check(S: ConnectionSet) -> bool:
    """Every left multiplication h -> gh is an automorphism of Cay(G, S)."""
    graph = cayley_graph(S)
    return all(graph.is_automorphism(left_multiplication(S.group, g))
               for g in S.group.elements())


@dataclass
class IndexReport:
    graph: Graph
    aut_order: int
    group_order: int
    cayley_index: int
    stabilizer_of_identity_order: int
    connection_set: ConnectionSet | None = None
    aut: AutResult | None = None


def index_of_graph(graph: Graph, group_order: int, S: ConnectionSet | None = None) -> IndexReport:
    aut = automorphisms(graph)
    if aut.order % group_order:
        raise RuntimeError(f"|G| = {group_order} does not divide |Aut| = {aut.order}")
    stab = aut.order // len(perm_orbit(0, aut.generators))
    return IndexReport(graph, aut.order, group_order, aut.order // group_order, stab, S, aut)


def cayley_index_of(S: ConnectionSet) -> IndexReport:
    return index_of_graph(cayley_graph(S), S.group.order, S)


def is_grr(S: ConnectionSet) -> bool:
    return cayley_index_of(S).cayley_index == 1


def product_connection_set(S1: ConnectionSet, S2: ConnectionSet,
                           G: Group | None = None) -> ConnectionSet:
    """S1 x {1} u {1} x S2 inside G1 x G2 (built when G is omitted)."""
    G1, G2 = S1.group, S2.group
    G = G or direct_product(G1, G2)
    n2 = G2.order
    elems = [s * n2 for s in S1.elements] + list(S2.elements)
    return connection_set(G, elems)


class NotRelativelyPrime(ValueError):
    pass


def product_mrr(S1: ConnectionSet, S2: ConnectionSet, G: Group | None = None) -> IndexReport:
    """Index report for Cay(G1, S1) □ Cay(G2, S2) viewed as a Cayley graph
    on G1 x G2.  Requires connected, relatively prime factors; the product
    index must equal the product of the factor indices."""
    g1, g2 = cayley_graph(S1), cayley_graph(S2)
    if not (is_connected(g1) and is_connected(g2)):
        raise NotRelativelyPrime("product_mrr needs connected Cayley graphs")
    if not relatively_prime(g1, g2):
        raise NotRelativelyPrime("the Cayley graphs share a prime factor")
    S = product_connection_set(S1, S2, G)
    graph = cayley_graph(S)
    if graph != cartesian_product(g1, g2):
        raise RuntimeError("product connection set does not realize the cartesian product")
    report = index_of_graph(graph, S.group.order, S)
    i1 = cayley_index_of(S1).cayley_index
    i2 = cayley_index_of(S2).cayley_index
    if report.cayley_index != i1 * i2:
        raise RuntimeError(f"product index {report.cayley_index} != {i1} * {i2}")
    return report
