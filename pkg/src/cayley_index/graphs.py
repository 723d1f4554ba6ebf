"""Simple undirected graphs with bitset rows, cartesian products and prime
factorization with respect to the cartesian product."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

MAX_VERTICES = 1024


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """``adj[v]`` is an int bitmask of the neighbours of ``v``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graphs need at least one vertex")
        if self.n > MAX_VERTICES:
            raise GraphError(f"{self.n} vertices exceeds capacity {MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency has wrong length")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @cached_property
    def nbrs(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(_bits(r)) for r in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count() if hasattr(int, "bit_count") else bin(self.adj[v]).count("1")

    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.nbrs]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.nbrs[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.nbrs) // 2

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def induced(self, verts: Sequence[int]) -> "Graph":
        pos = {v: i for i, v in enumerate(verts)}
        return Graph.from_edges(len(verts), ((pos[u], pos[v]) for u in verts
                                             for v in self.nbrs[u] if v in pos and pos[u] < pos[v]))

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        adj = self.adj
        for u in range(self.n):
            img = 0
            for v in self.nbrs[u]:
                img |= 1 << perm[v]
            if img != adj[perm[u]]:
                return False
        return True


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def complete(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def empty(n: int) -> Graph:
    return Graph(n, (0,) * n)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~r & ~(1 << v) for v, r in enumerate(g.adj)))


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Vertex (u, v) is encoded as ``u * g2.n + v``."""
    n1, n2 = g1.n, g2.n
    if n1 * n2 > MAX_VERTICES:
        raise GraphError(f"product on {n1 * n2} vertices exceeds capacity {MAX_VERTICES}")
    rows = []
    for u in range(n1):
        for v in range(n2):
            r = g2.adj[v] << (u * n2)
            for w in g1.nbrs[u]:
                r |= 1 << (w * n2 + v)
            rows.append(r)
    return Graph(n1 * n2, tuple(rows))


def product_of(factors: Sequence[Graph]) -> Graph:
    out = Graph(1, (0,))
    for f in factors:
        out = cartesian_product(out, f)
    return out


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        for u in comp:
            for v in g.nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def distances(g: Graph) -> list[list[int]]:
    out = []
    for s in range(g.n):
        d = [-1] * g.n
        d[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in g.nbrs[u]:
                if d[v] < 0:
                    d[v] = d[u] + 1
                    q.append(v)
        out.append(d)
    return out


# -- prime factorization -------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    factors: tuple[Graph, ...]
    coordinates: tuple[tuple[int, ...], ...]

    def vertex_map(self) -> list[int]:
        """Input vertex -> row-major index in ``product_of(factors)``."""
        sizes = [f.n for f in self.factors]
        out = []
        for coord in self.coordinates:
            idx = 0
            for c, s in zip(coord, sizes):
                idx = idx * s + c
            out.append(idx)
        return out


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


def product_relation_classes(g: Graph) -> list[list[tuple[int, int]]]:
    """Edge classes of the product relation: the transitive closure of the
    Djokovic-Winkler relation together with the relation joining two edges at
    a common vertex that span no square."""
    edges = g.edges()
    m = len(edges)
    index = {e: i for i, e in enumerate(edges)}
    uf = _UnionFind(m)
    d = distances(g)
    for i in range(m):
        x, y = edges[i]
        dx, dy = d[x], d[y]
        for j in range(i + 1, m):
            u, v = edges[j]
            if dx[u] + dy[v] != dx[v] + dy[u]:
                uf.union(i, j)
    adj = g.adj
    for x in range(g.n):
        nb = g.nbrs[x]
        for a, b in itertools.combinations(nb, 2):
            if adj[a] >> b & 1:
                continue
            common = adj[a] & adj[b] & ~(1 << x)
            if not common:
                uf.union(index[_key(x, a)], index[_key(x, b)])
    classes: dict[int, list[tuple[int, int]]] = {}
    for i, e in enumerate(edges):
        classes.setdefault(uf.find(i), []).append(e)
    return sorted(classes.values())


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def prime_factorization(g: Graph) -> Factorization:
    """Prime factors of a connected graph and the coordinate of each vertex.

    Factors are ordered by the smallest edge of their class; the coordinate
    map is verified to be an isomorphism onto the product before returning.
    """
    if not is_connected(g):
        raise GraphError("prime factorization needs a connected graph")
    if g.n == 1:
        return Factorization((), ((),) * 1)
    classes = product_relation_classes(g)
    factors = []
    coord_cols = []
    for cls in classes:
        in_cls = {_key(u, v) for u, v in cls}
        # layer through vertex 0
        layer = [0]
        seen = {0}
        for u in layer:
            for v in g.nbrs[u]:
                if v not in seen and _key(u, v) in in_cls:
                    seen.add(v)
                    layer.append(v)
        layer.sort()
        pos = {v: i for i, v in enumerate(layer)}
        factors.append(g.induced(layer))
        # each component of g minus this class meets the layer exactly once
        rest = Graph.from_edges(g.n, (e for e in g.edges() if e not in in_cls))
        col = [-1] * g.n
        for comp in components(rest):
            hits = [v for v in comp if v in pos]
            if len(hits) != 1:
                raise RuntimeError("product relation did not yield a product coloring")
            for v in comp:
                col[v] = pos[hits[0]]
        coord_cols.append(col)
    coords = tuple(tuple(col[v] for col in coord_cols) for v in range(g.n))
    fz = Factorization(tuple(factors), coords)
    _verify_factorization(g, fz)
    return fz


def _verify_factorization(g: Graph, fz: Factorization) -> None:
    if math.prod(f.n for f in fz.factors) != g.n:
        raise RuntimeError("factor sizes do not multiply to the vertex count")
    vmap = fz.vertex_map()
    if sorted(vmap) != list(range(g.n)):
        raise RuntimeError("coordinates are not a bijection")
    if g.relabel(vmap) != product_of(fz.factors):
        raise RuntimeError("coordinates do not give an isomorphism onto the product")


def is_prime(g: Graph) -> bool:
    return g.n > 1 and is_connected(g) and len(product_relation_classes(g)) == 1


def relatively_prime(g1: Graph, g2: Graph) -> bool:
    """True iff the connected graphs share no isomorphic prime factor."""
    from .autgraph import canonical_form

    if not (is_connected(g1) and is_connected(g2)):
        raise GraphError("relative primality is defined for connected graphs")
    f1 = {canonical_form(f) for f in prime_factorization(g1).factors}
    f2 = {canonical_form(f) for f in prime_factorization(g2).factors}
    return not (f1 & f2)


def brute_force_prime_factors(g: Graph) -> list[Graph]:
    """Prime factors found by trying every split into an induced layer and a
    complementary factor, compared by canonical form.  Independent of the
    product relation; intended for at most 16 vertices."""
    from .autgraph import canonical_form

    if not is_connected(g):
        raise GraphError("prime factorization needs a connected graph")
    if g.n == 1:
        return []
    split = _brute_split(g, canonical_form)
    if split is None:
        return [canonical_form(g)]
    a, b = split
    return sorted(brute_force_prime_factors(a) + brute_force_prime_factors(b),
                  key=lambda f: (f.n, f.adj))


def _brute_split(g: Graph, canon):
    n, m = g.n, g.edge_count
    target = canon(g)
    for a in range(2, n):
        if n % a:
            continue
        b = n // a
        if b < 2:
            continue
        tried_a = set()
        for rest in itertools.combinations(range(1, n), a - 1):
            verts = (0,) + rest
            sub = g.induced(verts)
            if not is_connected(sub):
                continue
            ma = sub.edge_count
            # m = b*|E(A)| + a*|E(B)|
            if (m - b * ma) < a * (b - 1) or (m - b * ma) % a:
                continue
            ca = canon(sub)
            if ca in tried_a:
                continue
            tried_a.add(ca)
            mb = (m - b * ma) // a
            for other in _candidate_cofactors(g, b, mb, canon):
                if canon(cartesian_product(ca, other)) == target:
                    return ca, other
    return None


def _candidate_cofactors(g: Graph, b: int, mb: int, canon):
    seen = set()
    for rest in itertools.combinations(range(1, g.n), b - 1):
        sub = g.induced((0,) + rest)
        if sub.edge_count != mb or not is_connected(sub):
            continue
        c = canon(sub)
        if c not in seen:
            seen.add(c)
            yield c


# -- text formats --------------------------------------------------------------

def to_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = [n]
    elif n <= 258047:
        head = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    else:
        raise GraphError("graph6 encoding supports at most 258047 vertices")
    bits = [g.adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = [int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6)]
    return "".join(chr(63 + x) for x in head + body)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = [ord(ch) - 63 for ch in s]
    if not data or any(x < 0 or x > 63 for x in data):
        raise GraphError("invalid graph6 string")
    if data[0] == 63:
        if len(data) < 4 or data[1] == 63:
            raise GraphError("graph6 strings over 258047 vertices are not supported")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) != need:
        raise GraphError(f"graph6 body has {len(data)} bytes, expected {need}")
    bits = [(x >> (5 - k)) & 1 for x in data for k in range(6)]
    edges = []
    t = 0
    for j in range(1, n):
        for i in range(j):
            if bits[t]:
                edges.append((i, j))
            t += 1
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty edge list")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        u, v = ln.split()
        edges.append((int(u), int(v)))
    return Graph.from_edges(n, edges)
