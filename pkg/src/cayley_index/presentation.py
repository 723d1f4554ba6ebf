"""Finitely presented groups realized by Todd-Coxeter coset enumeration.

Enumeration is over the trivial subgroup, so the completed coset table is the
right regular representation of the group.  Words are lists of signed 1-based
generator indices (``-2`` is the inverse of the second generator).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .groups import Group, GroupError, _table_group
from .syntax import parse_presentation_text

DEFAULT_MAX_COSETS = 4096
MAX_GENERATORS = 8


class CosetOverflow(RuntimeError):
    """The enumeration needed more cosets than allowed."""


def free_reduce(word) -> list[int]:
    out: list[int] = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return out


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.generators)
        if not 1 <= k <= MAX_GENERATORS:
            raise GroupError(f"presentations need 1..{MAX_GENERATORS} generators, got {k}")
        for r in self.relators:
            if not r:
                raise GroupError("relators must be nonempty words")
            if any(g == 0 or abs(g) > k for g in r):
                raise GroupError(f"relator {r} uses an undeclared generator")

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        gens, rels = parse_presentation_text(text)
        return cls(tuple(gens), tuple(tuple(r) for r in rels))


class _CosetTable:
    def __init__(self, ngens: int, limit: int):
        self.ncols = 2 * ngens
        self.limit = limit
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]

    @staticmethod
    def col(g: int) -> int:
        return 2 * (g - 1) if g > 0 else 2 * (-g - 1) + 1

    @staticmethod
    def inv_col(c: int) -> int:
        return c ^ 1

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if len(self.table) >= self.limit:
            raise CosetOverflow(f"coset table exceeded {self.limit} cosets")
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def scan(self, c: int, word: list[int], fill: bool) -> None:
        T = self.table
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and T[f][word[i]] >= 0:
                f = T[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and T[b][word[j] ^ 1] >= 0:
                b = T[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                T[f][word[i]] = b
                T[b][word[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, word[i])

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        T = self.table
        queue: list[int] = []
        self._merge(a, b, queue)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            for x in range(self.ncols):
                f = T[e][x]
                if f < 0:
                    continue
                T[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if T[e1][x] >= 0:
                    self._merge(f1, T[e1][x], queue)
                elif T[f1][x ^ 1] >= 0:
                    self._merge(e1, T[f1][x ^ 1], queue)
                else:
                    T[e1][x] = f1
                    T[f1][x ^ 1] = e1

    def compact(self, position: int) -> int:
        """Drop dead cosets; returns the new index of ``position``."""
        live = [c for c in range(len(self.table)) if self.live(c)]
        new = {c: i for i, c in enumerate(live)}
        self.table = [[new[v] if v >= 0 else -1 for v in self.table[c]] for c in live]
        self.parent = list(range(len(live)))
        return sum(1 for c in live if c < position)


def coset_enumerate(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> Group:
    """Regular representation of the group presented by P.

    HLT strategy: cosets are processed in creation order, each scanned and
    filled under every relator in declaration order.  When the table hits
    ``max_cosets`` a lookahead pass (scanning without defining) and a compaction
    are tried before giving up with :class:`CosetOverflow`.
    """
    ct = _CosetTable(P.generator_count, max_cosets)
    rels = [[ct.col(g) for g in free_reduce(r)] for r in P.relators]
    rels = [r for r in rels if r]
    c = 0
    while c < len(ct.table):
        if ct.live(c):
            try:
                _process(ct, c, rels)
            except CosetOverflow:
                _lookahead(ct, rels)
                c = ct.compact(c)
                if len(ct.table) >= max_cosets:
                    raise
                continue
        c += 1
    return _regular_group(ct, P)


def _process(ct: _CosetTable, c: int, rels: list[list[int]]) -> None:
    for r in rels:
        ct.scan(c, r, fill=True)
        if not ct.live(c):
            return
    for x in range(ct.ncols):
        if ct.live(c) and ct.table[c][x] < 0:
            ct.define(c, x)


def _lookahead(ct: _CosetTable, rels: list[list[int]]) -> None:
    for c in range(len(ct.table)):
        for r in rels:
            if not ct.live(c):
                break
            ct.scan(c, r, fill=False)


def _regular_group(ct: _CosetTable, P: Presentation) -> Group:
    ct.compact(0)
    T = ct.table
    n = len(T)
    # standardize: breadth-first order from the trivial coset
    order = [0]
    tree: dict[int, tuple[int, int]] = {}
    seen = {0}
    for c in order:
        for x in range(ct.ncols):
            d = T[c][x]
            if d not in seen:
                seen.add(d)
                tree[d] = (c, x)
                order.append(d)
    if len(order) != n:
        raise GroupError("coset table is not connected")
    pos = {c: i for i, c in enumerate(order)}
    # mul[i][j]: apply the word of coset j starting from coset i
    mul = [[0] * n for _ in range(n)]
    for i, ci in enumerate(order):
        row = {0: ci}
        for cj in order[1:]:
            par, x = tree[cj]
            row[cj] = T[row[par]][x]
        mul[i] = [pos[row[cj]] for cj in order]
    names = {name: pos[T[0][2 * k]] for k, name in enumerate(P.generators)}
    words = ["1"] * n
    letters: dict[int, list[tuple[str, int]]] = {order[0]: []}
    for c in order[1:]:
        par, x = tree[c]
        name, sign = P.generators[x // 2], -1 if x % 2 else 1
        run = list(letters[par])
        if run and run[-1][0] == name:
            run[-1] = (name, run[-1][1] + sign)
        else:
            run.append((name, sign))
        letters[c] = run
        words[pos[c]] = "*".join(g if e == 1 else f"{g}^{e}" for g, e in run)
    return _table_group(mul, "<" + ",".join(P.generators) + ">", names=names,
                        words=tuple(words))


def evaluate_word(G: Group, gens: list[int], word) -> int:
    val = 0
    for g in word:
        val = G.mul[val][gens[g - 1] if g > 0 else G.inv[gens[-g - 1]]]
    return val


EXCEPTIONAL_PRESENTATIONS = {
    "H1": "gens a b c; rel a^2; rel b^2; rel c^2; rel a*b*c = b*c*a; rel b*c*a = c*a*b",
    "H2": "gens a b; rel a^8; rel b^2; rel b*a*b = a^5",
    "H3": "gens a b c; rel a^3; rel b^3; rel c^2; rel a*b = b*a; rel (a*c)^2 = e; rel (b*c)^2 = e",
    # b^3 = 1 is needed for a finite group of order 27; the other relations
    # alone leave b of infinite order
    "H4": "gens a b c; rel a^3; rel b^3; rel c^3; rel a*c = c*a; rel b*c = c*b; rel b^-1*a*b = a*c",
}
EXCEPTIONAL_ORDERS = {"H1": 16, "H2": 16, "H3": 18, "H4": 27}


@functools.lru_cache(maxsize=None)
def builtin_exceptional(name: str) -> Group:
    key = name.upper()
    if key not in EXCEPTIONAL_PRESENTATIONS:
        raise GroupError(f"unknown exceptional group {name!r}")
    G = coset_enumerate(Presentation.parse(EXCEPTIONAL_PRESENTATIONS[key]))
    object.__setattr__(G, "label", key)
    if G.order != EXCEPTIONAL_ORDERS[key]:
        raise GroupError(f"{key} enumerated to order {G.order}, expected {EXCEPTIONAL_ORDERS[key]}")
    return G
