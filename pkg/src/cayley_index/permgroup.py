"""Permutation groups via the deterministic Schreier-Sims algorithm.

Permutations are tuples ``p`` acting on ``range(n)`` by ``x -> p[x]``;
products compose left to right, ``(p * q)[x] = q[p[x]]``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def orbit(point: int, gens: Iterable[Perm]) -> list[int]:
    gens = list(gens)
    seen = {point}
    out = [point]
    for x in out:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def orbits(n: int, gens: Iterable[Perm]) -> list[list[int]]:
    gens = list(gens)
    seen = [False] * n
    out = []
    for v in range(n):
        if not seen[v]:
            orb = orbit(v, gens)
            for w in orb:
                seen[w] = True
            out.append(sorted(orb))
    return out


def _transversal(point: int, gens: list[Perm], n: int) -> dict[int, Perm]:
    tr = {point: identity(n)}
    queue = [point]
    for x in queue:
        u = tr[x]
        for g in gens:
            y = g[x]
            if y not in tr:
                tr[y] = mul(u, g)
                queue.append(y)
    return tr


class PermGroup:
    """Base and strong generating set for the group generated by ``gens``.

    ``base_prefix`` forces the first base points, which makes the stabilizer
    chain expose the pointwise stabilizer of that prefix.
    """

    def __init__(self, n: int, gens: Iterable[Sequence[int]], base_prefix: Sequence[int] = ()):
        self.n = n
        self.gens = [tuple(g) for g in gens if not is_identity(g)]
        self.base: list[int] = list(base_prefix)
        self.levels: list[list[Perm]] = []
        self.transversals: list[dict[int, Perm]] = []
        self._build()

    def _first_moved(self, p: Perm) -> int:
        for i, x in enumerate(p):
            if i != x:
                return i
        raise ValueError("identity has no moved point")

    def _fixes_prefix(self, p: Perm, k: int) -> bool:
        return all(p[b] == b for b in self.base[:k])

    def _build(self) -> None:
        n = self.n
        for g in self.gens:
            if self._fixes_prefix(g, len(self.base)):
                self.base.append(self._first_moved(g))
        k = len(self.base)
        self.levels = [[g for g in self.gens if self._fixes_prefix(g, i)] for i in range(k)]
        self.transversals = [_transversal(self.base[i], self.levels[i], n) for i in range(k)]
        i = k - 1
        while i >= 0:
            restart = None
            tr = self.transversals[i]
            for p, u in list(tr.items()):
                for s in self.levels[i]:
                    h = mul(mul(u, s), inverse(tr[s[p]]))
                    residue, j = self._sift(h, i + 1)
                    if not is_identity(residue):
                        if j == len(self.base):
                            self.base.append(self._first_moved(residue))
                            self.levels.append([])
                            self.transversals.append({})
                        for lvl in range(i + 1, j + 1):
                            self.levels[lvl].append(residue)
                            self.transversals[lvl] = _transversal(
                                self.base[lvl], self.levels[lvl], n)
                        restart = j
                        break
                if restart is not None:
                    break
            if restart is not None:
                i = restart
            else:
                i -= 1

    def _sift(self, h: Perm, start: int = 0) -> tuple[Perm, int]:
        for lvl in range(start, len(self.base)):
            y = h[self.base[lvl]]
            tr = self.transversals[lvl]
            if y not in tr:
                return h, lvl
            h = mul(h, inverse(tr[y]))
        return h, len(self.base)

    def order(self) -> int:
        out = 1
        for tr in self.transversals:
            out *= len(tr)
        return out

    def contains(self, p: Sequence[int]) -> bool:
        residue, _ = self._sift(tuple(p))
        return is_identity(residue)

    def stabilizer_generators(self, k: int) -> list[Perm]:
        """Generators of the pointwise stabilizer of ``base[:k]``."""
        if k >= len(self.levels):
            return []
        return list(self.levels[k])

    def basic_orbit_lengths(self) -> list[int]:
        return [len(tr) for tr in self.transversals]


def pointwise_stabilizer_orbits(n: int, gens: Sequence[Perm], points: Sequence[int]) -> list[list[int]]:
    """Orbits of the subgroup of <gens> fixing each of ``points``."""
    if not gens:
        return [[v] for v in range(n)]
    G = PermGroup(n, gens, base_prefix=points)
    return orbits(n, G.stabilizer_generators(len(points)))
