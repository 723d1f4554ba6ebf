"""Homomorphisms between table groups: automorphism enumeration, isomorphism
testing and automorphism classes of involutions.

All searches backtrack over images of a greedy generating sequence.  Each
partial assignment is closed into a map on the generated subgroup, so a
violated relation is caught at the generator that introduces it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .groups import (
    DEFAULT_AUT_COUNT_LIMIT,
    DEFAULT_AUT_ORDER_LIMIT,
    DEFAULT_ISO_ORDER_LIMIT,
    BudgetExceeded,
    Group,
    GroupError,
    greedy_generators,
    is_abelian,
    involutions,
)


@dataclass(frozen=True)
class GroupHom:
    source: Group
    target: Group
    image: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.image[g]

    def is_homomorphism(self) -> bool:
        ms, mt, im = self.source.mul, self.target.mul, self.image
        n = self.source.order
        return all(im[ms[g][h]] == mt[im[g]][im[h]] for g in range(n) for h in range(n))

    def is_automorphism(self) -> bool:
        return (self.source is self.target
                and len(set(self.image)) == self.source.order
                and self.is_homomorphism())

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        return GroupHom(other.source, self.target,
                        tuple(self.image[other.image[g]] for g in other.source.elements()))

    def inverse(self) -> "GroupHom":
        inv = [0] * len(self.image)
        for g, h in enumerate(self.image):
            inv[h] = g
        return GroupHom(self.target, self.source, tuple(inv))


def element_invariants(G: Group) -> list[tuple]:
    """Per-element isomorphism invariants: order, centralizer size, number
    of square roots, and the order of the element's square."""
    n, mul = G.order, G.mul
    sq = [mul[g][g] for g in range(n)]
    roots = Counter(sq)
    keys = []
    for g in range(n):
        row = mul[g]
        cent = sum(1 for h in range(n) if row[h] == mul[h][g])
        keys.append((G.elem_order[g], cent, roots.get(g, 0)))
    return keys


def group_invariant(G: Group) -> tuple:
    return (G.order, tuple(sorted(Counter(element_invariants(G)).items())))


class _HomSearch:
    """Backtracking search for injective homomorphisms G -> H along a fixed
    generating sequence of G."""

    def __init__(self, G: Group, H: Group, gens: Sequence[int],
                 fixed: dict[int, int] | None = None):
        self.G, self.H = G, H
        self.gens = list(gens)
        self.kg = element_invariants(G)
        self.kh = self.kg if H is G else element_invariants(H)
        by_key: dict[tuple, list[int]] = {}
        for t in H.elements():
            by_key.setdefault(self.kh[t], []).append(t)
        self.cands = []
        for g in self.gens:
            if fixed and g in fixed:
                self.cands.append([fixed[g]])
            else:
                self.cands.append(by_key.get(self.kg[g], []))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        n = self.G.order
        phi = [-1] * n
        used = [False] * self.H.order
        phi[0] = 0
        used[0] = True
        domain = [0]
        assigned: list[tuple[int, int]] = []
        yield from self._search(0, phi, used, domain, assigned)

    def _extend(self, phi, used, domain, assigned, g, t):
        mg, mh = self.G.mul, self.H.mul
        added = []
        pairs = assigned + [(g, t)]
        stack = [(e, True) for e in domain]
        ok = True
        while stack and ok:
            e, old = stack.pop()
            pe = phi[e]
            for s, ts in ((g, t),) if old else pairs:
                f = mg[e][s]
                fi = mh[pe][ts]
                cur = phi[f]
                if cur == -1:
                    if used[fi]:
                        ok = False
                        break
                    phi[f] = fi
                    used[fi] = True
                    added.append(f)
                    stack.append((f, False))
                elif cur != fi:
                    ok = False
                    break
        return ok, added

    def _search(self, depth, phi, used, domain, assigned):
        if depth == len(self.gens):
            yield tuple(phi)
            return
        g = self.gens[depth]
        for t in self.cands[depth]:
            if used[t]:
                continue
            ok, added = self._extend(phi, used, domain, assigned, g, t)
            if ok:
                assigned.append((g, t))
                yield from self._search(depth + 1, phi, used, domain + added, assigned)
                assigned.pop()
            for f in added:
                used[phi[f]] = False
                phi[f] = -1


def automorphism_group(G: Group, *, max_order: int = DEFAULT_AUT_ORDER_LIMIT,
                       max_count: int = DEFAULT_AUT_COUNT_LIMIT) -> list[GroupHom]:
    """All automorphisms of G (identity first)."""
    if G.order > max_order:
        raise BudgetExceeded(f"automorphism search limited to order {max_order}, got {G.order}")
    out = []
    gens = greedy_generators(G)
    for image in _HomSearch(G, G, gens):
        out.append(GroupHom(G, G, image))
        if len(out) > max_count:
            raise BudgetExceeded(f"{G.label} has more than {max_count} automorphisms")
    out.sort(key=lambda h: h.image)
    return out


def automorphism_generators(auts: Sequence[GroupHom]) -> list[GroupHom]:
    """A small generating set for the group formed by ``auts``."""
    from .permgroup import PermGroup

    n = auts[0].source.order if auts else 0
    pg = PermGroup(n, [])
    gens = []
    for a in auts:
        if not pg.contains(a.image):
            gens.append(a)
            pg = PermGroup(n, [h.image for h in gens])
        if pg.order() == len(auts):
            break
    return gens


def find_isomorphism(G1: Group, G2: Group, *,
                     max_order: int = DEFAULT_ISO_ORDER_LIMIT) -> GroupHom | None:
    if G1.order != G2.order:
        return None
    if G1.order > max_order:
        raise BudgetExceeded(f"isomorphism test limited to order {max_order}, got {G1.order}")
    if group_invariant(G1) != group_invariant(G2):
        return None
    if is_abelian(G1) != is_abelian(G2):
        return None
    gens = _rare_first_generators(G1)
    for image in _HomSearch(G1, G2, gens):
        return GroupHom(G1, G2, image)
    return None


def groups_isomorphic(G1: Group, G2: Group, **kw) -> bool:
    return find_isomorphism(G1, G2, **kw) is not None


def _rare_first_generators(G: Group) -> list[int]:
    # prefer generators whose invariant class is small: fewer candidate images
    keys = element_invariants(G)
    freq = Counter(keys)
    pool = sorted(G.elements(), key=lambda g: (freq[keys[g]], g))
    return greedy_generators(G, candidates=pool)


def find_automorphism_mapping(G: Group, src: int, dst: int) -> GroupHom | None:
    """Some automorphism of G sending ``src`` to ``dst``, or None."""
    if src == 0 or dst == 0:
        return GroupHom(G, G, tuple(G.elements())) if src == dst else None
    gens = greedy_generators(G, start=[src])
    for image in _HomSearch(G, G, gens, fixed={src: dst}):
        return GroupHom(G, G, image)
    return None


def involution_classes(A: Group, *, max_order: int = DEFAULT_AUT_ORDER_LIMIT) -> list[list[int]]:
    """Partition of the involutions of abelian A into Aut(A)-orbits."""
    if not is_abelian(A):
        raise GroupError(f"{A.label} is not abelian")
    if A.order > max_order:
        raise BudgetExceeded(f"automorphism search limited to order {max_order}, got {A.order}")
    return aut_orbits(A, involutions(A))


def aut_orbits(G: Group, elems: Sequence[int]) -> list[list[int]]:
    """Orbits of Aut(G) on a union of orbits ``elems``, each sorted, ordered by
    smallest member."""
    keys = element_invariants(G)
    remaining = sorted(elems)
    classes = []
    while remaining:
        rep = remaining[0]
        cls = {rep}
        for y in remaining[1:]:
            if y in cls or keys[y] != keys[rep]:
                continue
            phi = find_automorphism_mapping(G, rep, y)
            if phi is None:
                continue
            # close under the found map to skip repeated searches
            frontier = [y]
            cls.add(y)
            while frontier:
                z = phi(frontier.pop())
                if z not in cls:
                    cls.add(z)
                    frontier.append(z)
        classes.append(sorted(cls))
        remaining = [y for y in remaining if y not in cls]
    return classes
