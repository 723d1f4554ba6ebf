"""Exhaustive certification of the Cayley index of a group.

Inverse-closed connection sets are unions of inverse classes ({g} for an
involution, {g, g^-1} otherwise), so candidates are bitmasks over the class
list.  Masks in one orbit of Aut(G), or complementary to one, give Cayley
graphs with the same index; only the numerically smallest mask of each such
orbit is evaluated.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cayley import ConnectionSet, cayley_index_of, connection_set
from .groups import Group
from .homs import automorphism_generators, automorphism_group

BUDGET_ENV = "CAYLEY_INDEX_MAX_CANDIDATES"


def _default_candidates() -> int:
    return int(os.environ.get(BUDGET_ENV, 1 << 20))


@dataclass(frozen=True)
class SearchBudget:
    max_classes: int = 19
    max_candidates: int = field(default_factory=_default_candidates)
    parallel_width: int = 1
    progress_every: int = 1000

    def __post_init__(self):
        if min(self.max_classes, self.max_candidates, self.parallel_width) < 1:
            raise ValueError("budget fields must be positive")


@dataclass
class SearchResult:
    group_label: str
    min_index: int
    witness: ConnectionSet
    candidates_examined: int
    exhaustive: bool
    orbits: int = 0


def inverse_classes(G: Group) -> list[tuple[int, ...]]:
    """Partition of G minus the identity into {g} (involutions) and
    {g, g^-1}, ordered by smallest member."""
    out = []
    seen = {0}
    for g in G.elements():
        if g in seen:
            continue
        h = G.inv[g]
        seen.update((g, h))
        out.append((g,) if g == h else (g, h))
    return out


def mask_to_set(G: Group, classes: Sequence[tuple[int, ...]], mask: int) -> ConnectionSet:
    elems = [e for i, cls in enumerate(classes) if mask >> i & 1 for e in cls]
    return connection_set(G, elems)


def class_permutations(G: Group, classes, auts) -> list[tuple[int, ...]]:
    where = {}
    for i, cls in enumerate(classes):
        for e in cls:
            where[e] = i
    return [tuple(where[a.image[cls[0]]] for cls in classes) for a in auts]


class _MaskMapper:
    """Applies a class permutation to masks by 8-bit chunk lookups."""

    def __init__(self, perm: Sequence[int]):
        k = len(perm)
        self.chunks = []
        for start in range(0, k, 8):
            width = min(8, k - start)
            table = []
            for bits in range(1 << width):
                out = 0
                for j in range(width):
                    if bits >> j & 1:
                        out |= 1 << perm[start + j]
                table.append(out)
            self.chunks.append((start, (1 << width) - 1, table))

    def __call__(self, mask: int) -> int:
        out = 0
        for start, lim, table in self.chunks:
            out |= table[(mask >> start) & lim]
        return out


def orbit_representatives(k: int, perms: Sequence[Sequence[int]]) -> list[int]:
    """Smallest mask of every orbit of <perms> x complement on k-bit masks."""
    mappers = [_MaskMapper(p) for p in perms]
    full = (1 << k) - 1
    seen = bytearray(1 << k)
    reps = []
    for m in range(1 << k):
        if seen[m]:
            continue
        reps.append(m)
        seen[m] = 1
        stack = [m]
        while stack:
            x = stack.pop()
            for y in [f(x) for f in mappers] + [full ^ x]:
                if not seen[y]:
                    seen[y] = 1
                    stack.append(y)
    return reps


def _evaluate(args) -> tuple[int, int, int]:
    G, classes, masks, full = args
    best = None
    for m in masks:
        # complements share the index; evaluate the sparser side
        pop = bin(m).count("1")
        use = m if 2 * pop <= len(classes) else full ^ m
        idx = cayley_index_of(mask_to_set(G, classes, use)).cayley_index
        if best is None or (idx, m) < best:
            best = (idx, m)
    return best[0], best[1], len(masks)


def min_cayley_index(G: Group, budget: SearchBudget | None = None, *, prune: bool = True,
                     progress: Callable[[int, int], None] | None = None) -> SearchResult:
    """Minimum Cayley index over all inverse-closed connection sets of G.

    ``exhaustive`` is False when the class count or candidate budget cut the
    search short; the result is then the best index seen.
    """
    budget = budget or SearchBudget()
    classes = inverse_classes(G)
    k = len(classes)
    full = (1 << k) - 1
    truncated = k > budget.max_classes
    if truncated:
        # too many classes for an exhaustive pass: sample the low masks
        cands = range(1 << budget.max_classes)
    elif prune:
        auts = automorphism_generators(automorphism_group(G))
        cands = orbit_representatives(k, class_permutations(G, classes, auts))
    else:
        cands = range(1 << k)
    if len(cands) > budget.max_candidates:
        truncated = True
    cands = list(cands[:budget.max_candidates])

    best: tuple[int, int] | None = None
    examined = 0
    if budget.parallel_width > 1 and len(cands) > budget.parallel_width:
        width = budget.parallel_width
        step = -(-len(cands) // width)
        chunks = [(G, classes, cands[i:i + step], full) for i in range(0, len(cands), step)]
        with ProcessPoolExecutor(max_workers=width) as ex:
            for idx, m, count in ex.map(_evaluate, chunks):
                examined += count
                if best is None or (idx, m) < best:
                    best = (idx, m)
    else:
        for m in cands:
            idx, _, _ = _evaluate((G, classes, [m], full))
            examined += 1
            if best is None or (idx, m) < best:
                best = (idx, m)
            if progress and examined % budget.progress_every == 0:
                progress(examined, best[0])
            if best[0] == 1:
                # nothing beats a GRR
                break
    if progress:
        progress(examined, best[0])
    idx, m = best
    if 2 * bin(m).count("1") > k:
        m = full ^ m
    witness = mask_to_set(G, classes, m)
    return SearchResult(G.label, idx, witness, examined, not truncated,
                        orbits=len(cands))


def verify_upper_bound(G: Group, S: ConnectionSet, claimed: int) -> bool:
    if S.group is not G:
        raise ValueError("connection set belongs to a different group")
    return cayley_index_of(S).cayley_index == claimed
