"""Graph automorphisms and canonical forms by individualization-refinement.

Partitions are ordered lists of cells.  Refinement never looks at vertex
labels when deciding how to split or where new cells go, so refining
isomorphic colored graphs produces corresponding partitions and identical
traces.  The traces double as node invariants for pruning.

Set the logger ``cayley_index.autgraph`` to DEBUG for one line per search-tree
node: ``node depth=<d> seq=<individualized vertices> cells=<count>``.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import Graph
from .permgroup import orbit as perm_orbit
from .permgroup import orbits as perm_orbits
from .permgroup import pointwise_stabilizer_orbits

log = logging.getLogger(__name__)

Cells = list[list[int]]


@dataclass
class AutResult:
    generators: list[tuple[int, ...]]
    order: int
    base: list[int]
    orbit_lengths: list[int] = field(default_factory=list)

    def orbits(self, n: int) -> list[list[int]]:
        return perm_orbits(n, self.generators)


# -- refinement -----------------------------------------------------------------

def _refine(nbrs, cells: Cells, cell_of: list[int], splitters: Sequence[int]) -> tuple:
    """Refine ``cells`` in place to the coarsest equitable partition finer
    than it; returns the trace."""
    queue = deque(splitters)
    queued = [False] * len(cells)
    for s in splitters:
        queued[s] = True
    trace = []
    while queue:
        w = queue.popleft()
        queued[w] = False
        count: dict[int, int] = {}
        for u in cells[w]:
            for v in nbrs[u]:
                count[v] = count.get(v, 0) + 1
        touched = sorted({cell_of[v] for v in count})
        for c in touched:
            cell = cells[c]
            if len(cell) == 1:
                trace.append((w, c, count[cell[0]]))
                continue
            groups: dict[int, list[int]] = {}
            for v in cell:
                groups.setdefault(count.get(v, 0), []).append(v)
            if len(groups) == 1:
                trace.append((w, c, next(iter(groups))))
                continue
            keys = sorted(groups)
            trace.append((w, c) + tuple(x for k in keys for x in (k, len(groups[k]))))
            frags = [groups[k] for k in keys]
            # first fragment keeps index c, the rest are appended in count order
            idxs = [c]
            cells[c] = frags[0]
            for frag in frags[1:]:
                idxs.append(len(cells))
                cells.append(frag)
                queued.append(False)
            for idx, frag in zip(idxs, frags):
                for v in frag:
                    cell_of[v] = idx
            if queued[c]:
                add = idxs[1:]
            else:
                sizes = [len(f) for f in frags]
                big = sizes.index(max(sizes))
                add = [i for k, i in enumerate(idxs) if k != big]
            for i in add:
                if not queued[i]:
                    queued[i] = True
                    queue.append(i)
    return tuple(trace)


def _cells_from_coloring(n: int, coloring: Sequence[int] | None) -> Cells:
    if coloring is None:
        return [list(range(n))]
    by: dict[int, list[int]] = {}
    for v, c in enumerate(coloring):
        by.setdefault(c, []).append(v)
    return [by[c] for c in sorted(by)]


def _cell_of(n: int, cells: Cells) -> list[int]:
    out = [0] * n
    for i, cell in enumerate(cells):
        for v in cell:
            out[v] = i
    return out


def equitable_refine(g: Graph, coloring: Sequence[int] | None = None) -> list[int]:
    """Coarsest equitable refinement of ``coloring`` (uniform when omitted),
    returned as colors 0..k-1 in cell order."""
    cells = _cells_from_coloring(g.n, coloring)
    cell_of = _cell_of(g.n, cells)
    _refine(g.nbrs, cells, cell_of, range(len(cells)))
    return cell_of


def is_equitable(g: Graph, coloring: Sequence[int]) -> bool:
    cells = _cells_from_coloring(g.n, coloring)
    for cell in cells:
        for other in cells:
            mask = 0
            for v in other:
                mask |= 1 << v
            counts = {bin(g.adj[v] & mask).count("1") for v in cell}
            if len(counts) > 1:
                return False
    return True


class _Node:
    __slots__ = ("cells", "cell_of", "trace", "seq")

    def __init__(self, cells, cell_of, trace, seq):
        self.cells = cells
        self.cell_of = cell_of
        self.trace = trace
        self.seq = seq

    def discrete(self) -> bool:
        return len(self.cells) == len(self.cell_of)

    def target(self) -> int:
        best, best_size = -1, None
        for i, cell in enumerate(self.cells):
            k = len(cell)
            if k > 1 and (best_size is None or k < best_size):
                best, best_size = i, k
        return best

    def child(self, nbrs, v: int) -> "_Node":
        cells = [list(c) for c in self.cells]
        cell_of = list(self.cell_of)
        t = cell_of[v]
        rest = [u for u in cells[t] if u != v]
        cells[t] = [v]
        cell_of_rest = len(cells)
        cells.append(rest)
        for u in rest:
            cell_of[u] = cell_of_rest
        trace = _refine(nbrs, cells, cell_of, [t])
        node = _Node(cells, cell_of, trace, self.seq + (v,))
        if log.isEnabledFor(logging.DEBUG):
            log.debug("node depth=%d seq=%s cells=%d", len(node.seq), node.seq, len(cells))
        return node


def _root(g: Graph, coloring) -> _Node:
    cells = _cells_from_coloring(g.n, coloring)
    cell_of = _cell_of(g.n, cells)
    trace = _refine(g.nbrs, cells, cell_of, range(len(cells)))
    return _Node(cells, cell_of, trace, ())


def _leaf_perm(first: _Node, other: _Node) -> tuple[int, ...]:
    """Permutation sending each vertex of the first leaf to the vertex in the
    same cell of the other leaf."""
    perm = [0] * len(first.cell_of)
    for idx, cell in enumerate(first.cells):
        perm[cell[0]] = other.cells[idx][0]
    return tuple(perm)


# -- automorphism group ---------------------------------------------------------

def automorphisms(g: Graph, coloring: Sequence[int] | None = None) -> AutResult:
    """Generators and exact order of the (color-preserving) automorphism group.

    The first path of the search tree gives a base; at each level, going up,
    every vertex of the target cell that is not already in the orbit of the
    base point is tested for an automorphism mapping the base point onto it.
    The order is the product of the resulting basic orbit lengths.
    """
    nbrs = g.nbrs
    path = [_root(g, coloring)]
    base: list[int] = []
    while not path[-1].discrete():
        node = path[-1]
        cell = node.cells[node.target()]
        v = min(cell)
        base.append(v)
        path.append(node.child(nbrs, v))
    first_leaf = path[-1]
    gens: list[tuple[int, ...]] = []
    lengths = [0] * len(base)
    for level in range(len(base) - 1, -1, -1):
        node = path[level]
        v = base[level]
        cell = node.cells[node.target()]
        orb = set(perm_orbit(v, gens))
        for w in sorted(cell):
            if w in orb:
                continue
            perm = _find_automorphism(g, path, level, w, first_leaf)
            if perm is not None:
                gens.append(perm)
                orb = set(perm_orbit(v, gens))
        lengths[level] = len(orb)
    return AutResult(gens, math.prod(lengths), base, lengths)


def _find_automorphism(g: Graph, path, level: int, w: int, first_leaf: _Node):
    nbrs = g.nbrs
    child = path[level].child(nbrs, w)
    if child.trace != path[level + 1].trace or len(child.cells) != len(path[level + 1].cells):
        return None
    stack = [(child, level + 1)]
    while stack:
        node, depth = stack.pop()
        if node.discrete():
            perm = _leaf_perm(first_leaf, node)
            if g.is_automorphism(perm):
                return perm
            continue
        ref = path[depth]
        t = node.target()
        if t != ref.target():
            continue
        nxt = path[depth + 1]
        kids = []
        for x in sorted(node.cells[t]):
            c = node.child(nbrs, x)
            if c.trace == nxt.trace and len(c.cells) == len(nxt.cells):
                kids.append((c, depth + 1))
        stack.extend(reversed(kids))
    return None


def aut_order(g: Graph) -> int:
    return automorphisms(g).order


def stabilizer_order(g: Graph, v: int, aut: AutResult | None = None) -> int:
    aut = aut or automorphisms(g)
    return aut.order // len(perm_orbit(v, aut.generators))


# -- canonical form ---------------------------------------------------------------

def canonical_labeling(g: Graph, aut: AutResult | None = None) -> tuple[int, ...]:
    """Map vertex -> canonical position.

    The chosen leaf minimizes (trace sequence, relabeled adjacency) over the
    whole search tree; children in one orbit of the stabilizer of the current
    individualized sequence are explored only once.
    """
    aut = aut or automorphisms(g)
    nbrs = g.nbrs
    n = g.n
    best: list = [None]
    stab_cache: dict[tuple, list[list[int]]] = {}

    def stab_orbits(seq):
        if not aut.generators:
            return None
        if seq not in stab_cache:
            stab_cache[seq] = pointwise_stabilizer_orbits(n, aut.generators, seq)
        return stab_cache[seq]

    def visit(node: _Node, traces: tuple):
        if best[0] is not None and traces > best[0][0][:len(traces)]:
            return
        if node.discrete():
            lab = tuple(node.cell_of)
            cert = _certificate(g, lab)
            key = (traces, cert)
            if best[0] is None or key < best[0][:2]:
                best[0] = (traces, cert, lab)
            return
        cell = node.cells[node.target()]
        orbs = stab_orbits(node.seq)
        reps = sorted(cell)
        if orbs is not None:
            where = {}
            for i, o in enumerate(orbs):
                for x in o:
                    where[x] = i
            picked, seen = [], set()
            for x in reps:
                if where[x] not in seen:
                    seen.add(where[x])
                    picked.append(x)
            reps = picked
        kids = [node.child(nbrs, x) for x in reps]
        kids.sort(key=lambda c: c.trace)
        for c in kids:
            visit(c, traces + (c.trace,))

    root = _root(g, None)
    visit(root, (root.trace,))
    return best[0][2]


def _certificate(g: Graph, lab: Sequence[int]) -> tuple[int, ...]:
    rows = [0] * g.n
    for u in range(g.n):
        r = 0
        for v in g.nbrs[u]:
            r |= 1 << lab[v]
        rows[lab[u]] = r
    return tuple(rows)


def canonical_form(g: Graph) -> Graph:
    lab = canonical_labeling(g)
    return Graph(g.n, _certificate(g, lab))


def isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    return canonical_form(g1) == canonical_form(g2)
