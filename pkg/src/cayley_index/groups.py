"""Finite groups as dense multiplication tables.

Elements are the integers ``0..order-1`` with the identity at 0.  Every
constructor here returns a :class:`Group` whose table has been built once and
is never mutated afterwards.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

MAX_ORDER = 512
DEFAULT_AUT_ORDER_LIMIT = 64
DEFAULT_AUT_COUNT_LIMIT = 250_000
DEFAULT_ISO_ORDER_LIMIT = 128


class GroupError(ValueError):
    pass


class CapacityError(GroupError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its Cayley table.

    ``names`` maps symbolic generator names (``z1``, ``x``, ``i``, ``a`` ...)
    to element indices; the connection-set parser resolves names through it.
    ``coords`` optionally records a structural encoding per element, e.g. the
    mixed-radix tuple of an abelian group element.
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    elem_order: tuple[int, ...]
    label: str
    names: dict[str, int] = field(default_factory=dict)
    coords: tuple | None = None
    perms: tuple[tuple[int, ...], ...] | None = None
    words: tuple[str, ...] | None = None

    @property
    def identity(self) -> int:
        return 0

    def __repr__(self) -> str:
        return f"Group({self.label!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def m(self, *elems: int) -> int:
        """Product of the given elements, left to right."""
        out = 0
        for g in elems:
            out = self.mul[out][g]
        return out

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        out = 0
        for _ in range(k % self.elem_order[g]):
            out = self.mul[out][g]
        return out

    def element(self, name: str) -> int:
        try:
            return self.names[name]
        except KeyError:
            raise GroupError(f"{self.label} has no element named {name!r}") from None

    def describe(self, g: int) -> str:
        """Best-effort readable name for an element."""
        if g == 0:
            return "1"
        for name, idx in self.names.items():
            if idx == g:
                return name
        if self.words is not None:
            return self.words[g]
        if self.coords is not None:
            return str(self.coords[g])
        return f"#{g}"


def _pow(name: str, k: int) -> str:
    return "" if k == 0 else name if k == 1 else f"{name}^{k}"


def _join(*parts: str) -> str:
    return "*".join(p for p in parts if p) or "1"


def _table_group(table: Sequence[Sequence[int]], label: str, *, names=None,
                 coords=None, perms=None, words=None, check: bool = True) -> Group:
    n = len(table)
    if n > MAX_ORDER:
        raise CapacityError(f"group order {n} exceeds capacity {MAX_ORDER}")
    mul = tuple(tuple(row) for row in table)
    if check:
        if any(mul[0][g] != g or mul[g][0] != g for g in range(n)):
            raise GroupError(f"{label}: element 0 is not the identity")
    inv = [0] * n
    for g in range(n):
        row = mul[g]
        for h in range(n):
            if row[h] == 0:
                inv[g] = h
                break
        else:
            raise GroupError(f"{label}: element {g} has no inverse")
    orders = []
    for g in range(n):
        k, cur = 1, g
        while cur != 0:
            cur = mul[cur][g]
            k += 1
            if k > n:
                raise GroupError(f"{label}: element {g} has no finite order")
        orders.append(k)
    return Group(order=n, mul=mul, inv=tuple(inv), elem_order=tuple(orders),
                 label=label, names=dict(names or {}), coords=coords,
                 perms=perms, words=words)


def check_axioms(G: Group) -> None:
    """Exhaustively check the group axioms; raises GroupError on failure."""
    n, mul = G.order, G.mul
    for g in range(n):
        if mul[0][g] != g or mul[g][0] != g:
            raise GroupError(f"identity fails at {g}")
        if mul[g][G.inv[g]] != 0 or mul[G.inv[g]][g] != 0:
            raise GroupError(f"inverse fails at {g}")
        if G.inv[G.inv[g]] != g:
            raise GroupError(f"inverse map is not an involution at {g}")
        if sorted(mul[g]) != list(range(n)):
            raise GroupError(f"row {g} is not a permutation")
    for a in range(n):
        ma = mul[a]
        for b in range(n):
            ab = ma[b]
            mab = mul[ab]
            mb = mul[b]
            for c in range(n):
                if mab[c] != ma[mb[c]]:
                    raise GroupError(f"associativity fails at {(a, b, c)}")
    for g in range(n):
        k, cur = 1, g
        while cur != 0:
            cur = mul[cur][g]
            k += 1
        if k != G.elem_order[g]:
            raise GroupError(f"element order wrong at {g}")


# -- constructors ----------------------------------------------------------

def _radix_index(coord: Sequence[int], factors: Sequence[int]) -> int:
    idx = 0
    for c, f in zip(coord, factors):
        idx = idx * f + (c % f)
    return idx


def abelian(invariant_factors: Sequence[int]) -> Group:
    """Z_{i1} x ... x Z_{ik}, elements in row-major mixed radix.

    The canonical generators are named ``z1..zk``.  The empty factor list gives
    the trivial group.
    """
    factors = [int(f) for f in invariant_factors]
    if any(f < 2 for f in factors):
        raise GroupError(f"invariant factors must be >= 2: {factors}")
    n = math.prod(factors)
    if n > MAX_ORDER:
        raise CapacityError(f"group order {n} exceeds capacity {MAX_ORDER}")
    coords = list(itertools.product(*(range(f) for f in factors)))
    table = []
    for a in coords:
        table.append([_radix_index([x + y for x, y in zip(a, b)], factors)
                      for b in coords])
    names = {}
    for j in range(len(factors)):
        unit = [0] * len(factors)
        unit[j] = 1
        names[f"z{j + 1}"] = _radix_index(unit, factors)
    label = "Z" + "xZ".join(map(str, factors)) if factors else "Z1"
    words = tuple(_join(*(_pow(f"z{j + 1}", c) for j, c in enumerate(a))) for a in coords)
    return _table_group(table, label, names=names, coords=tuple(coords), words=words,
                        check=False)


def abelian_element(A: Group, coord: Sequence[int]) -> int:
    """Index of the element with the given mixed-radix coordinates."""
    if A.coords is None:
        raise GroupError(f"{A.label} carries no coordinate encoding")
    if len(coord) != len(A.coords[0]):
        raise GroupError(f"coordinate {tuple(coord)} has wrong length for {A.label}")
    factors = [max(c[j] for c in A.coords) + 1 for j in range(len(coord))]
    if any(not 0 <= c < f for c, f in zip(coord, factors)):
        raise GroupError(f"coordinate {tuple(coord)} out of range for {A.label}")
    return _radix_index(coord, factors)


def cyclic(n: int) -> Group:
    return abelian([n]) if n > 1 else trivial()


def trivial() -> Group:
    return _table_group([[0]], "Z1", check=False)


def dihedral(n: int) -> Group:
    """D_{2n} = <a, b | a^2 = b^n = 1, aba = b^-1>.

    Elements are encoded as ``a^s b^r`` with index ``s*n + r``, so rotations
    come first.
    """
    if n < 3:
        raise GroupError("dihedral(n) needs n >= 3")
    if 2 * n > MAX_ORDER:
        raise CapacityError(f"group order {2 * n} exceeds capacity {MAX_ORDER}")
    # a^s b^r * a^t b^q = a^(s+t) b^((-1)^t r + q)
    table = []
    for s in range(2):
        for r in range(n):
            row = []
            for t in range(2):
                for q in range(n):
                    rr = (-r if t else r) + q
                    row.append(((s + t) % 2) * n + rr % n)
            table.append(row)
    words = tuple(_join("a" if s else "", _pow("b", r)) for s in range(2) for r in range(n))
    return _table_group(table, f"D{2 * n}", names={"a": n, "b": 1}, words=words, check=False)


_QUAT = {
    # (unit, unit) -> (sign, unit); units 0=1, 1=i, 2=j, 3=k
    (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
    (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
    (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
}


def quaternion8() -> Group:
    """Q8 = {+-1, +-i, +-j, +-k}; index 2*u + (sign < 0) for unit u."""
    def decode(g):
        return (-1 if g % 2 else 1), g // 2

    table = []
    for g in range(8):
        sg, ug = decode(g)
        row = []
        for h in range(8):
            sh, uh = decode(h)
            if ug == 0:
                s, u = 1, uh
            elif uh == 0:
                s, u = 1, ug
            else:
                s, u = _QUAT[(ug, uh)]
            s *= sg * sh
            row.append(2 * u + (s < 0))
        table.append(row)
    names = {"-1": 1, "i": 2, "j": 4, "k": 6}
    words = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return _table_group(table, "Q8", names=names, words=words, check=False)


def alternating4() -> Group:
    """A4 as even permutations of {1,2,3,4}; ``perms`` holds each element."""
    perms = sorted(
        (p for p in itertools.permutations(range(4)) if _parity(p) == 0),
        key=lambda p: (p != (0, 1, 2, 3), p),
    )
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x)): right factor acts first, as in cycle-notation products
    table = [[index[tuple(p[q[x]] for x in range(4))] for q in perms] for p in perms]
    G = _table_group(table, "A4", perms=tuple(perms), words=tuple(map(_cycles, perms)),
                     check=False)
    G.names["t"] = cycle_element(G, [[1, 2, 3]])
    G.names["s"] = cycle_element(G, [[1, 2], [3, 4]])
    return G


def _cycles(p) -> str:
    """1-based cycle notation of a permutation of 0..n-1."""
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out) or "1"


def _parity(p) -> int:
    seen, parity = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        parity += length - 1
    return parity % 2


def cycle_element(G: Group, cycles: Iterable[Sequence[int]]) -> int:
    """Element of a permutation-backed group from 1-based cycle notation."""
    if G.perms is None:
        raise GroupError(f"{G.label} has no permutation encoding")
    deg = len(G.perms[0])
    p = list(range(deg))
    # product of cycles, rightmost applied first
    for cyc in reversed(list(cycles)):
        c = [v - 1 for v in cyc]
        if any(v < 0 or v >= deg for v in c):
            raise GroupError(f"cycle {tuple(cyc)} out of range for degree {deg}")
        step = {c[i]: c[(i + 1) % len(c)] for i in range(len(c))}
        p = [step.get(p[x], p[x]) for x in range(deg)]
    try:
        return G.perms.index(tuple(p))
    except ValueError:
        raise GroupError(f"permutation {cycles} is not in {G.label}") from None


def direct_product(G1: Group, G2: Group) -> Group:
    """G1 x G2 with (g1, g2) encoded as g1 * |G2| + g2."""
    n1, n2 = G1.order, G2.order
    if n1 * n2 > MAX_ORDER:
        raise CapacityError(f"group order {n1 * n2} exceeds capacity {MAX_ORDER}")
    m1, m2 = G1.mul, G2.mul
    table = []
    for a1 in range(n1):
        for a2 in range(n2):
            table.append([m1[a1][b1] * n2 + m2[a2][b2]
                          for b1 in range(n1) for b2 in range(n2)])
    words = None
    if G1.words is not None and G2.words is not None:
        shift = sum(1 for k in G1.names if _zindex(k) is not None)
        w2 = [re.sub(r"\bz(\d+)", lambda m: f"z{int(m.group(1)) + shift}", w) for w in G2.words]
        words = tuple(_product_word(a, b) for a in G1.words for b in w2)
    return _table_group(table, f"{G1.label}x{G2.label}", names=_merge_names(G1, G2),
                        words=words, check=False)


def _product_word(a: str, b: str) -> str:
    if b == "1":
        return a
    if a == "1":
        return b
    return f"{a}*{b}"


def _merge_names(G1: Group, G2: Group) -> dict[str, int]:
    n2 = G2.order
    names = {k: v * n2 for k, v in G1.names.items()}
    zcount = sum(1 for k in G1.names if _zindex(k) is not None)
    for k, v in G2.names.items():
        zi = _zindex(k)
        if zi is not None:
            key = f"z{zi + zcount}"
        else:
            key = k
        if key in names:
            key = f"{key}'"
        names[key] = v
    zs = [k for k in names if _zindex(k) is not None]
    if len(zs) == 1 and "z" not in names:
        names["z"] = names[zs[0]]
    return names


def _zindex(name: str):
    if len(name) > 1 and name[0] == "z" and name[1:].isdigit():
        return int(name[1:])
    return None


def generalized_dicyclic(A: Group, y: int) -> Group:
    """Dic(A, y, x): <A, x> with x^2 = y and x^-1 a x = a^-1.

    Elements ``a`` keep their index; ``x*a`` is encoded as ``|A| + a``.
    """
    if not is_abelian(A):
        raise GroupError(f"{A.label} is not abelian")
    if A.elem_order[y] != 2:
        raise GroupError(f"element {y} of {A.label} is not an involution")
    n = A.order
    if 2 * n > MAX_ORDER:
        raise CapacityError(f"group order {2 * n} exceeds capacity {MAX_ORDER}")
    am, ainv = A.mul, A.inv
    table = []
    for e1 in range(2):
        for a in range(n):
            row = []
            for e2 in range(2):
                for b in range(n):
                    # x^e1 a x^e2 b = x^(e1+e2) a^((-1)^e2) b
                    c = am[ainv[a] if e2 else a][b]
                    if e1 and e2:
                        c = am[y][c]
                    row.append(((e1 + e2) % 2) * n + c)
            table.append(row)
    names = dict(A.names)
    names["x"] = n
    desc = A.describe(y) if A.coords is None else "(" + ",".join(map(str, A.coords[y])) + ")"
    if A.coords is not None and len(A.coords[0]) == 1:
        desc = str(A.coords[y][0])
    words = None
    if A.words is not None:
        words = A.words + tuple("x" if a == 0 else f"x*{A.words[a]}" for a in range(n))
    return _table_group(table, f"Dic({A.label},{desc})", names=names, words=words, check=False)


# -- interrogation -----------------------------------------------------------

def element_order(G: Group, g: int) -> int:
    return G.elem_order[g]


def involutions(G: Group) -> list[int]:
    return [g for g in G.elements() if G.elem_order[g] == 2]


def is_abelian(G: Group) -> bool:
    mul = G.mul
    return all(mul[a][b] == mul[b][a] for a in range(G.order) for b in range(a))


def center(G: Group) -> list[int]:
    mul = G.mul
    return [a for a in G.elements() if all(mul[a][b] == mul[b][a] for b in G.elements())]


def exponent(G: Group) -> int:
    return math.lcm(*G.elem_order)


def generated_subgroup(G: Group, gens: Iterable[int]) -> set[int]:
    gens = list(gens)
    seen = {0}
    frontier = [0]
    mul = G.mul
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = mul[h][g]
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        frontier = nxt
    return seen


def greedy_generators(G: Group, start: Sequence[int] = (), candidates=None) -> list[int]:
    """Generating sequence built by repeatedly adding the element that
    enlarges the generated subgroup most (lowest index breaks ties)."""
    gens = list(start)
    sub = generated_subgroup(G, gens)
    pool = list(G.elements()) if candidates is None else list(candidates)
    while len(sub) < G.order:
        best, best_size = None, len(sub)
        for g in pool:
            if g in sub:
                continue
            size = len(generated_subgroup(G, gens + [g]))
            if size > best_size:
                best, best_size = g, size
                if size == G.order:
                    break
        gens.append(best)
        sub = generated_subgroup(G, gens)
    return gens
