"""Hamiltonian 2-groups, generalized dicyclic constructions and the
enumeration of dicyclic groups that need individual treatment.

Generalized dicyclic groups here are those built by
:func:`~cayley_index.groups.generalized_dicyclic`: elements ``0..|A|-1`` form
the abelian subgroup A and ``x`` is element ``|A|``.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field

from .cayley import (ConnectionSet, IndexReport, NotRelativelyPrime, cayley_graph,
                     cayley_index_of, connection_set, product_mrr)
from .graphs import is_connected, is_prime
from .groups import (BudgetExceeded, Group, GroupError, abelian, direct_product,
                     generalized_dicyclic, is_abelian, quaternion8)
from .homs import groups_isomorphic, involution_classes

log = logging.getLogger(__name__)

QUASI_MAX_ORDER = 64


# -- hamiltonian 2-groups ---------------------------------------------------------

def hamiltonian(n: int) -> Group:
    """Q8 x Z2^n."""
    G = quaternion8()
    if n:
        G = direct_product(G, abelian([2] * n))
    object.__setattr__(G, "label", "Q8" + "xZ2" * n)
    return G


def quasi_automorphisms(G: Group, *, max_order: int = QUASI_MAX_ORDER,
                        max_results: int = 10_000) -> list[tuple[int, ...]]:
    """Permutations phi with phi(1) = 1 and phi(gh) in {phi(g)h, phi(g)h^-1}.

    Taking g = 1 forces phi(h) in {h, h^-1}, so phi is a choice of sign per
    inverse pair.  Domains are pruned to arc consistency over all pair
    constraints before every branch.
    """
    if G.order > max_order:
        raise BudgetExceeded(f"quasi-automorphism search limited to order {max_order}")
    n, mul, inv = G.order, G.mul, G.inv
    dom0 = [frozenset((g, inv[g])) for g in range(n)]
    out: list[tuple[int, ...]] = []

    def propagate(dom):
        dom = list(dom)
        changed = True
        while changed:
            changed = False
            for g in range(n):
                dg = dom[g]
                for h in range(1, n):
                    gh = mul[g][h]
                    allowed = set()
                    for a in dg:
                        allowed.add(mul[a][h])
                        allowed.add(mul[a][inv[h]])
                    new_gh = dom[gh] & allowed
                    if not new_gh:
                        return None
                    if new_gh != dom[gh]:
                        dom[gh] = frozenset(new_gh)
                        changed = True
                    keep = frozenset(a for a in dg
                                     if mul[a][h] in dom[gh] or mul[a][inv[h]] in dom[gh])
                    if not keep:
                        return None
                    if keep != dg:
                        dom[g] = dg = keep
                        changed = True
        return dom

    def search(dom):
        dom = propagate(dom)
        if dom is None:
            return
        open_vars = [g for g in range(n) if len(dom[g]) > 1]
        if not open_vars:
            phi = tuple(next(iter(d)) for d in dom)
            if len(set(phi)) == n and _is_quasi(G, phi):
                out.append(phi)
                if len(out) > max_results:
                    raise BudgetExceeded("too many quasi-automorphisms")
            return
        g = open_vars[0]
        for choice in sorted(dom[g]):
            nxt = list(dom)
            nxt[g] = frozenset((choice,))
            search(nxt)

    search(dom0)
    out.sort()
    return out


def _is_quasi(G: Group, phi) -> bool:
    mul, inv = G.mul, G.inv
    for g in range(G.order):
        for h in range(G.order):
            t = phi[mul[g][h]]
            if t != mul[phi[g]][h] and t != mul[phi[g]][inv[h]]:
                return False
    return phi[0] == 0


def verify_lower_bound_8(G: Group, S: ConnectionSet,
                         quasi: list[tuple[int, ...]] | None = None) -> bool:
    """True when G has at least 8 quasi-automorphisms and each is an
    automorphism of Cay(G, S); they all fix the identity, so the identity
    stabilizer then has order at least 8."""
    if S.group is not G:
        raise ValueError("connection set belongs to a different group")
    quasi = quasi_automorphisms(G) if quasi is None else quasi
    graph = cayley_graph(S)
    return len(set(quasi)) >= 8 and all(graph.is_automorphism(p) for p in quasi)


# -- generalized dicyclic groups ------------------------------------------------------

def dicyclic_parts(D: Group) -> tuple[int, int, int]:
    """(|A|, x, y) for a group built by generalized_dicyclic."""
    half = D.order // 2
    if D.order % 2 or D.names.get("x") != half:
        raise GroupError(f"{D.label} is not a generalized dicyclic group of this library")
    return half, half, D.mul[half][half]


def is_suitable_pair(D: Group, a1: int, a2: int) -> bool:
    half, _, y = dicyclic_parts(D)
    if not (0 <= a1 < half and 0 <= a2 < half):
        raise GroupError("suitable pairs are taken from the abelian subgroup")
    return all(cond(D, y, a1, a2) for cond in SUITABLE_CONDITIONS)


def _cond_distinct(D, y, a1, a2):
    return a1 not in (a2, D.m(y, a2))


def _cond_squares(D, y, a1, a2):
    return all(D.m(a, a) not in (0, y) for a in (a1, a2))


def _cond_not_square_of_other(D, y, a1, a2):
    for ai, aj in ((a1, a2), (a2, a1)):
        sq = D.m(aj, aj)
        if ai in (sq, D.m(y, sq)):
            return False
    return True


def _cond_product(D, y, a1, a2):
    return D.m(a1, a2) not in (0, y)


SUITABLE_CONDITIONS = (_cond_distinct, _cond_squares, _cond_not_square_of_other, _cond_product)


def x_coset_part(D: Group, a1: int, a2: int) -> list[int]:
    """{x, x^-1, x a1, x^-1 a1, x a2, x^-1 a2}."""
    _, x, _ = dicyclic_parts(D)
    xi = D.inv[x]
    return [x, xi, D.m(x, a1), D.m(xi, a1), D.m(x, a2), D.m(xi, a2)]


def lemma52_graph(n: int) -> ConnectionSet:
    """Connection set {z1^+-1} plus the x-coset part for (z1, z1^-2) on
    Dic(Z_2n, z1^n, x)."""
    if n < 5:
        raise ValueError("the cyclic construction needs n >= 5")
    A = abelian([2 * n])
    D = generalized_dicyclic(A, n)
    z1 = D.element("z1")
    a2 = D.power(z1, -2)
    return connection_set(D, [z1, D.inv[z1]] + x_coset_part(D, z1, a2))


def lemma53_graph(n: int) -> ConnectionSet:
    """Connection set {z1^+-1, z2} plus the x-coset part for (z1, z1^-2) on
    Dic(Z_2n x Z2, z2, x)."""
    if n < 3:
        raise ValueError("the Z_2n x Z2 construction needs n >= 3")
    A = abelian([2 * n, 2])
    D = generalized_dicyclic(A, A.element("z2"))
    z1, z2 = D.element("z1"), D.element("z2")
    a2 = D.power(z1, -2)
    return connection_set(D, [z1, D.inv[z1], z2] + x_coset_part(D, z1, a2))


# -- products with Z2 -------------------------------------------------------------------

def _small_exclusions() -> list[Group]:
    return [abelian(f) for f in ([2, 2], [2, 2, 2], [4], [4, 2], [3, 3])]


def cor44_bound(G: Group, mrr: ConnectionSet) -> IndexReport:
    """Index report for Cay(G, mrr) □ K2 as a Cayley graph on G x Z2.

    The factor must be connected and relatively prime to K2; both are
    checked rather than assumed.
    """
    if mrr.group is not G:
        raise ValueError("connection set belongs to a different group")
    for E in _small_exclusions():
        if E.order == G.order and groups_isomorphic(E, G):
            raise NotRelativelyPrime(f"{G.label} is one of the small exceptions")
    if not is_connected(cayley_graph(mrr)):
        raise NotRelativelyPrime("the given Cayley graph is disconnected")
    Z2 = abelian([2])
    k2 = connection_set(Z2, [1])
    return product_mrr(mrr, k2)


# -- the dicyclic families with index 2 ------------------------------------------------

@dataclass
class FamilyMember:
    family: str
    n: int
    k: int
    group: Group
    report: IndexReport


def family_groups(order: int) -> list[tuple[str, int, int, Group]]:
    """Members of both index-2 dicyclic families with the given order."""
    out = []
    for k in itertools.count():
        if 2 ** k > order:
            break
        # Dic(Z_2n x Z2^k, z1^n) has order 4n 2^k
        if order % (4 * 2 ** k) == 0:
            n = order // (4 * 2 ** k)
            if n >= 5:
                A = abelian([2 * n] + [2] * k)
                y = A.power(A.element("z1"), n)
                out.append(("cyclic", n, k, generalized_dicyclic(A, y)))
        # Dic(Z_2n x Z2 x Z2^k, z2) has order 8n 2^k
        if order % (8 * 2 ** k) == 0:
            n = order // (8 * 2 ** k)
            if n >= 3:
                A = abelian([2 * n, 2] + [2] * k)
                out.append(("cyclic-by-2", n, k, generalized_dicyclic(A, A.element("z2"))))
    return out


PRIME_MRR_TRIES = 2000
PRIME_MRR_SEED = 20240


def prime_mrr_search(G: Group, target: int, *, tries: int = PRIME_MRR_TRIES,
                     seed: int = PRIME_MRR_SEED) -> ConnectionSet | None:
    """Seeded random search for a connected, cartesian-prime Cayley graph on
    G with index ``target``; None when the tries run out."""
    from .search import inverse_classes

    rng = random.Random(seed)
    classes = inverse_classes(G)
    for _ in range(tries):
        S = connection_set(G, [e for cls in classes if rng.random() < 0.5 for e in cls])
        if is_prime(cayley_graph(S)) and cayley_index_of(S).cayley_index == target:
            return S
    return None


def family_member(family: str, n: int, k: int) -> FamilyMember:
    """Certified member: the direct construction for k = 0, then repeated
    products with K2.

    A product with K2 has K2 as a factor, so before each further product the
    current MRR is replaced by a prime one of the same index, found by
    :func:`prime_mrr_search`.
    """
    S = lemma52_graph(n) if family == "cyclic" else lemma53_graph(n)
    report = cayley_index_of(S)
    for step in range(k):
        S = report.connection_set
        if step:
            S = prime_mrr_search(S.group, report.cayley_index)
            if S is None:
                raise BudgetExceeded(f"no prime MRR found for {report.connection_set.group.label}")
        report = cor44_bound(S.group, S)
    return FamilyMember(family, n, k, report.connection_set.group, report)


# -- enumeration ----------------------------------------------------------------------------

@dataclass
class DicyclicTarget:
    factors: tuple[int, ...]
    y: tuple[int, ...]
    group: Group

    @property
    def spec(self) -> str:
        ys = ",".join(map(str, self.y))
        y = ys if len(self.y) == 1 else f"({ys})"
        return f"dic:ab:{','.join(map(str, self.factors))}@{y}"


@dataclass
class EnumerationLog:
    considered: list[str] = field(default_factory=list)
    dropped: dict[str, str] = field(default_factory=dict)


def _prime_powers(m: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _partitions(e: int, cap: int | None = None):
    """Partitions of e as non-increasing tuples."""
    if e == 0:
        yield ()
        return
    for first in range(min(e, cap or e), 0, -1):
        for rest in _partitions(e - first, first):
            yield (first,) + rest


def abelian_invariant_factors(m: int) -> list[tuple[int, ...]]:
    """Invariant factor lists (largest first) of the abelian groups of order m."""
    per_prime = [[[p ** k for k in part] for part in _partitions(e)]
                 for p, e in _prime_powers(m)]
    out = []
    for combo in itertools.product(*per_prime):
        width = max((len(c) for c in combo), default=0)
        facs = []
        for i in range(width):
            v = 1
            for c in combo:
                if i < len(c):
                    v *= c[i]
            facs.append(v)
        out.append(tuple(facs))
    return sorted(out, reverse=True)


def enumerate_dicyclic_targets(max_abelian_order: int = 48,
                               log_to: EnumerationLog | None = None) -> list[DicyclicTarget]:
    """Generalized dicyclic groups not settled by the general results.

    For every abelian A of even order up to ``max_abelian_order`` and one y
    per Aut(A)-class of involutions, Dic(A, y, x) is dropped when it is
    abelian, isomorphic to some Q8 x Z2^n, isomorphic to a member of the two
    index-2 families, or isomorphic to an earlier survivor.
    """
    record = log_to or EnumerationLog()
    survivors: list[DicyclicTarget] = []
    for m in range(2, max_abelian_order + 1, 2):
        for factors in abelian_invariant_factors(m):
            A = abelian(list(factors))
            for cls in involution_classes(A):
                y = cls[0]
                D = generalized_dicyclic(A, y)
                t = DicyclicTarget(factors, tuple(A.coords[y]), D)
                record.considered.append(t.spec)
                reason = _drop_reason(D, survivors)
                if reason:
                    record.dropped[t.spec] = reason
                    log.debug("drop %s: %s", t.spec, reason)
                else:
                    survivors.append(t)
    return survivors


def _drop_reason(D: Group, survivors: list[DicyclicTarget]) -> str | None:
    if is_abelian(D):
        return "abelian"
    size = D.order
    if size >= 8 and (size & (size - 1)) == 0:
        H = hamiltonian(size.bit_length() - 4)
        if groups_isomorphic(D, H):
            return f"isomorphic to {H.label}"
    for fam, n, k, F in family_groups(size):
        if groups_isomorphic(D, F):
            return f"in the {fam} family (n={n}, k={k})"
    for t in survivors:
        if t.group.order == size and groups_isomorphic(D, t.group):
            return f"isomorphic to {t.spec}"
    return None
