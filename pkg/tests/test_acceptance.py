"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
Each criterion is evaluated once, its verdict printed, and then asserted, so
a failing criterion fails its test with the measured values in the message.
"""

from __future__ import annotations

import functools
import random
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from cayley_index.autgraph import automorphisms, canonical_form
from cayley_index.catalog import load_catalog, verify_entry
from cayley_index.cayley import cayley_graph, cayley_index_of, connection_set, parse_connection_set
from cayley_index.families import (
    enumerate_dicyclic_targets,
    hamiltonian,
    quasi_automorphisms,
    verify_lower_bound_8,
)
from cayley_index.graphs import Graph, brute_force_prime_factors, is_connected, prime_factorization
from cayley_index.homs import groups_isomorphic
from cayley_index.presentation import builtin_exceptional
from cayley_index.search import SearchBudget, inverse_classes, min_cayley_index
from cayley_index.syntax import parse_group

sys.path.insert(0, str(Path(__file__).parent))
from conftest import brute_force_aut_order, random_graph  # noqa: E402

TESTS_DIR = Path(__file__).parent


@dataclass
class Outcome:
    ok: bool
    detail: str
    seconds: float = 0.0
    graphs: list[Graph] = field(default_factory=list)


def _timed(fn):
    @functools.wraps(fn)
    @functools.lru_cache(maxsize=None)
    def wrapper() -> Outcome:
        start = time.perf_counter()
        out = fn()
        out.seconds = time.perf_counter() - start
        return out
    return wrapper


@functools.lru_cache(maxsize=None)
def _catalog():
    return load_catalog()


def _certify(prefix: str):
    entries = [e for e in _catalog() if e.id.startswith(prefix)]
    certs = [verify_entry(e) for e in entries]
    graphs = []
    for e, c in zip(entries, certs):
        if c.witness_elements:
            G = parse_group(e.group_spec)
            if e.construction is None:
                graphs.append(cayley_graph(connection_set(G, c.witness_elements)))
    return entries, certs, graphs


# -- the criteria ----------------------------------------------------------------------------

@_timed
def criterion_1() -> Outcome:
    entries, certs, graphs = _certify("table2.")
    rows: dict[str, bool] = {}
    for e, c in zip(entries, certs):
        rows[e.row] = rows.get(e.row, True) and c.passed and c.computed_index == 2
    ok = len(rows) == 8 and all(rows.values())
    return Outcome(ok, f"{sum(rows.values())}/{len(rows)} rows at index 2", graphs=graphs)


@_timed
def criterion_2() -> Outcome:
    expected = {"ab:2,2,2,2": 8, "ab:4,2,2": 8, "ab:4,4": 4, "ab:3,3,3": 12}
    entries, certs, graphs = _certify("table3.")
    got = {e.group_spec: c.computed_index for e, c in zip(entries, certs) if c.passed}
    small = all(g.n <= 27 for g in graphs)
    return Outcome(got == expected and small, f"computed {got}", graphs=graphs)


@_timed
def criterion_3() -> Outcome:
    entries, certs, graphs = _certify("table4.")
    passed = [c for c in certs if c.passed]
    indices = sorted(c.computed_index for c in passed)
    built = sum(e.construction is not None and c.passed for e, c in zip(entries, certs))
    largest = max(parse_group(e.group_spec).order for e in entries)
    ok = (len(entries) == 15 and len(passed) == 15 and indices == [2] * 12 + [4] * 3
          and built == 3 and largest == 96)
    return Outcome(ok, f"{len(passed)}/15 rows pass, indices {indices.count(2)}x2 "
                       f"{indices.count(4)}x4, {built} built from D x Z2, largest {largest}",
                   graphs=graphs)


@_timed
def criterion_4() -> Outcome:
    targets = {}
    for e in _catalog():
        G = parse_group(e.group_spec)
        if G.order <= 16:
            targets.setdefault(e.group_spec, e.claimed_index)
    targets.update({"ab:3,3": 8, "ab:3,3,3": 12, "dic:ab:6@3": 4, "dic:ab:8@4": 4,
                    "dic:ab:4,2@(0,1)": 4})
    wrong, graphs = [], []
    for spec, want in targets.items():
        res = min_cayley_index(parse_group(spec))
        if not (res.exhaustive and res.min_index == want):
            wrong.append(f"{spec}: {res.min_index} (want {want})")
        graphs.append(cayley_graph(res.witness))
    return Outcome(not wrong, f"{len(targets) - len(wrong)}/{len(targets)} groups certified"
                   + (f"; wrong: {wrong}" if wrong else ""), graphs=graphs)


@_timed
def criterion_5() -> Outcome:
    problems, graphs = [], []
    for n in range(4):
        count = len(quasi_automorphisms(hamiltonian(n)))
        if count != 8:
            problems.append(f"Q8xZ2^{n} has {count} quasi-automorphisms")
    Q8 = hamiltonian(0)
    k = len(inverse_classes(Q8))
    res = min_cayley_index(Q8, prune=False)
    if not (k == 4 and res.exhaustive and res.candidates_examined == 16 and res.min_index == 16):
        problems.append(f"Q8 search gave {res.min_index} over {res.candidates_examined} sets")
    graphs.append(cayley_graph(res.witness))
    by_id = {e.id: e for e in _catalog()}
    for ident, want, needs_bound in [("table1.hamiltonian.q8xz2", 16, False),
                                     ("table1.hamiltonian.q8xz2^2", 8, True),
                                     ("table1.hamiltonian.q8xz2^3", 8, True)]:
        e = by_id[ident]
        G = parse_group(e.group_spec)
        S = parse_connection_set(G, e.witness_connection_set)
        idx = cayley_index_of(S).cayley_index
        if idx != want:
            problems.append(f"{ident}: index {idx}")
        if needs_bound and not verify_lower_bound_8(G, S):
            problems.append(f"{ident}: lower bound 8 not certified")
        graphs.append(cayley_graph(S))
    return Outcome(not problems, "; ".join(problems) or "quasi counts 8,8,8,8; indices 16,16,8,8",
                   graphs=graphs)


@_timed
def criterion_6() -> Outcome:
    targets = enumerate_dicyclic_targets()
    distinct = all(not (a.group.order == b.group.order and groups_isomorphic(a.group, b.group))
                   for i, a in enumerate(targets) for b in targets[i + 1:])
    rows = [parse_group(e.group_spec) for e in _catalog() if e.id.startswith("table4.")]
    unmatched_rows = [R.label for R in rows
                      if not any(t.group.order == R.order and groups_isomorphic(t.group, R)
                                 for t in targets)]
    extra = [t.spec for t in targets
             if not any(t.group.order == R.order and groups_isomorphic(t.group, R) for R in rows)]
    ok = len(targets) == 15 and distinct and not unmatched_rows and not extra
    return Outcome(ok, f"{len(targets)} groups (expected 15), pairwise distinct={distinct}, "
                       f"dicyclic rows unmatched={unmatched_rows}, extra={extra}")


@_timed
def criterion_7() -> Outcome:
    want = {"H1": 16, "H2": 16, "H3": 18, "H4": 27}
    H = {name: builtin_exceptional(name) for name in want}
    orders = {name: G.order for name, G in H.items()}
    names = list(H)
    pairwise = all(not groups_isomorphic(H[a], H[b])
                   for i, a in enumerate(names) for b in names[i + 1:])
    others = [parse_group(s) for s in sorted({e.group_spec for e in _catalog()})
              if s.lower() not in {"h1", "h2", "h3", "h4"}]
    clashes = [(n, G.label) for n, Hn in H.items() for G in others
               if G.order == Hn.order and groups_isomorphic(G, Hn)]
    ok = orders == want and pairwise and not clashes
    return Outcome(ok, f"orders {orders}, pairwise distinct={pairwise}, clashes={clashes}")


@_timed
def criterion_8() -> Outcome:
    problems = []
    rng = random.Random(8)
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 7), rng.random())
        if automorphisms(g).order != brute_force_aut_order(g):
            problems.append(f"aut mismatch on {g}")
    seen, checked = set(), 0
    for crit in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5):
        for g in crit().graphs:
            if g.n > 16 or not is_connected(g):
                continue
            c = canonical_form(g)
            if c in seen:
                continue
            seen.add(c)
            key = lambda f: (f.n, f.adj)  # noqa: E731
            fast = sorted((canonical_form(f) for f in prime_factorization(g).factors), key=key)
            slow = sorted((canonical_form(f) for f in brute_force_prime_factors(g)), key=key)
            checked += 1
            if fast != slow:
                problems.append(f"factorization mismatch on a {g.n}-vertex graph")
    for spec in ["ab:2", "ab:3", "ab:4", "ab:2,2", "ab:5", "ab:6", "dih:6", "ab:7", "ab:8",
                 "ab:4,2", "ab:2,2,2", "dih:8", "q8"]:
        G = parse_group(spec)
        a = min_cayley_index(G)
        b = min_cayley_index(G, SearchBudget(), prune=False)
        if a.min_index != b.min_index:
            problems.append(f"prune disagreement on {spec}")
    return Outcome(not problems and checked > 0,
                   f"200 random graphs, {checked} factorizations, 13 groups of order <= 8"
                   + (f"; problems: {problems[:3]}" if problems else ""))


@_timed
def criterion_9() -> Outcome:
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           str(TESTS_DIR / "test_properties.py")],
                          capture_output=True, text=True, cwd=TESTS_DIR.parent, check=False)
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    return Outcome(proc.returncode == 0, f"standalone property run: {last}")


LIMITS = {1: 60, 2: 30, 3: 600, 4: 1800}
CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def evaluate(number: int) -> tuple[bool, str]:
    out = CRITERIA[number]()
    limit = LIMITS.get(number)
    in_time = limit is None or out.seconds < limit
    ok = out.ok and in_time
    timing = f"{out.seconds:.1f}s" + (f" (limit {limit}s)" if limit else "")
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {out.detail}; {timing}"
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
