"""Command-line interface: ``cayley-index <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 a search or
verification was cut short by its budget.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .catalog import load_catalog, run_all, serialize_report
from .cayley import cayley_index_of, parse_connection_set
from .graphs import GraphError, from_graph6, prime_factorization, to_graph6
from .groups import BudgetExceeded, GroupError
from .search import SearchBudget, min_cayley_index
from .syntax import ParseError, parse_group

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _budget(args) -> SearchBudget:
    if getattr(args, "budget", None) is not None:
        return SearchBudget(max_candidates=args.budget, parallel_width=getattr(args, "jobs", 1))
    return SearchBudget(parallel_width=getattr(args, "jobs", 1))


def cmd_verify(args) -> int:
    entries = load_catalog(args.catalog)
    if args.only:
        entries = [e for e in entries if args.only in e.id]
    report = run_all(entries, _budget(args), jobs=args.jobs)
    for c in report.certificates:
        computed = "-" if c.computed_index is None else c.computed_index
        print(f"{c.status.upper():7} {c.entry.id:40} claimed={c.entry.claimed_index} "
              f"computed={computed}" + (f"  ({c.detail})" if c.detail else ""))
    print(f"entries={len(report.certificates)} pass={report.pass_count} "
          f"fail={report.fail_count} skipped={report.skipped_count}")
    if args.out:
        Path(args.out).write_text(serialize_report(report))
    if report.fail_count:
        return EXIT_FAIL
    return EXIT_OK if report.all_passed else EXIT_BUDGET


def cmd_index(args) -> int:
    G = parse_group(args.group)
    S = parse_connection_set(G, args.conn, close=args.close)
    r = cayley_index_of(S)
    print(f"group={G.label} order={G.order} degree={len(S)}")
    print(f"aut_order={r.aut_order} stabilizer={r.stabilizer_of_identity_order} "
          f"cayley_index={r.cayley_index}")
    print(f"graph6={to_graph6(r.graph)}")
    return EXIT_OK


def cmd_search(args) -> int:
    G = parse_group(args.group)

    def progress(examined: int, best: int) -> None:
        print(f"PROGRESS {examined} {best}", flush=True)

    res = min_cayley_index(G, _budget(args), prune=not args.no_prune,
                           progress=progress if args.progress else None)
    print(f"group={G.label} min_index={res.min_index} exhaustive={str(res.exhaustive).lower()} "
          f"candidates={res.candidates_examined}")
    print(f"witness={res.witness.describe()}")
    return EXIT_OK if res.exhaustive else EXIT_BUDGET


def cmd_factor(args) -> int:
    text = Path(args.graph).read_text().strip() if args.graph != "-" else sys.stdin.read().strip()
    g = from_graph6(text.splitlines()[0])
    fz = prime_factorization(g)
    print(f"vertices={g.n} factors={len(fz.factors)}")
    for f in fz.factors:
        print(f"{f.n} {to_graph6(f)}")
    return EXIT_OK


def cmd_quasi(args) -> int:
    from .families import quasi_automorphisms

    G = parse_group(args.group)
    qs = quasi_automorphisms(G)
    print(f"group={G.label} quasi_automorphisms={len(qs)}")
    if args.list:
        for q in qs:
            print(" ".join(map(str, q)))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from .families import EnumerationLog, enumerate_dicyclic_targets

    log = EnumerationLog()
    targets = enumerate_dicyclic_targets(log_to=log)
    for t in targets:
        print(f"{t.spec} order={t.group.order}")
    if args.verbose:
        for spec, reason in log.dropped.items():
            print(f"dropped {spec}: {reason}")
    print(f"count={len(targets)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cayley-index",
                                description="Cayley indices of small finite groups.")
    p.add_argument("-v", "--verbose-log", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify the claim catalog")
    v.add_argument("--catalog", help="catalog file (default: shipped fixture)")
    v.add_argument("--out", help="write the report here")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--budget", type=int, help="max candidates per exhaustive search")
    v.add_argument("--only", help="verify only entries whose id contains this text")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("index", help="Cayley index of one Cayley graph")
    i.add_argument("--group", required=True)
    i.add_argument("--conn", required=True, help="connection set, e.g. 'z1^pm1, x^pm1'")
    i.add_argument("--close", action="store_true", help="add missing inverses")
    i.set_defaults(func=cmd_index)

    s = sub.add_parser("search", help="exhaustive minimum Cayley index")
    s.add_argument("--group", required=True)
    s.add_argument("--budget", type=int, help="max candidates (default from environment)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-prune", action="store_true", help="evaluate every class subset")
    s.add_argument("--progress", action="store_true", help="emit PROGRESS lines")
    s.set_defaults(func=cmd_search)

    f = sub.add_parser("factor", help="cartesian prime factorization of a graph6 graph")
    f.add_argument("--graph", required=True, help="graph6 file, or - for stdin")
    f.set_defaults(func=cmd_factor)

    q = sub.add_parser("quasi", help="count quasi-automorphisms")
    q.add_argument("--group", required=True)
    q.add_argument("--list", action="store_true")
    q.set_defaults(func=cmd_quasi)

    e = sub.add_parser("enumerate-dicyclic", help="dicyclic groups needing individual treatment")
    e.add_argument("--verbose", action="store_true", help="show why candidates were dropped")
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose_log else logging.WARNING)
    try:
        return args.func(args)
    except (ParseError, GroupError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
