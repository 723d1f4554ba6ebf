"""The claim catalog, its verifier and the report format.

Both the catalog and the report are line-delimited JSON.  The first line is
a header object naming the format and its version; every further nonblank
line is one record.  ``docs/catalog-format.md`` documents the fields.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .cayley import (ConnectionSet, cayley_graph, cayley_index_of, connection_set,
                     parse_connection_set)
from .families import cor44_bound, verify_lower_bound_8
from .groups import BudgetExceeded, CapacityError, Group, exponent
from .homs import groups_isomorphic
from .search import SearchBudget, min_cayley_index
from .syntax import ParseError, parse_group

CATALOG_FORMAT = "cayley-index-catalog"
REPORT_FORMAT = "cayley-index-report"
FORMAT_VERSION = 1

CLAIM_KINDS = ("index_upper_bound", "exact_index_exhaustive", "exact_index_by_theorem")
LOWER_BOUNDS = (None, "quasi8", "inversion", "search")
METHODS = (None, "witness_search")
WITNESS_SEARCH_TRIES = 2000
WITNESS_SEARCH_SEED = 20240


class CatalogError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    group_spec: str
    claim_kind: str
    claimed_index: int
    witness_connection_set: str | None
    provenance: str
    construction: dict | None = None
    printed_witness: str | None = None
    lower_bound: str | None = None
    method: str | None = None
    row: str | None = None

    def __post_init__(self):
        if self.claim_kind not in CLAIM_KINDS:
            raise ValueError(f"unknown claim kind {self.claim_kind!r}")
        if self.claimed_index < 1:
            raise ValueError("claimed index must be at least 1")
        if self.lower_bound not in LOWER_BOUNDS:
            raise ValueError(f"unknown lower bound method {self.lower_bound!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        has_witness = (self.witness_connection_set is not None or self.construction is not None
                       or self.method == "witness_search")
        if self.claim_kind != "exact_index_exhaustive" and not has_witness:
            raise ValueError("upper-bound claims need a witness, a construction or a search method")

    def to_json(self) -> dict:
        out = {"id": self.id, "group": self.group_spec, "claim": self.claim_kind,
               "index": self.claimed_index, "witness": self.witness_connection_set,
               "provenance": self.provenance}
        for key in ("construction", "printed_witness", "lower_bound", "method", "row"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CatalogEntry":
        return cls(id=obj["id"], group_spec=obj["group"], claim_kind=obj["claim"],
                   claimed_index=obj["index"], witness_connection_set=obj.get("witness"),
                   provenance=obj["provenance"], construction=obj.get("construction"),
                   printed_witness=obj.get("printed_witness"),
                   lower_bound=obj.get("lower_bound"), method=obj.get("method"),
                   row=obj.get("row"))


_REQUIRED = ("id", "group", "claim", "index", "provenance")


def parse_catalog(text: str) -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    header_seen = False
    ids = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CatalogError(exc.msg, lineno, exc.colno) from None
        if not isinstance(obj, dict):
            raise CatalogError("each line must be a JSON object", lineno)
        if not header_seen:
            _check_header(obj, CATALOG_FORMAT, lineno)
            header_seen = True
            continue
        missing = [k for k in _REQUIRED if k not in obj]
        if missing:
            raise CatalogError(f"missing field(s) {', '.join(missing)}", lineno)
        if not isinstance(obj["index"], int):
            raise CatalogError("index must be an integer", lineno, _column(line, '"index"'))
        try:
            entry = CatalogEntry.from_json(obj)
        except ValueError as exc:
            raise CatalogError(str(exc), lineno) from None
        if entry.id in ids:
            raise CatalogError(f"duplicate id {entry.id!r}", lineno, _column(line, '"id"'))
        ids.add(entry.id)
        entries.append(entry)
    return entries


def _check_header(obj: dict, fmt: str, lineno: int) -> None:
    if obj.get("format") != fmt:
        raise CatalogError(f"expected a {fmt} header", lineno)
    if obj.get("version") != FORMAT_VERSION:
        raise CatalogError(f"unsupported version {obj.get('version')!r}", lineno)


def _column(line: str, key: str) -> int:
    pos = line.find(key)
    return pos + 1 if pos >= 0 else 1


def load_catalog(path: str | Path | None = None) -> list[CatalogEntry]:
    """Entries of the catalog at ``path``; the shipped fixture by default."""
    if path is None:
        text = resources.files(__package__).joinpath("data/catalog.jsonl").read_text()
    else:
        text = Path(path).read_text()
    return parse_catalog(text)


def dump_catalog(entries: Iterable[CatalogEntry]) -> str:
    lines = [json.dumps({"format": CATALOG_FORMAT, "version": FORMAT_VERSION})]
    lines += [json.dumps(e.to_json()) for e in entries]
    return "\n".join(lines) + "\n"


# -- verification ----------------------------------------------------------------------

@dataclass
class SearchSummary:
    min_index: int
    witness_elements: list[int]
    candidates_examined: int
    exhaustive: bool


@dataclass
class Certificate:
    entry: CatalogEntry
    computed_index: int | None
    aut_generators: list[list[int]]
    exhaustive_search: SearchSummary | None
    passed: bool
    status: str
    detail: str = ""
    witness_elements: list[int] = field(default_factory=list)
    printed_index: int | None = None


def find_witness(G: Group, target: int, *, tries: int = WITNESS_SEARCH_TRIES,
                 seed: int = WITNESS_SEARCH_SEED) -> ConnectionSet | None:
    """Random inverse-closed sets (each class kept with probability 1/2,
    seeded) until one has Cayley index ``target``."""
    from .search import inverse_classes

    rng = random.Random(seed)
    classes = inverse_classes(G)
    for _ in range(tries):
        elems = [e for cls in classes if rng.random() < 0.5 for e in cls]
        S = connection_set(G, elems)
        if cayley_index_of(S).cayley_index == target:
            return S
    return None


def _inversion_bound(G: Group, S: ConnectionSet) -> bool:
    """Inversion is a nontrivial automorphism of Cay(G, S) fixing 1 when G
    is abelian of exponent > 2, so the index is at least 2."""
    return exponent(G) > 2 and cayley_graph(S).is_automorphism(G.inv)


def _witness_for(entry: CatalogEntry, G: Group) -> tuple[ConnectionSet | None, str]:
    if entry.construction is not None:
        c = entry.construction
        if c.get("kind") != "product_k2":
            return None, f"unknown construction {c.get('kind')!r}"
        base = parse_group(c["base_group"])
        base_set = parse_connection_set(base, c["base_witness"])
        report = cor44_bound(base, base_set)
        S = report.connection_set
        if not groups_isomorphic(S.group, G):
            return None, f"{base.label} x Z2 is not isomorphic to {G.label}"
        return S, f"built as ({c['base_group']}) x Z2"
    if entry.witness_connection_set is not None:
        return parse_connection_set(G, entry.witness_connection_set), ""
    if entry.method == "witness_search":
        S = find_witness(G, entry.claimed_index)
        if S is None:
            return None, "not certified: no witness found within the search budget"
        return S, "witness found by seeded random search"
    return None, ""


def verify_entry(entry: CatalogEntry, budget: SearchBudget | None = None) -> Certificate:
    budget = budget or SearchBudget()
    try:
        return _verify(entry, budget)
    except (CapacityError, BudgetExceeded) as exc:
        return Certificate(entry, None, [], None, False, "skipped", f"budget: {exc}")
    except ParseError as exc:
        return Certificate(entry, None, [], None, False, "fail", f"parse error: {exc}")


def _verify(entry: CatalogEntry, budget: SearchBudget) -> Certificate:
    G = parse_group(entry.group_spec)
    notes = []
    S, note = _witness_for(entry, G)
    if note:
        notes.append(note)
    if S is None and entry.claim_kind != "exact_index_exhaustive":
        status = "skipped" if note.startswith("not certified") else "fail"
        return Certificate(entry, None, [], None, False, status, "; ".join(notes))

    printed = None
    if entry.printed_witness is not None:
        printed = cayley_index_of(parse_connection_set(G, entry.printed_witness)).cayley_index
        notes.append(f"printed witness has index {printed}")

    summary = None
    ok = True
    if entry.claim_kind == "exact_index_exhaustive":
        res = min_cayley_index(G, budget)
        summary = SearchSummary(res.min_index, res.witness.elements,
                                res.candidates_examined, res.exhaustive)
        ok = res.exhaustive and res.min_index == entry.claimed_index
        notes.append(f"search minimum {res.min_index}"
                     + ("" if res.exhaustive else " (not exhaustive)"))
        if S is None:
            S = res.witness
    report = cayley_index_of(S)
    computed = report.cayley_index
    ok = ok and computed == entry.claimed_index

    if entry.claim_kind == "exact_index_by_theorem" and ok:
        lb = entry.lower_bound
        if lb == "quasi8":
            ok = verify_lower_bound_8(S.group, S)
            notes.append("quasi-automorphism lower bound 8 " + ("holds" if ok else "fails"))
        elif lb == "inversion":
            ok = _inversion_bound(S.group, S)
            notes.append("inversion lower bound 2 " + ("holds" if ok else "fails"))
        elif lb == "search":
            res = min_cayley_index(G, budget)
            summary = SearchSummary(res.min_index, res.witness.elements,
                                    res.candidates_examined, res.exhaustive)
            ok = res.exhaustive and res.min_index == entry.claimed_index
            notes.append(f"search minimum {res.min_index}")
        elif entry.claimed_index != 1:
            ok = False
            notes.append("no lower bound method for an index above 1")

    gens = [list(p) for p in report.aut.generators]
    return Certificate(entry, computed, gens, summary, ok, "pass" if ok else "fail",
                       "; ".join(notes), list(S.elements), printed)


def rebuild_graph(cert: Certificate):
    """The witness graph a certificate refers to, rebuilt from its entry."""
    entry = cert.entry
    if entry.construction is not None:
        base = parse_group(entry.construction["base_group"])
        base_set = parse_connection_set(base, entry.construction["base_witness"])
        G = cor44_bound(base, base_set).connection_set.group
    else:
        G = parse_group(entry.group_spec)
    return cayley_graph(connection_set(G, cert.witness_elements))


def recheck_certificate(cert: Certificate) -> bool:
    """Every stored automorphism generator is an automorphism of the rebuilt
    witness graph."""
    if cert.computed_index is None:
        return True
    graph = rebuild_graph(cert)
    return all(graph.is_automorphism(tuple(p)) for p in cert.aut_generators)


# -- reports --------------------------------------------------------------------------------

@dataclass
class Report:
    certificates: list[Certificate]

    @property
    def pass_count(self) -> int:
        return sum(c.status == "pass" for c in self.certificates)

    @property
    def fail_count(self) -> int:
        return sum(c.status == "fail" for c in self.certificates)

    @property
    def skipped_count(self) -> int:
        return sum(c.status == "skipped" for c in self.certificates)

    @property
    def all_passed(self) -> bool:
        return self.pass_count == len(self.certificates)


def _verify_job(args) -> Certificate:
    entry, budget = args
    return verify_entry(entry, budget)


def run_all(catalog: list[CatalogEntry], budget: SearchBudget | None = None,
            jobs: int = 1) -> Report:
    """Certificates for every entry, in catalog order."""
    budget = budget or SearchBudget()
    work = [(e, budget) for e in catalog]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            certs = list(ex.map(_verify_job, work))
    else:
        certs = [_verify_job(w) for w in work]
    return Report(certs)


def _cert_to_json(c: Certificate) -> dict:
    return {"entry": c.entry.to_json(), "computed": c.computed_index,
            "status": c.status, "pass": c.passed, "detail": c.detail,
            "witness_elements": c.witness_elements, "printed_index": c.printed_index,
            "aut_generators": c.aut_generators,
            "search": asdict(c.exhaustive_search) if c.exhaustive_search else None}


def _cert_from_json(obj: dict) -> Certificate:
    search = obj.get("search")
    return Certificate(
        entry=CatalogEntry.from_json(obj["entry"]), computed_index=obj["computed"],
        aut_generators=obj["aut_generators"],
        exhaustive_search=SearchSummary(**search) if search else None,
        passed=obj["pass"], status=obj["status"], detail=obj["detail"],
        witness_elements=obj["witness_elements"], printed_index=obj["printed_index"])


def serialize_report(report: Report) -> str:
    head = {"format": REPORT_FORMAT, "version": FORMAT_VERSION,
            "entries": len(report.certificates), "pass": report.pass_count,
            "fail": report.fail_count, "skipped": report.skipped_count}
    lines = [json.dumps(head)] + [json.dumps(_cert_to_json(c)) for c in report.certificates]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    certs = []
    header = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CatalogError(exc.msg, lineno, exc.colno) from None
        if header is None:
            _check_header(obj, REPORT_FORMAT, lineno)
            header = obj
            continue
        certs.append(_cert_from_json(obj))
    report = Report(certs)
    if header is not None and header.get("entries") != len(certs):
        raise CatalogError("entry count in header does not match the body", 1)
    return report


# -- the generated abelian slice -----------------------------------------------------------

# abelian groups with their own rows, plus the index-1 groups Z1 and Z2
_LISTED_ABELIAN = {(), (2,), (2, 2, 2), (4, 2), (2, 2, 2, 2), (4, 4), (4, 2, 2), (3, 3),
                   (3, 3, 3), (2, 2, 2, 2, 2)}


def abelian_sweep_entries(max_order: int = 32) -> list[CatalogEntry]:
    """Index-2 claims for every abelian group of order at most ``max_order``
    without a row of its own."""
    from .families import abelian_invariant_factors

    out = []
    for m in range(1, max_order + 1):
        for facs in sorted(abelian_invariant_factors(m)):
            if facs in _LISTED_ABELIAN:
                continue
            spec = "ab:" + ",".join(map(str, facs))
            elementary = all(f == 2 for f in facs)
            out.append(CatalogEntry(
                id=f"table1.abelian-sweep.{'x'.join(map(str, facs))}", group_spec=spec,
                claim_kind="exact_index_by_theorem", claimed_index=2,
                witness_connection_set=None,
                provenance="abelian groups without a row of their own (generated slice, order <= 32)",
                lower_bound="search" if elementary else "inversion",
                method="witness_search", row="table1.abelian-other"))
    return out
