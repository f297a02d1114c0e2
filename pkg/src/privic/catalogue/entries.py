"""Rate-region catalogue for all two- and three-user problems, and its checker."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from ..feasibility import is_feasible
from ..lp import LPError, LPProblem, lp_check_point, vertex_rank_check
from ..model import (KeyAccessStructure, LinearScheme, ModelError, RateTuple, SideInfoGraph,
                     all_patterns, graph_from_obj, parse_rational, rate_tuple_from_obj, scheme_from_obj)
from ..oracle import oracle_check_private
from ..verifier import scheme_rate, verify_private

STRUCTURE_LIMIT = 10 ** 6


class SizeError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogueVertex:
    rate: RateTuple
    scheme: LinearScheme
    sums: tuple[str, ...] = ()


@dataclass
class CatalogueEntry:
    id: str
    graph: SideInfoGraph
    region: LPProblem
    vertices: list[CatalogueVertex]
    printed_rows: int

    @property
    def n(self) -> int:
        return self.graph.n

    def point(self, rates: RateTuple) -> dict:
        """LP variable assignment for ``rates``."""
        return {"R": rates.R, **{f"R_{b}": rates.rate(b) for b in all_patterns(self.n)}}

    @property
    def dim(self) -> int:
        return len(self.region.variables)


def region_problem(n: int, rows, nonneg: bool) -> LPProblem:
    p = LPProblem()
    p.add_variable("R", lower=None)
    for b in all_patterns(n):
        p.add_variable(f"R_{b}", lower=0 if nonneg else None)
    for k, row in enumerate(rows, start=1):
        coeffs = {v: parse_rational(c) for v, c in row["coeffs"].items()}
        for v in coeffs:
            if v not in p.lower:
                raise ModelError(f"region row {k} uses unknown variable {v}")
        name = " + ".join(coeffs) + f" >= {row['rhs']}"
        p.add(coeffs, ">=", parse_rational(row["rhs"]), name)
    return p


def entry_from_obj(obj) -> CatalogueEntry:
    graph = graph_from_obj({"n": obj["n"], "side_info": obj["side_info"]})
    region = region_problem(graph.n, obj["region"], obj.get("nonneg", False))
    vertices = [CatalogueVertex(rate_tuple_from_obj(v["rate"]), scheme_from_obj(v["scheme"]),
                                tuple(v.get("sums", ())))
                for v in obj["vertices"]]
    return CatalogueEntry(obj["id"], graph, region, vertices, obj["printed_rows"])


@lru_cache(maxsize=1)
def _raw() -> str:
    return resources.files("privic.catalogue").joinpath("data/catalogue.json").read_text()


def catalogue_entries() -> list[CatalogueEntry]:
    """Fresh entry objects: one focus entry, three for N = 2, sixteen for N = 3."""
    return [entry_from_obj(e) for e in json.loads(_raw())["entries"]]


def catalogue_entry(entry_id: str) -> CatalogueEntry:
    for e in catalogue_entries():
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class Failure:
    entry: str
    vertex: int  # 0-based position in the entry's vertex list
    rates: str
    check: str
    detail: str


@dataclass
class CatalogueReport:
    entries: int = 0
    vertices: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_obj(self) -> dict:
        return {"entries": self.entries, "vertices": self.vertices, "ok": self.ok,
                "failures": [f.__dict__ for f in self.failures]}


def _vector_text(rates: RateTuple, n: int) -> str:
    return "(" + ", ".join(str(v) for v in rates.as_vector(n)) + ")"


def verify_catalogue(entries: list[CatalogueEntry] | None = None, oracle: bool = True) -> CatalogueReport:
    """Checks every vertex: verifier, oracle, scheme rate, region membership, vertex rank."""
    entries = catalogue_entries() if entries is None else entries
    report = CatalogueReport(entries=len(entries))
    for e in entries:
        dim = e.dim
        for k, v in enumerate(e.vertices):
            report.vertices += 1
            tag = _vector_text(v.rate, e.n)

            def fail(check, detail):
                report.failures.append(Failure(e.id, k, tag, check, detail))

            verdict = verify_private(v.scheme, e.graph)
            if not verdict.ok:
                fail("verify_private", f"{verdict.status} at user {verdict.user}")
            if oracle:
                rep = oracle_check_private(v.scheme, e.graph)
                if not rep.ok:
                    leaky = sorted(i for i, leak in rep.leakage.items() if leak is not None)
                    fail("oracle", f"user {rep.failing_user} cannot decode" if not rep.decodable
                         else f"leakage at users {leaky}")
            got = scheme_rate(v.scheme)
            if got != v.rate:
                fail("scheme_rate", f"scheme achieves {_vector_text(got, e.n)}")
            ok, violated, _ = lp_check_point(e.region, e.point(v.rate))
            if not ok:
                fail("region", "violates " + "; ".join(violated))
                continue
            try:
                if not vertex_rank_check(e.region, e.point(v.rate), dim):
                    fail("vertex_rank", f"tight rows do not reach rank {dim}")
            except LPError as exc:
                fail("vertex_rank", str(exc))
    return report


# ---------------------------------------------------------------- key access structures

def feasible_structures_of_size(graph: SideInfoGraph, size: int) -> list[KeyAccessStructure]:
    """Every feasible structure with exactly ``size`` patterns, sorted by pattern list."""
    pats = all_patterns(graph.n)
    if size < 0 or size > len(pats):
        return []
    if math.comb(len(pats), size) > STRUCTURE_LIMIT:
        raise SizeError(f"{math.comb(len(pats), size)} candidate structures exceed {STRUCTURE_LIMIT}")
    out = []
    for combo in itertools.combinations(sorted(pats), size):
        ks = KeyAccessStructure(graph.n, frozenset(combo))
        if is_feasible(graph, ks):
            out.append(ks)
    return out
