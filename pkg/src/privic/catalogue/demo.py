"""Four users where vector codes beat every scalar code with the same keys."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import RateTuple
from ..oracle import oracle_check_private
from ..verifier import Verdict, scheme_rate, verify_private
from .instances import GAP4, GAP4_CAPS, GAP4_RATE, gap4_scheme
from .search import SearchResult, scalar_search


@dataclass
class GapReport:
    vector_verdict: Verdict
    vector_oracle_ok: bool
    vector_rate: RateTuple
    rate_matches: bool
    scalar: dict[int, SearchResult]  # field size -> rate-2 search result
    relaxed: SearchResult | None = None  # r = 3 with every cap raised to 2

    @property
    def ok(self) -> bool:
        return (self.vector_verdict.ok and self.vector_oracle_ok and self.rate_matches
                and not any(res.found for res in self.scalar.values()))


def four_user_gap_demo(q3: bool = False, relaxed: bool = False) -> GapReport:
    scheme = gap4_scheme()
    verdict = verify_private(scheme, GAP4)
    oracle_ok = oracle_check_private(scheme, GAP4).ok
    rate = scheme_rate(scheme)
    scalar = {q: scalar_search(GAP4, q, 2, GAP4_CAPS) for q in ((2, 3) if q3 else (2,))}
    # the relaxed space is about 2^35 but a solution sits early in the search order
    extra = scalar_search(GAP4, 2, 3, {b: 2 for b in GAP4_CAPS}, limit=2 ** 36) if relaxed else None
    return GapReport(verdict, oracle_ok, rate, rate == GAP4_RATE, scalar, extra)
