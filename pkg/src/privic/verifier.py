"""Algebraic validity tests for linear private and weak-private codes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gf import rank_of_columns
from .model import LinearScheme, RateTuple, SideInfoGraph


class VerifierError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    status: str  # "ok", "decode_violation" or "privacy_violation"
    user: int | None = None
    coordinate: int | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_obj(self) -> dict:
        out = {"status": self.status, "reason": self.reason}
        if self.user is not None:
            out["user"] = self.user
        if self.coordinate is not None:
            out["coordinate"] = self.coordinate
        return out


OK = Verdict("ok", reason="all decoding and privacy conditions hold")


def _check_n(scheme: LinearScheme, graph: SideInfoGraph):
    if scheme.N != graph.n:
        raise VerifierError(f"scheme has {scheme.N} users, graph has {graph.n}")


def _first_dependent_column(cols, interference, r, q) -> int | None:
    """1-based index of the first column of ``cols`` lying in the span of
    ``interference`` plus the columns before it, or None if they are independent
    modulo the interference."""
    basis = list(interference)
    rank = rank_of_columns(basis, r, q)
    for k, c in enumerate(cols, start=1):
        basis.append(c)
        new = rank_of_columns(basis, r, q)
        if new == rank:
            return k
        rank = new
    return None


def verify_private(scheme: LinearScheme, graph: SideInfoGraph) -> Verdict:
    """Privacy then decoding conditions, user by user; the first failure is reported.

    Decoding asks that the columns of G_i stay linearly independent modulo the
    span of the unknown messages' columns and the hidden keys' columns; for n = 1
    this is just G_i outside that span.
    """
    _check_n(scheme, graph)
    q, r = scheme.q, scheme.r
    for i in graph.users:
        unknown = [c for j in graph.unknown(i) for c in scheme.G[j - 1].columns()]
        hidden = [c for kb in scheme.keys if not kb.pattern.has(i) for c in kb.H.columns()]
        if rank_of_columns(hidden + unknown, r, q) != rank_of_columns(hidden, r, q):
            return Verdict("privacy_violation", i, None,
                           f"unknown messages at user {i} are not covered by keys hidden from user {i}")
        k = _first_dependent_column(scheme.G[i - 1].columns(), unknown + hidden, r, q)
        if k is not None:
            return Verdict("decode_violation", i, k,
                           f"column {k} of G_{i} is spanned by interference at user {i}")
    return OK


def verify_weak_private(scheme: LinearScheme, graph: SideInfoGraph) -> Verdict:
    """Weak privacy: each unknown G_j must be spanned by the other unknown columns."""
    _check_n(scheme, graph)
    if any(kb.width for kb in scheme.keys):
        raise VerifierError("weak-privacy schemes carry no keys")
    q, r = scheme.q, scheme.r
    for i in graph.users:
        unk = graph.unknown(i)
        cols = {j: scheme.G[j - 1].columns() for j in unk}
        interference = [c for j in unk for c in cols[j]]
        for j in unk:
            others = [c for l in unk if l != j for c in cols[l]]
            if rank_of_columns(others + cols[j], r, q) != rank_of_columns(others, r, q):
                return Verdict("privacy_violation", i, None,
                               f"user {i} learns a function of x_{j} alone")
        k = _first_dependent_column(scheme.G[i - 1].columns(), interference, r, q)
        if k is not None:
            return Verdict("decode_violation", i, k,
                           f"column {k} of G_{i} is spanned by unknown messages at user {i}")
    return OK


def scheme_rate(scheme: LinearScheme) -> RateTuple:
    n = scheme.n
    return RateTuple.of(Fraction(scheme.r, n), {kb.pattern: Fraction(kb.width, n) for kb in scheme.keys})
