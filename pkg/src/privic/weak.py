"""Structural infeasibility tests for weak privacy without keys."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .model import SideInfoGraph

NECESSARY_MAX_N = 20


class SizeError(ValueError):
    pass


def subset_condition_violation(graph: SideInfoGraph) -> tuple[int, int] | None:
    """Smallest (i, j), i != j, with i outside s_j and s_i inside A_j: user j would decode x_i."""
    for i in graph.users:
        for j in graph.users:
            if i != j and i not in graph.s(j) and graph.s(i) <= graph.a(j):
                return i, j
    return None


@dataclass(frozen=True)
class NecessaryVerdict:
    infeasible: bool
    user: int | None = None
    certificates: dict = field(default_factory=dict)  # S (sorted tuple) -> (j, k)

    @property
    def verdict(self) -> str:
        return "infeasible" if self.infeasible else "inconclusive"


def _certificate(graph: SideInfoGraph, i: int, S: frozenset[int]) -> tuple[int, int] | None:
    for j in graph.users:
        if j == i:
            continue
        a_j = graph.a(j)
        for k in sorted(S):
            if k not in a_j and S - {k} <= a_j:
                return j, k
    return None


def necessary_condition_infeasible(graph: SideInfoGraph) -> NecessaryVerdict:
    """Flags a user i for which every S with i in S inside A_i has a (j, k) exposing it.

    Only infeasibility is ever claimed; otherwise the answer is inconclusive.
    """
    if graph.n > NECESSARY_MAX_N:
        raise SizeError(f"N={graph.n} exceeds {NECESSARY_MAX_N}")
    for i in graph.users:
        rest = sorted(graph.s(i))
        certs = {}
        for size in range(len(rest) + 1):
            for extra in itertools.combinations(rest, size):
                S = frozenset(extra) | {i}
                c = _certificate(graph, i, S)
                if c is None:
                    break
                certs[tuple(sorted(S))] = c
            else:
                continue
            break
        else:
            return NecessaryVerdict(True, i, certs)
    return NecessaryVerdict(False)


def recheck_certificate(graph: SideInfoGraph, S, j: int, k: int) -> bool:
    S = frozenset(S)
    return k in S and k not in graph.a(j) and S - {k} <= graph.a(j)
