"""Feasibility of key access structures and the one-time-pad construction."""

from __future__ import annotations

from dataclasses import dataclass

from .gf import GFMatrix
from .model import KeyAccessStructure, KeyBlock, LinearScheme, ModelError, SideInfoGraph, derived_sets


class InfeasibleStructure(ValueError):
    def __init__(self, witness: tuple[int, int]):
        i, j = witness
        super().__init__(f"no key separates user {j} from x_{i} (pair ({i},{j}))")
        self.witness = witness


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    witness: tuple[int, int] | None = None

    def __bool__(self):
        return self.feasible


def is_feasible(graph: SideInfoGraph, ks: KeyAccessStructure) -> Feasibility:
    """Every pair (i, j) with i outside A_j needs a key held by i but not by j."""
    if ks.n != graph.n:
        raise ModelError(f"structure has length {ks.n}, graph has {graph.n} users")
    _, pairs = derived_sets(graph)
    for i, j in sorted(pairs):
        if not any(b.has(i) and not b.has(j) for b in ks.patterns):
            return Feasibility(False, (i, j))
    return Feasibility(True)


def canonical_scheme(graph: SideInfoGraph, ks: KeyAccessStructure, check: bool = True) -> LinearScheme:
    """m_i = x_i + sum of coordinate i of each key held by user i, over GF(2).

    With ``check=False`` the construction is returned even for an infeasible
    structure, where it is necessarily not private.
    """
    verdict = is_feasible(graph, ks)
    if check and not verdict:
        raise InfeasibleStructure(verdict.witness)
    N = graph.n
    G = tuple(GFMatrix.from_columns(2, [[int(r == i) for r in range(N)]], N) for i in range(N))
    keys = []
    for b in sorted(ks.patterns):
        H = GFMatrix.from_rows(2, [[int(r == c and b.has(r + 1)) for c in range(N)] for r in range(N)], N)
        keys.append(KeyBlock(b, H))
    return LinearScheme(2, 1, N, G, tuple(keys))
