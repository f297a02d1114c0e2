"""Conflict graphs, fold colorings, multicast schemes and secure clique covers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .gf import GFMatrix
from .lp import LPProblem, lp_solve
from .model import LinearScheme, MulticastScheme, Session, SideInfoGraph


class ColoringError(ValueError):
    pass


class SizeError(ValueError):
    pass


FRACTIONAL_MAX_N = 20
FOLD_MAX_N = 12
COVER_MAX_N = 12


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        edges = frozenset(frozenset(e) for e in self.edges)
        for e in edges:
            if len(e) != 2:
                raise ColoringError(f"bad edge {sorted(e)} (self-loops are not allowed)")
            if not all(1 <= v <= self.n for v in e):
                raise ColoringError(f"edge {sorted(e)} outside 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def of(cls, n: int, edges) -> "UndirectedGraph":
        return cls(n, frozenset(frozenset(e) for e in edges))

    @classmethod
    def complete(cls, n: int) -> "UndirectedGraph":
        return cls.of(n, itertools.combinations(range(1, n + 1), 2))

    @classmethod
    def cycle(cls, n: int) -> "UndirectedGraph":
        return cls.of(n, [(i, i % n + 1) for i in range(1, n + 1)])

    def adjacent(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbours(self, v: int) -> frozenset[int]:
        return frozenset(u for e in self.edges if v in e for u in e if u != v)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)


def conflict_graph(graph: SideInfoGraph) -> UndirectedGraph:
    """Edge {i, j} unless i and j each hold the other's message."""
    return UndirectedGraph.of(graph.n, [(i, j) for i, j in itertools.combinations(graph.users, 2)
                                        if not (i in graph.s(j) and j in graph.s(i))])


def maximal_independent_sets(ug: UndirectedGraph) -> list[frozenset[int]]:
    """Bron-Kerbosch with pivoting on the complement graph, sorted output."""
    n = ug.n
    nbr = [0] * (n + 1)
    for e in ug.edges:
        u, v = tuple(e)
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    every = sum(1 << v for v in range(1, n + 1))
    comp = [every & ~nbr[v] & ~(1 << v) for v in range(n + 1)]
    out = []

    def bk(R, P, X):
        if not P and not X:
            out.append(frozenset(v for v in range(1, n + 1) if R >> v & 1))
            return
        pivot = (P | X).bit_length() - 1
        cand = P & ~comp[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            bk(R | low, P & comp[v], X & comp[v])
            P &= ~low
            X |= low
            cand &= ~low

    bk(0, every, 0)
    return sorted(out, key=lambda s: sorted(s))


def fractional_chromatic(ug: UndirectedGraph) -> tuple[Fraction, dict[frozenset[int], Fraction]]:
    """Exact LP over maximal independent sets: min sum w_I with every vertex covered once."""
    if ug.n > FRACTIONAL_MAX_N:
        raise SizeError(f"N={ug.n} exceeds {FRACTIONAL_MAX_N} for independent-set enumeration")
    sets = maximal_independent_sets(ug)
    p = LPProblem()
    for k in range(len(sets)):
        p.add_variable(k)
    p.objective = {k: Fraction(1) for k in range(len(sets))}
    for v in range(1, ug.n + 1):
        p.add({k: 1 for k, s in enumerate(sets) if v in s}, ">=", 1, f"cover({v})")
    res = lp_solve(p)
    weights = {sets[k]: w for k, w in res.point.items() if w}
    return res.value, weights


# ---------------------------------------------------------------- fold colorings

@dataclass(frozen=True)
class FoldColoring:
    b: int
    L: int
    assignment: tuple[frozenset[int], ...]  # vertex v -> assignment[v - 1]

    def colors(self, v: int) -> frozenset[int]:
        return self.assignment[v - 1]

    def validate(self, ug: UndirectedGraph):
        if len(self.assignment) != ug.n:
            raise ColoringError(f"coloring covers {len(self.assignment)} vertices, graph has {ug.n}")
        for v, cs in enumerate(self.assignment, start=1):
            if len(cs) != self.b:
                raise ColoringError(f"vertex {v} has {len(cs)} colors, expected {self.b}")
            if not all(1 <= c <= self.L for c in cs):
                raise ColoringError(f"vertex {v} uses a color outside 1..{self.L}")
        for e in ug.sorted_edges():
            u, v = e
            if self.colors(u) & self.colors(v):
                raise ColoringError(f"adjacent vertices {u} and {v} share a color")


def _fold_search(ug: UndirectedGraph, b: int, L: int) -> FoldColoring | None:
    n = ug.n
    order = sorted(range(1, n + 1), key=lambda v: (-len(ug.neighbours(v)), v))
    nbrs = {v: ug.neighbours(v) for v in order}
    assign: dict[int, frozenset[int]] = {}

    def rec(pos: int, used: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        blocked = set()
        for u in nbrs[v]:
            blocked |= assign.get(u, frozenset())
        old = [c for c in range(1, used + 1) if c not in blocked]
        fresh = L - used
        # fresh colors are interchangeable: only the lowest t of them are tried
        for t in range(min(b, fresh), -1, -1):
            if b - t > len(old):
                continue
            new = frozenset(range(used + 1, used + t + 1))
            for keep in itertools.combinations(old, b - t):
                assign[v] = frozenset(keep) | new
                if rec(pos + 1, used + t):
                    return True
                del assign[v]
        return False

    if rec(0, 0):
        return FoldColoring(b, L, tuple(assign[v] for v in range(1, n + 1)))
    return None


def b_fold_chromatic(ug: UndirectedGraph, b: int) -> tuple[int, FoldColoring]:
    """Smallest palette admitting a b-fold coloring, by exhaustive backtracking."""
    if b < 1:
        raise ColoringError("fold must be at least 1")
    if ug.n > FOLD_MAX_N:
        raise SizeError(f"N={ug.n} exceeds {FOLD_MAX_N} for exact fold coloring")
    if ug.n == 0:
        return 0, FoldColoring(b, 0, ())
    L = b
    while True:
        found = _fold_search(ug, b, L)
        if found is not None:
            found.validate(ug)
            return L, found
        L += 1


# ---------------------------------------------------------------- multicast

@dataclass(frozen=True)
class SessionCount:
    kappa: Fraction
    b: int
    L: int
    coloring: FoldColoring


def multicast_min_sessions(graph: SideInfoGraph) -> SessionCount:
    """kappa = fractional chromatic number of the conflict graph, with a realizing (b, L) coloring."""
    ug = conflict_graph(graph)
    kappa, weights = fractional_chromatic(ug)
    b = 1
    for w in weights.values():
        b = b * w.denominator // math.gcd(b, w.denominator)
    palette: dict[int, list[int]] = {v: [] for v in graph.users}
    nxt = 1
    for s in sorted(weights, key=lambda s: sorted(s)):
        count = int(weights[s] * b)
        block = list(range(nxt, nxt + count))
        nxt += count
        for v in s:
            palette[v].extend(block)
    L = nxt - 1
    coloring = FoldColoring(b, L, tuple(frozenset(palette[v][:b]) for v in graph.users))
    coloring.validate(ug)
    return SessionCount(kappa, b, L, coloring)


def multicast_scheme_from_coloring(graph: SideInfoGraph, coloring: FoldColoring) -> MulticastScheme:
    """One session per used color k: the sum of x_i^(position of k in C_i) over i holding k."""
    coloring.validate(conflict_graph(graph))
    used = sorted(set().union(*coloring.assignment)) if coloring.assignment else []
    sessions = []
    for k in used:
        holders = [i for i in graph.users if k in coloring.colors(i)]
        coeffs = tuple(((i, sorted(coloring.colors(i)).index(k) + 1), 1) for i in holders)
        sessions.append(Session(frozenset(holders), coeffs))
    return MulticastScheme(2, coloring.b, graph.n, tuple(sessions))


# ---------------------------------------------------------------- secure clique covers

def _mutual(graph: SideInfoGraph, i: int, j: int) -> bool:
    return i in graph.s(j) and j in graph.s(i)


def is_secure_block(graph: SideInfoGraph, block: frozenset[int]) -> bool:
    need = len(block) - 1
    return all(len(graph.s(v) & block) != need for v in graph.users if v not in block)


def check_cover(graph: SideInfoGraph, cover) -> tuple[frozenset[int], ...]:
    blocks = tuple(frozenset(c) for c in cover)
    seen: set[int] = set()
    for c in blocks:
        if not c:
            raise ColoringError("empty block")
        if seen & c:
            raise ColoringError("blocks overlap")
        seen |= c
    if seen != set(graph.users):
        raise ColoringError("blocks do not cover every user")
    for c in blocks:
        for i, j in itertools.combinations(sorted(c), 2):
            if not _mutual(graph, i, j):
                raise ColoringError(f"block {sorted(c)} is not a mutual clique ({i}, {j})")
        if not is_secure_block(graph, c):
            raise ColoringError(f"block {sorted(c)} is not secure")
    return blocks


def _cover_key(blocks) -> tuple:
    return tuple(sorted(tuple(sorted(c)) for c in blocks))


def secure_clique_cover(graph: SideInfoGraph) -> tuple[tuple[int, ...], ...] | None:
    """A partition into secure mutual cliques, or None after exhausting every partition.

    Among covers the one with the fewest blocks wins, then the lexicographically
    smallest list of sorted blocks.
    """
    N = graph.n
    if N > COVER_MAX_N:
        raise SizeError(f"N={N} exceeds {COVER_MAX_N} for partition search")
    best = None
    blocks: list[set[int]] = []

    def rec(v: int):
        nonlocal best
        if best is not None and len(blocks) > len(best):
            return
        if v > N:
            if all(is_secure_block(graph, frozenset(c)) for c in blocks):
                key = _cover_key(blocks)
                if best is None or (len(key), key) < (len(best), best):
                    best = key
            return
        for c in blocks:
            if all(_mutual(graph, v, u) for u in c):
                c.add(v)
                rec(v + 1)
                c.discard(v)
        blocks.append({v})
        rec(v + 1)
        blocks.pop()

    rec(1)
    return best


def scheme_from_secure_cover(graph: SideInfoGraph, cover) -> LinearScheme:
    """Keyless GF(2) scheme sending the sum of each block's messages."""
    blocks = check_cover(graph, cover)
    r = len(blocks)
    G = []
    for i in graph.users:
        t = next(k for k, c in enumerate(blocks) if i in c)
        G.append(GFMatrix.from_columns(2, [[int(k == t) for k in range(r)]], r))
    return LinearScheme(2, 1, r, tuple(G), ())
