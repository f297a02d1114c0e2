"""Exhaustive search over scalar (n = 1) linear private codes.

Vectors of GF(q)^r are indexed by integers and subspaces are bit masks over
those indices, so span membership and joins are single integer operations.
Only column spans enter the validity conditions, which is what makes the
canonical form below lossless: message columns are taken up to a nonzero
scalar and each key block is replaced by the subspace its columns span.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from ..gf import GFMatrix, is_prime
from ..model import KeyBlock, KeyPattern, LinearScheme, ModelError, SideInfoGraph
from ..verifier import verify_private

SEARCH_LIMIT = 2 ** 32
MAX_VECTORS = 1 << 12


class SearchSpaceError(ValueError):
    pass


@dataclass(frozen=True)
class SearchResult:
    scheme: LinearScheme | None
    nodes: int  # partial assignments visited
    space: int  # size of the enumerated space before pruning

    @property
    def found(self) -> bool:
        return self.scheme is not None


class _Field:
    def __init__(self, q: int, r: int):
        if q ** r > MAX_VECTORS:
            raise SearchSpaceError(f"GF({q})^{r} has more than {MAX_VECTORS} vectors")
        self.q, self.r = q, r
        self.size = q ** r
        self.vecs = [tuple(v // q ** k % q for k in range(r)) for v in range(self.size)]
        self._join: dict[tuple[int, int], int] = {}

    def index(self, vec) -> int:
        return sum(c * self.q ** k for k, c in enumerate(vec))

    def add(self, a: int, b: int, c: int = 1) -> int:
        va, vb = self.vecs[a], self.vecs[b]
        return self.index([(x + c * y) % self.q for x, y in zip(va, vb)])

    def join(self, span: int, v: int) -> int:
        """Span mask of ``span`` plus vector ``v``."""
        if span >> v & 1:
            return span
        key = (span, v)
        out = self._join.get(key)
        if out is None:
            members = [u for u in range(self.size) if span >> u & 1]
            out = 0
            for u in members:
                for c in range(self.q):
                    out |= 1 << self.add(u, v, c)
            self._join[key] = out
        return out

    def span_of(self, vectors) -> int:
        s = 1  # the zero subspace
        for v in vectors:
            s = self.join(s, v)
        return s

    def normalized(self, v: int) -> bool:
        vec = self.vecs[v]
        first = next((c for c in vec if c), 0)
        return first == 1

    def subspaces(self, max_dim: int) -> list[tuple[int, tuple[int, ...]]]:
        """(span mask, RREF basis) for every subspace of dimension <= max_dim."""
        q, r = self.q, self.r
        out = []
        for d in range(min(max_dim, r) + 1):
            for pivots in itertools.combinations(range(r), d):
                free = [(row, col) for row, p in enumerate(pivots) for col in range(p + 1, r) if col not in pivots]
                for fill in itertools.product(range(q), repeat=len(free)):
                    basis = [[0] * r for _ in range(d)]
                    for row, p in enumerate(pivots):
                        basis[row][p] = 1
                    for (row, col), v in zip(free, fill):
                        basis[row][col] = v
                    idx = tuple(self.index(b) for b in basis)
                    out.append((self.span_of(idx), idx))
        return out


def _key_options(field: _Field, cap: int, pruned: bool) -> list[tuple[int, tuple[int, ...]]]:
    if pruned:
        return field.subspaces(cap)
    return [(field.span_of(cols), cols) for cols in itertools.product(range(field.size), repeat=cap)]


def scalar_search(graph: SideInfoGraph, q: int, r: int, key_caps: Mapping[str, int],
                  pruned: bool = True, limit: int = SEARCH_LIMIT) -> SearchResult:
    """First valid scalar code with r transmissions and key widths within ``key_caps``.

    Message columns are tried before key blocks, users and patterns in sorted
    order. Decoding only gets harder as hidden keys are added, so it is checked
    after every assignment; privacy is checked once a user's hidden keys are all
    fixed. A result of None means the whole space was exhausted.
    """
    if not is_prime(q):
        raise ModelError(f"field size {q} is not prime")
    if r < 0:
        raise ModelError("r must be non-negative")
    N = graph.n
    caps = {}
    for b, w in key_caps.items():
        b = KeyPattern(b)
        if len(b) != N:
            raise ModelError(f"pattern {b} does not match N={N}")
        if int(w) < 0:
            raise ModelError(f"negative cap for {b}")
        if int(w):
            caps[b] = int(w)
    patterns = sorted(caps)
    if r == 0:
        return SearchResult(None, 0, 0)
    field = _Field(q, r)
    g_opts = [v for v in range(1, field.size) if not pruned or field.normalized(v)]
    k_opts = [_key_options(field, caps[b], pruned) for b in patterns]
    space = len(g_opts) ** N
    for opts in k_opts:
        space *= len(opts)
    if space > limit:
        raise SearchSpaceError(f"search space {space} exceeds {limit}")

    unknown = {i: graph.unknown(i) for i in graph.users}
    hidden_of = {i: [k for k, b in enumerate(patterns) if not b.has(i)] for i in graph.users}
    last_hidden = {i: (max(hidden_of[i]) if hidden_of[i] else -1) for i in graph.users}
    g = [0] * N
    chosen: list[tuple[int, tuple[int, ...]]] = [(1, ())] * len(patterns)
    nodes = 0

    def decodes(i: int, hidden_span: int) -> bool:
        s = hidden_span
        for j in unknown[i]:
            s = field.join(s, g[j - 1])
        return not s >> g[i - 1] & 1

    def private(i: int, hidden_span: int) -> bool:
        return all(hidden_span >> g[j - 1] & 1 for j in unknown[i])

    def keys_rec(k: int, hidden: list[int]) -> bool:
        nonlocal nodes
        if k == len(patterns):
            return True
        b = patterns[k]
        for span, basis in k_opts[k]:
            nodes += 1
            new = list(hidden)
            ok = True
            for i in graph.users:
                if b.has(i):
                    continue
                new[i - 1] = _join_spans(field, hidden[i - 1], basis)
                if not decodes(i, new[i - 1]):
                    ok = False
                    break
                if last_hidden[i] == k and not private(i, new[i - 1]):
                    ok = False
                    break
            if ok:
                chosen[k] = (span, basis)
                if keys_rec(k + 1, new):
                    return True
        return False

    def g_rec(i: int) -> bool:
        nonlocal nodes
        if i > N:
            empty = [1] * N
            for u in graph.users:
                if not decodes(u, 1):
                    return False
                if last_hidden[u] == -1 and not private(u, 1):
                    return False
            return keys_rec(0, empty)
        for v in g_opts:
            nodes += 1
            g[i - 1] = v
            if g_rec(i + 1):
                return True
        return False

    if not g_rec(1):
        return SearchResult(None, nodes, space)
    G = tuple(GFMatrix.from_columns(q, [field.vecs[g[i]]], r) for i in range(N))
    keys = []
    for b, (_, basis) in zip(patterns, chosen):
        cols = [field.vecs[v] for v in basis]
        if not cols:
            continue
        keys.append(KeyBlock(b, GFMatrix.from_columns(q, cols, r)))
    scheme = LinearScheme(q, 1, r, G, tuple(keys))
    if not verify_private(scheme, graph).ok:
        raise AssertionError("search accepted a scheme the verifier rejects")
    return SearchResult(scheme, nodes, space)


def _join_spans(field: _Field, span: int, basis) -> int:
    for v in basis:
        span = field.join(span, v)
    return span
