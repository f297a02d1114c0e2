"""Rate bounds: MAIS, key-rate LPs, the sum-key-rate bracket and the
polymatroidal outer bound."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .lp import LPProblem, LPResult, lp_solve
from .model import KeyPattern, ModelError, RateTuple, SideInfoGraph, all_patterns, derived_sets


class SizeError(ValueError):
    pass


# ---------------------------------------------------------------- MAIS

MAIS_MAX_N = 24


def _acyclic(mask: int, out: list[int]) -> bool:
    """Peel vertices with no out-neighbour left inside ``mask``."""
    alive = mask
    changed = True
    while alive and changed:
        changed = False
        v = alive
        while v:
            low = v & -v
            i = low.bit_length() - 1
            if not out[i] & alive:
                alive &= ~low
                changed = True
            v &= v - 1
    return not alive


def mais(graph: SideInfoGraph) -> tuple[int, tuple[int, ...]]:
    """Size of a maximum acyclic induced subgraph and the lexicographically first witness."""
    N = graph.n
    if N > MAIS_MAX_N:
        raise SizeError(f"mais is brute force; N={N} exceeds {MAIS_MAX_N}")
    out = [sum(1 << (j - 1) for j in graph.s(i)) for i in graph.users]
    for size in range(N, 0, -1):
        for combo in itertools.combinations(range(N), size):
            if _acyclic(sum(1 << i for i in combo), out):
                return size, tuple(i + 1 for i in combo)
    return 0, ()


# ---------------------------------------------------------------- key-rate LP

KEYRATE_MAX_N = 6


def _keyrate_problem(graph: SideInfoGraph, include_triples: bool) -> LPProblem:
    N = graph.n
    if N > KEYRATE_MAX_N:
        raise SizeError(f"key-rate LP has 2^N - 2 variables; N={N} exceeds {KEYRATE_MAX_N}")
    pats = all_patterns(N)
    p = LPProblem()
    for b in pats:
        p.add_variable(b)
    p.objective = {b: Fraction(1) for b in pats}
    a_sets, pairs = derived_sets(graph)
    for i, j in sorted(pairs):
        p.add({b: 1 for b in pats if b.has(i) and not b.has(j)}, ">=", 1, f"pair({i},{j})")
    if include_triples:
        for l in graph.users:
            outside = [u for u in graph.users if u not in a_sets[l - 1]]
            for i, j in itertools.permutations(outside, 2):
                if i not in a_sets[j - 1]:
                    p.add({b: 1 for b in pats if (b.has(i) or b.has(j)) and not b.has(l)}, ">=", 2,
                          f"triple({i},{j},{l})")
    return p


def keyrate_lp(graph: SideInfoGraph, include_triples: bool = False) -> LPResult:
    """Minimum sum key rate subject to the pair (and optionally triple) key-rate bounds."""
    return lp_solve(_keyrate_problem(graph, include_triples))


@dataclass(frozen=True)
class Bracket:
    lower: Fraction
    provenance: str  # "mais-1" or "keyrate_lp"
    upper: Fraction


def sum_keyrate_bracket(graph: SideInfoGraph) -> Bracket:
    from .coloring import conflict_graph, fractional_chromatic

    m, _ = mais(graph)
    kr = keyrate_lp(graph).value
    upper, _ = fractional_chromatic(conflict_graph(graph))
    if Fraction(m - 1) > kr:
        return Bracket(Fraction(m - 1), "mais-1", upper)
    return Bracket(kr, "keyrate_lp", upper)


# ---------------------------------------------------------------- polymatroidal bound
#
# Ground set E = users (bits 0..N-1) followed by the supported key patterns.
# Variable f(U) for U a subset of E stands for the normalised H(M | X_S, K_T).

ELEMENTAL, EXHAUSTIVE = "elemental", "exhaustive"
ELEMENTAL_MAX_BITS = 16
EXHAUSTIVE_MAX_BITS = 10


@dataclass(frozen=True)
class PolymatroidInstance:
    graph: SideInfoGraph
    rates: RateTuple
    key_support: tuple[KeyPattern, ...] | None = None
    mode: str = ELEMENTAL

    def __post_init__(self):
        N = self.graph.n
        for b in self.rates.support():
            if len(b) != N:
                raise ModelError(f"rate for {b} does not match N={N}")
        if self.key_support is None:
            support = all_patterns(N) if N <= 3 else sorted(self.rates.support())
        else:
            support = [KeyPattern(b) for b in self.key_support]
            if len(set(support)) != len(support):
                raise ModelError("duplicate pattern in key support")
            for b in support:
                if len(b) != N:
                    raise ModelError(f"support pattern {b} does not match N={N}")
            missing = [b for b in self.rates.support() if b not in set(support)]
            if missing:
                raise ModelError(f"positive key rates outside the support: {missing}")
        object.__setattr__(self, "key_support", tuple(support))
        if self.mode not in (ELEMENTAL, EXHAUSTIVE):
            raise ModelError(f"unknown pm4 generation mode {self.mode!r}")

    @property
    def bits(self) -> int:
        return self.graph.n + len(self.key_support)


@dataclass(frozen=True)
class PMRow:
    """sum coeff * f(U) <= 0 with U a bit mask over the ground set."""

    family: str
    terms: tuple[tuple[int, int], ...]


@lru_cache(maxsize=None)
def _family(m: int, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """(pm3 pairs [U, U'] with U < U', pm4 triples [A, B, C]) as int64 arrays."""
    full = (1 << m) - 1
    if mode == ELEMENTAL:
        pm3 = [(u, u | 1 << e) for e in range(m) for u in range(1 << m) if not u >> e & 1]
        pm4 = [(a, 1 << b, 1 << c) for b in range(m) for c in range(b + 1, m)
               for a in range(1 << m) if not a >> b & 1 and not a >> c & 1]
    else:
        pm3, pm4 = [], []
        for u in range(1 << m):
            rest = full & ~u
            s = rest
            while s:
                pm3.append((u, u | s))
                s = (s - 1) & rest
            b = rest
            while b:
                r2 = rest & ~b
                c = r2
                while c > b:
                    pm4.append((u, b, c))
                    c = (c - 1) & r2
                b = (b - 1) & rest
    return (np.array(pm3, dtype=np.int64).reshape(-1, 2), np.array(pm4, dtype=np.int64).reshape(-1, 3))


def pm4_generation(inst: PolymatroidInstance, mode: str | None = None) -> list[PMRow]:
    """Monotonicity (pm3) and disjoint-set (pm4) rows for the instance's ground set.

    Elemental mode keeps singleton increments; exhaustive mode lists every
    strict pair U < U' and every disjoint (A, B, C) with B, C non-empty, counting
    {B, C} once since the inequality is symmetric in them.
    """
    mode = mode or inst.mode
    _check_size(inst.bits, mode)
    pm3, pm4 = _family(inst.bits, mode)
    rows = [PMRow("pm3", ((int(v), 1), (int(u), -1))) for u, v in pm3]
    rows += [PMRow("pm4", ((int(a), 1), (int(a | b | c), 1), (int(a | b), -1), (int(a | c), -1)))
             for a, b, c in pm4]
    return rows


def _check_size(bits: int, mode: str):
    cap = ELEMENTAL_MAX_BITS if mode == ELEMENTAL else EXHAUSTIVE_MAX_BITS
    if bits > cap:
        raise SizeError(f"2^{bits} set-function values exceed the {mode} limit 2^{cap}")


@dataclass
class PolymatroidResult:
    passes: bool
    certificate: str  # "point", "dual" or "exact-lp"
    witness: dict = field(default_factory=dict)
    rounds: int = 1
    rows: int = 0

    @property
    def verdict(self) -> str:
        return "passes" if self.passes else "outer_bound_violated"


class _System:
    """The max-lambda form of the outer bound: every row reads  a . (f, lambda) <= b."""

    def __init__(self, inst: PolymatroidInstance):
        g = inst.graph
        N, support = g.n, list(inst.key_support)
        k = len(support)
        self.N, self.k, self.m = N, k, N + k
        full = (1 << self.m) - 1
        users = (1 << N) - 1

        def kmask(i):
            return sum(1 << (N + t) for t, b in enumerate(support) if b.has(i))

        def umask(users_):
            return sum(1 << (j - 1) for j in users_)

        parent = list(range(1 << self.m))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        # pm6 merges f(A_i, AK_i) with f([N], AK_i); pm1 pins f([N], AK) to zero
        for i in g.users:
            a, b = find(umask(g.a(i)) | kmask(i)), find(users | kmask(i))
            if a != b:
                parent[max(a, b)] = min(a, b)
        zero = find(full)
        col = np.full(1 << self.m, -1, dtype=np.int64)
        reps: dict[int, int] = {}
        for u in range(1 << self.m):
            r = find(u)
            if r != zero:
                col[u] = reps.setdefault(r, len(reps))
        self.col = col
        self.nf = len(reps)
        self.lam = self.nf
        self.rep_mask = [0] * self.nf
        for r, c in reps.items():
            self.rep_mask[c] = r

        rates = inst.rates.as_dict()
        base: list[tuple[str, list[tuple[int, int]], Fraction]] = [("pm2", [(0, 1)], inst.rates.R)]
        for i in g.users:
            s_i = umask(g.s(i)) | kmask(i)
            a_i = umask(g.a(i)) | kmask(i)
            base.append((f"pm5[{i}]", [(-1, 1), (s_i, -1), (a_i, 1)], Fraction(0)))
        for T in range(1, 1 << k):
            rhs = sum((rates.get(support[t], Fraction(0)) for t in range(k) if T >> t & 1), Fraction(0))
            base.append((f"pm7[{self._keys_label(T, support)}]", [(full & ~(T << N), 1)], rhs))
        self.support = support
        self.base = base

    @staticmethod
    def _keys_label(T, support):
        return ",".join(str(support[t]) for t in range(len(support)) if T >> t & 1)

    def label(self, u: int) -> str:
        S = [j + 1 for j in range(self.N) if u >> j & 1]
        T = [str(self.support[t]) for t in range(self.k) if u >> (self.N + t) & 1]
        return "f({" + ",".join(map(str, S)) + "},{" + ",".join(T) + "})"

    def base_matrix(self):
        I, J, V, b, names = [], [], [], [], []
        for r, (name, terms, rhs) in enumerate(self.base):
            for u, c in terms:
                j = self.lam if u == -1 else int(self.col[u])
                if j >= 0:
                    I.append(r)
                    J.append(j)
                    V.append(c)
            b.append(rhs)
            names.append(name)
        return np.array(I, dtype=np.int64), np.array(J, dtype=np.int64), np.array(V, dtype=np.int64), b, names

    def family_matrix(self, pm3: np.ndarray, pm4: np.ndarray):
        """Rows of pm3/pm4 mapped to columns; drops rows that vanish after merging."""
        masks = np.concatenate([pm3[:, [1, 0]].reshape(-1), np.stack(
            [pm4[:, 0], pm4[:, 0] | pm4[:, 1] | pm4[:, 2], pm4[:, 0] | pm4[:, 1], pm4[:, 0] | pm4[:, 2]],
            axis=1).reshape(-1)])
        coef = np.concatenate([np.tile([1, -1], len(pm3)), np.tile([1, 1, -1, -1], len(pm4))])
        rows = np.concatenate([np.repeat(np.arange(len(pm3)), 2), np.repeat(np.arange(len(pm4)) + len(pm3), 4)])
        cols = self.col[masks]
        keep = cols >= 0
        M = sp.csr_matrix((coef[keep], (rows[keep], cols[keep])), shape=(len(pm3) + len(pm4), self.nf + 1),
                          dtype=np.int64)
        M.eliminate_zeros()
        live = np.diff(M.indptr) > 0
        return M[live], np.nonzero(live)[0]


def _rationalize(values, limits=(64, 4096, 10 ** 6)):
    for lim in limits:
        yield [Fraction(float(v)).limit_denominator(lim) for v in values]


def _int_scale(values: list[Fraction]) -> tuple[np.ndarray, int] | None:
    D = 1
    for v in values:
        D = D * v.denominator // math.gcd(D, v.denominator)
    ints = [v.numerator * (D // v.denominator) for v in values]
    if max((abs(x) for x in ints), default=0) >= 2 ** 58:
        return None
    return np.array(ints, dtype=np.int64), D


def _check_point(A: sp.csr_matrix, b: list[Fraction], x: list[Fraction]) -> bool:
    """Exact test of A x <= b and x >= 0 (lambda, the last entry, is free)."""
    if any(v < 0 for v in x[:-1]):
        return False
    scaled = _int_scale(list(x) + list(b))
    if scaled is None:
        return all(sum((Fraction(int(c)) * x[j] for j, c in zip(A.indices[A.indptr[r]:A.indptr[r + 1]],
                                                                     A.data[A.indptr[r]:A.indptr[r + 1]])),
                       Fraction(0)) <= b[r] for r in range(A.shape[0]))
    ints, _ = scaled
    xi, bi = ints[:len(x)], ints[len(x):]
    return bool(np.all(A @ xi <= bi))


def _check_dual(A: sp.csr_matrix, b: list[Fraction], y: list[Fraction]) -> Fraction | None:
    """If y >= 0 certifies lambda <= bound, return the bound."""
    if any(v < 0 for v in y):
        return None
    scaled = _int_scale(y)
    if scaled is None:
        return None
    yi, D = scaled
    colsum = A.T @ yi
    if np.any(colsum[:-1] < 0) or colsum[-1] <= 0:
        return None
    by = sum((Fraction(int(v)) * b[r] for r, v in enumerate(yi) if v), Fraction(0))
    return by / int(colsum[-1])


def _float_solve(A: sp.csr_matrix, b: list[Fraction]):
    nv = A.shape[1]
    c = np.zeros(nv)
    c[-1] = -1.0
    bounds = [(0, None)] * (nv - 1) + [(None, None)]
    return linprog(c, A_ub=A.astype(float), b_ub=np.array([float(v) for v in b]), bounds=bounds, method="highs")


def _exact_solve(A: sp.csr_matrix, b: list[Fraction]) -> LPResult:
    p = LPProblem()
    nv = A.shape[1]
    for j in range(nv - 1):
        p.add_variable(j)
    p.add_variable("lambda", lower=None, upper=1)
    p.objective = {"lambda": Fraction(-1)}
    for r in range(A.shape[0]):
        sl = slice(A.indptr[r], A.indptr[r + 1])
        p.add({(j if j < nv - 1 else "lambda"): int(c) for j, c in zip(A.indices[sl], A.data[sl])}, "<=", b[r])
    return lp_solve(p)


def _certified(A: sp.csr_matrix, b: list[Fraction], allow_exact: bool = True):
    """('point', x) with lambda = 1 feasible, ('dual', (y, bound)) with bound < 1, or exact fallback."""
    res = _float_solve(A, b)
    if res.status == 0:
        if -res.fun >= 1 - 1e-7:
            for x in _rationalize(res.x):
                x[-1] = Fraction(1)
                if _check_point(A, b, x):
                    return "point", x
        else:
            for y in _rationalize(-res.ineqlin.marginals):
                bound = _check_dual(A, b, y)
                if bound is not None and bound < 1:
                    return "dual", (y, bound)
    if not allow_exact:
        raise RuntimeError("certification failed")
    exact = _exact_solve(A, b)
    if exact.value is not None and -exact.value >= 1:
        return "exact-lp", [exact.point[j] for j in range(A.shape[1] - 1)] + [Fraction(1)]
    return "exact-lp", None


def polymatroid_check(inst: PolymatroidInstance, lazy: bool = True) -> PolymatroidResult:
    """Feasibility of the outer-bound system; outer_bound_violated certifies non-achievability.

    The system is solved as ``max lambda`` with lambda in place of the unit
    right-hand side of pm5, so it is always feasible and the verdict is
    ``lambda* >= 1``. A floating-point LP proposes either a primal point or a
    dual multiplier vector; the verdict is only returned once that proposal has
    been rationalised and checked in exact integer arithmetic. If no proposal
    checks out the exact simplex decides.

    In exhaustive mode with ``lazy`` the working set starts from the elemental
    rows (themselves members of the exhaustive family) and grows by every
    exhaustive row the current point violates, until the point satisfies the
    whole family.
    """
    _check_size(inst.bits, inst.mode)
    system = _System(inst)
    bI, bJ, bV, bb, bnames = system.base_matrix()
    base = sp.csr_matrix((bV, (bI, bJ)), shape=(len(bb), system.nf + 1), dtype=np.int64)
    fam = _family(inst.bits, inst.mode)
    full_rows, _ = system.family_matrix(*fam)
    if inst.mode == EXHAUSTIVE and lazy:
        work, _ = system.family_matrix(*_family(inst.bits, ELEMENTAL))
    else:
        work = full_rows
    zeros = [Fraction(0)]
    rounds = 0
    while True:
        rounds += 1
        A = sp.vstack([base, work], format="csr")
        b = list(bb) + zeros * work.shape[0]
        kind, cert = _certified(A, b)
        if kind == "dual" or cert is None:
            witness = {}
            if kind == "dual":
                y, bound = cert
                witness = {"lambda_upper_bound": bound,
                           "multipliers": _describe_dual(system, A, y, bnames)}
            return PolymatroidResult(False, kind, witness, rounds, A.shape[0])
        x = cert
        if work is full_rows:
            break
        scaled = _int_scale(x)
        if scaled is None:
            viol = np.array([], dtype=np.int64)
        else:
            xi, _ = scaled
            viol = np.nonzero(full_rows @ xi > 0)[0]
        if not len(viol):
            break
        work = sp.vstack([work, full_rows[viol]], format="csr")
    witness = {system.label(system.rep_mask[c]): x[c] for c in range(system.nf) if x[c]}
    return PolymatroidResult(True, kind, witness, rounds, A.shape[0])


def _describe_dual(system: _System, A, y, bnames) -> list[tuple[str, Fraction]]:
    out = []
    for r, v in enumerate(y):
        if not v:
            continue
        if r < len(bnames):
            out.append((bnames[r], v))
            continue
        sl = slice(A.indptr[r], A.indptr[r + 1])
        terms = " ".join(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}{system.label(system.rep_mask[j])}"
                         for j, c in zip(A.indices[sl], A.data[sl]))
        out.append((terms + " <= 0", v))
    return out
