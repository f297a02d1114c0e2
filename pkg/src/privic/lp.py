"""Exact rational linear programming.

Two-phase primal simplex on a sparse tableau of ``Fraction`` entries.
Pricing is Dantzig's most-negative reduced cost; once a run of degenerate
pivots starts, entering and leaving choices follow Bland's smallest-index rule
until the objective moves again, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

LE, GE, EQ = "<=", ">=", "="
_RELS = (LE, GE, EQ)

# consecutive degenerate pivots tolerated before switching to Bland's rule
_DEGENERATE_RUN = 8


class LPError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[Hashable, Fraction], ...]
    rel: str
    rhs: Fraction
    name: str = ""

    @classmethod
    def of(cls, coeffs: Mapping[Hashable, object] | Iterable[tuple[Hashable, object]], rel: str, rhs, name: str = ""):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict = {}
        for v, c in items:
            acc[v] = acc.get(v, Fraction(0)) + Fraction(c)
        if rel not in _RELS:
            raise LPError(f"unknown relation {rel!r}")
        return cls(tuple((v, c) for v, c in acc.items() if c), rel, Fraction(rhs), name)

    def lhs(self, point: Mapping[Hashable, Fraction]) -> Fraction:
        return sum((c * point[v] for v, c in self.coeffs), Fraction(0))

    def holds(self, point) -> bool:
        lhs = self.lhs(point)
        return lhs <= self.rhs if self.rel == LE else lhs >= self.rhs if self.rel == GE else lhs == self.rhs

    def __str__(self):
        terms = " + ".join(f"{c}*{v}" if c != 1 else f"{v}" for v, c in self.coeffs) or "0"
        return f"{terms} {self.rel} {self.rhs}"


@dataclass
class LPProblem:
    """Minimise ``objective . x`` subject to ``constraints`` and variable bounds.

    Lower bounds default to 0; a lower bound of ``None`` makes the variable free.
    """

    variables: list[Hashable] = field(default_factory=list)
    objective: dict[Hashable, Fraction] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    lower: dict[Hashable, Fraction | None] = field(default_factory=dict)
    upper: dict[Hashable, Fraction] = field(default_factory=dict)

    def add_variable(self, v: Hashable, lower=Fraction(0), upper=None) -> Hashable:
        if v in self.lower:
            raise LPError(f"variable {v!r} declared twice")
        self.variables.append(v)
        self.lower[v] = None if lower is None else Fraction(lower)
        if upper is not None:
            self.upper[v] = Fraction(upper)
        return v

    def add(self, coeffs, rel: str, rhs, name: str = "") -> Constraint:
        c = Constraint.of(coeffs, rel, rhs, name or f"c{len(self.constraints)}")
        self.constraints.append(c)
        return c

    def validate(self):
        known = set(self.lower)
        for v in self.objective:
            if v not in known:
                raise LPError(f"objective uses undeclared variable {v!r}")
        for c in self.constraints:
            for v, _ in c.coeffs:
                if v not in known:
                    raise LPError(f"constraint {c.name} uses undeclared variable {v!r}")

    def dump(self) -> str:
        obj = " + ".join(f"{c}*{v}" for v, c in self.objective.items() if c) or "0"
        lines = [f"min {obj}", "s.t."]
        lines += [f"  {c.name}: {c}" for c in self.constraints]
        for v in self.variables:
            lo, hi = self.lower[v], self.upper.get(v)
            if lo is None and hi is None:
                lines.append(f"  {v} free")
            elif lo != 0 or hi is not None:
                lines.append(f"  {'-inf' if lo is None else lo} <= {v} <= {'inf' if hi is None else hi}")
        return "\n".join(lines)


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    point: dict[Hashable, Fraction] | None = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


# --------------------------------------------------------------------- tableau

class _Tableau:
    """Rows are sparse dicts column -> Fraction; row i expresses basis[i]."""

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, r: int, c: int):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            row = {j: v * inv for j, v in row.items()}
            self.rows[r] = row
            self.rhs[r] *= inv
        row[c] = Fraction(1)
        b = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(c)
            if f is None:
                continue
            for j, v in row.items():
                nv = other.get(j, 0) - f * v
                if nv:
                    other[j] = nv
                else:
                    other.pop(j, None)
            self.rhs[i] -= f * b
        self.basis[r] = c
        self.pivots += 1

    def reduced_costs(self, cost: Mapping[int, Fraction]) -> tuple[dict[int, Fraction], Fraction]:
        """Reduced costs d_j = c_j - c_B B^-1 A_j and the current objective value."""
        d = dict(cost)
        value = Fraction(0)
        for i, bcol in enumerate(self.basis):
            cb = cost.get(bcol)
            if not cb:
                continue
            value += cb * self.rhs[i]
            for j, v in self.rows[i].items():
                nv = d.get(j, 0) - cb * v
                if nv:
                    d[j] = nv
                else:
                    d.pop(j, None)
        for bcol in self.basis:
            d.pop(bcol, None)
        return d, value

    def optimise(self, cost: Mapping[int, Fraction], allowed) -> str:
        """Minimise ``cost`` over columns in ``allowed``; returns 'optimal' or 'unbounded'."""
        d, value = self.reduced_costs(cost)
        degenerate = 0
        while True:
            bland = degenerate >= _DEGENERATE_RUN
            entering = None
            best = Fraction(0)
            for j in sorted(d) if bland else d:
                dj = d[j]
                if dj < 0 and j in allowed:
                    if bland:
                        entering = j
                        break
                    if dj < best or (dj == best and entering is not None and j < entering):
                        best, entering = dj, j
            if entering is None:
                return "optimal"
            leave = None
            ratio = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is None or a <= 0:
                    continue
                t = self.rhs[i] / a
                if ratio is None or t < ratio or (t == ratio and self.basis[i] < self.basis[leave]):
                    ratio, leave = t, i
            if leave is None:
                return "unbounded"
            step = ratio * d[entering]
            degenerate = degenerate + 1 if ratio == 0 else 0
            self.pivot(leave, entering)
            value += step
            # update reduced costs from the new pivot row
            f = d.get(entering)
            row = self.rows[leave]
            for j, v in row.items():
                nv = d.get(j, 0) - f * v
                if nv:
                    d[j] = nv
                else:
                    d.pop(j, None)
            d.pop(entering, None)


# --------------------------------------------------------------------- solve

def lp_solve(p: LPProblem) -> LPResult:
    """Solve exactly. Status is 'optimal', 'infeasible' or 'unbounded'."""
    p.validate()
    # column layout: each original variable maps to one or two structural columns
    colmap: dict[Hashable, list[tuple[int, int]]] = {}
    shift: dict[Hashable, Fraction] = {}
    ncols = 0
    for v in p.variables:
        lo = p.lower[v]
        if lo is None:
            colmap[v] = [(ncols, 1), (ncols + 1, -1)]
            shift[v] = Fraction(0)
            ncols += 2
        else:
            colmap[v] = [(ncols, 1)]
            shift[v] = lo
            ncols += 1
    n_struct = ncols

    all_cons: list[tuple[dict, str, Fraction]] = []
    for c in p.constraints:
        all_cons.append((dict(c.coeffs), c.rel, c.rhs))
    for v, u in p.upper.items():
        all_cons.append(({v: Fraction(1)}, LE, u))

    rows, rhs, basis = [], [], []
    artificial = set()
    for coeffs, rel, b in all_cons:
        row: dict[int, Fraction] = {}
        b = b - sum((a * shift[v] for v, a in coeffs.items()), Fraction(0))
        for v, a in coeffs.items():
            for col, sgn in colmap[v]:
                row[col] = row.get(col, 0) + sgn * a
        row = {j: a for j, a in row.items() if a}
        if b < 0:
            row = {j: -a for j, a in row.items()}
            b = -b
            rel = GE if rel == LE else LE if rel == GE else EQ
        if rel == LE:
            row[ncols] = Fraction(1)
            basis.append(ncols)
            ncols += 1
        else:
            if rel == GE:
                row[ncols] = Fraction(-1)
                ncols += 1
            row[ncols] = Fraction(1)
            basis.append(ncols)
            artificial.add(ncols)
            ncols += 1
        rows.append(row)
        rhs.append(b)

    tab = _Tableau(rows, rhs, basis, ncols)
    real_cols = set(range(ncols)) - artificial
    if artificial:
        tab.optimise({j: Fraction(1) for j in artificial}, set(range(ncols)))
        infeas = sum((tab.rhs[i] for i, bc in enumerate(tab.basis) if bc in artificial), Fraction(0))
        if infeas > 0:
            return LPResult("infeasible", pivots=tab.pivots)
        # drive zero-level artificials out of the basis where possible
        for i, bc in enumerate(tab.basis):
            if bc in artificial:
                col = next((j for j in sorted(tab.rows[i]) if j in real_cols), None)
                if col is not None:
                    tab.pivot(i, col)
        keep = [i for i, bc in enumerate(tab.basis) if bc not in artificial]
        tab.rows = [tab.rows[i] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        for row in tab.rows:
            for j in artificial:
                row.pop(j, None)

    cost: dict[int, Fraction] = {}
    for v, c in p.objective.items():
        c = Fraction(c)
        if c:
            for col, sgn in colmap[v]:
                cost[col] = cost.get(col, 0) + sgn * c
    status = tab.optimise(cost, real_cols)
    if status == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)

    values = [Fraction(0)] * n_struct
    for i, bc in enumerate(tab.basis):
        if bc < n_struct:
            values[bc] = tab.rhs[i]
    point = {v: shift[v] + sum((sgn * values[col] for col, sgn in colmap[v]), Fraction(0)) for v in p.variables}
    value = sum((Fraction(c) * point[v] for v, c in p.objective.items()), Fraction(0))
    return LPResult("optimal", value, point, tab.pivots)


# --------------------------------------------------------------------- point checks

@dataclass(frozen=True)
class _Row:
    label: str
    normal: dict
    satisfied: bool
    tight: bool


def _rows_at(p: LPProblem, point: Mapping[Hashable, object]) -> list[_Row]:
    missing = [v for v in p.variables if v not in point]
    if missing:
        raise LPError(f"point does not assign {missing!r}")
    x = {v: Fraction(point[v]) for v in p.variables}
    out = []
    for c in p.constraints:
        lhs = c.lhs(x)
        ok = c.holds(x)
        out.append(_Row(c.name or str(c), dict(c.coeffs), ok, lhs == c.rhs))
    for v in p.variables:
        lo = p.lower[v]
        if lo is not None:
            out.append(_Row(f"{v} >= {lo}", {v: Fraction(1)}, x[v] >= lo, x[v] == lo))
        hi = p.upper.get(v)
        if hi is not None:
            out.append(_Row(f"{v} <= {hi}", {v: Fraction(1)}, x[v] <= hi, x[v] == hi))
    return out


def lp_check_point(p: LPProblem, point: Mapping[Hashable, object]) -> tuple[bool, list[str], list[str]]:
    """Exact feasibility of ``point``: (all satisfied, violated labels, tight labels).

    Variable bounds count as constraints and appear with labels like ``"x >= 0"``.
    """
    rows = _rows_at(p, point)
    violated = [r.label for r in rows if not r.satisfied]
    tight = [r.label for r in rows if r.tight]
    return not violated, violated, tight


def rational_rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    for col in range(width):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def vertex_rank_check(region: LPProblem, point: Mapping[Hashable, object], dim: int) -> bool:
    """True iff the tight constraint normals at ``point`` span a space of dimension ``dim``."""
    rows = _rows_at(region, point)
    bad = [r.label for r in rows if not r.satisfied]
    if bad:
        raise LPError(f"point violates {bad}")
    index = {v: k for k, v in enumerate(region.variables)}
    normals = []
    for r in rows:
        if r.tight:
            vec = [Fraction(0)] * len(index)
            for v, c in r.normal.items():
                vec[index[v]] = c
            normals.append(vec)
    return rational_rank(normals) == dim
