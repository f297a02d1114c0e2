"""Core domain types and the JSON file formats.

Users are numbered 1..N. A key pattern is a bit string whose leftmost
character belongs to user 1, so ``"110"`` is the key shared by users 1 and 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .gf import GFMatrix, DimensionError, is_prime


class ModelError(ValueError):
    """Malformed input or an invariant violation in a domain object."""


# ---------------------------------------------------------------- rationals

def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise ModelError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"not a rational: {value!r}") from exc
    raise ModelError(f"not a rational: {value!r}")


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- key patterns

class KeyPattern(str):
    """Characteristic vector of the set of users holding a key.

    The all-ones pattern is accepted as input although it never separates two
    users; ``all_patterns`` leaves it out.
    """

    def __new__(cls, bits):
        if isinstance(bits, KeyPattern):
            return bits
        if not isinstance(bits, str):
            bits = "".join(str(int(b)) for b in bits)
        if not bits or set(bits) - {"0", "1"}:
            raise ModelError(f"bad key pattern {bits!r}")
        if "1" not in bits:
            raise ModelError(f"key pattern {bits!r} is held by no user")
        return super().__new__(cls, bits)

    @property
    def n(self) -> int:
        return len(self)

    def has(self, user: int) -> bool:
        return self[user - 1] == "1"

    @property
    def users(self) -> frozenset[int]:
        return frozenset(i + 1 for i, c in enumerate(self) if c == "1")

    @classmethod
    def of_users(cls, users: Iterable[int], n: int) -> "KeyPattern":
        users = set(users)
        return cls("".join("1" if i in users else "0" for i in range(1, n + 1)))


def all_patterns(n: int) -> list[KeyPattern]:
    """All of AK in counting order with user 1 as the least significant bit.

    For N = 3 this is 100, 010, 110, 001, 101, 011, the column order used by
    the printed rate-region tables.
    """
    out = []
    for v in range(1, 2 ** n - 1):
        out.append(KeyPattern("".join(str((v >> i) & 1) for i in range(n))))
    return out


@dataclass(frozen=True)
class KeyAccessStructure:
    n: int
    patterns: frozenset[KeyPattern]

    def __post_init__(self):
        pats = frozenset(KeyPattern(p) for p in self.patterns)
        for p in pats:
            if len(p) != self.n:
                raise ModelError(f"pattern {p} has length {len(p)}, expected {self.n}")
        object.__setattr__(self, "patterns", pats)

    @classmethod
    def of(cls, n: int, patterns: Iterable[str]) -> "KeyAccessStructure":
        patterns = list(patterns)
        if len(set(patterns)) != len(patterns):
            raise ModelError("duplicate key pattern")
        return cls(n, frozenset(KeyPattern(p) for p in patterns))

    def available_to(self, user: int) -> list[KeyPattern]:
        return sorted(p for p in self.patterns if p.has(user))

    def __len__(self):
        return len(self.patterns)

    def __iter__(self):
        return iter(sorted(self.patterns))


def parse_ks(text: str, n: int) -> KeyAccessStructure:
    """Comma-separated patterns, e.g. ``"110,101,011"``; empty text is the empty structure."""
    text = text.strip()
    if not text:
        return KeyAccessStructure(n, frozenset())
    return KeyAccessStructure.of(n, [p.strip() for p in text.split(",") if p.strip()])


# ---------------------------------------------------------------- graphs

@dataclass(frozen=True)
class SideInfoGraph:
    """Directed side-information graph: user i holds x_j for j in side_info[i-1]."""

    n: int
    side_info: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("a graph needs at least one user")
        if len(self.side_info) != self.n:
            raise ModelError(f"side_info has {len(self.side_info)} entries for n={self.n}")
        sets = tuple(frozenset(s) for s in self.side_info)
        for i, s in enumerate(sets, start=1):
            if i in s:
                raise ModelError(f"self-loop at user {i}")
            for j in s:
                if not 1 <= j <= self.n:
                    raise ModelError(f"user {i} has out-of-range side information index {j}")
        object.__setattr__(self, "side_info", sets)

    @classmethod
    def from_lists(cls, side_info: Sequence[Iterable[int]]) -> "SideInfoGraph":
        return cls(len(side_info), tuple(frozenset(s) for s in side_info))

    @property
    def users(self) -> range:
        return range(1, self.n + 1)

    def s(self, i: int) -> frozenset[int]:
        return self.side_info[i - 1]

    def a(self, i: int) -> frozenset[int]:
        return self.side_info[i - 1] | {i}

    def unknown(self, i: int) -> list[int]:
        """Messages user i must not learn: [N] minus A_i."""
        a = self.a(i)
        return [j for j in self.users if j not in a]

    def relabel(self, perm: Mapping[int, int]) -> "SideInfoGraph":
        """Graph with user i renamed perm[i]."""
        sets = [None] * self.n
        for i in self.users:
            sets[perm[i] - 1] = frozenset(perm[j] for j in self.s(i))
        return SideInfoGraph(self.n, tuple(sets))

    @classmethod
    def complete(cls, n: int) -> "SideInfoGraph":
        return cls(n, tuple(frozenset(j for j in range(1, n + 1) if j != i) for i in range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "SideInfoGraph":
        return cls(n, tuple(frozenset() for _ in range(n)))


def derived_sets(graph: SideInfoGraph) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """A_i for every user and all ordered pairs (i, j) with i not in A_j."""
    a_sets = [graph.a(i) for i in graph.users]
    pairs = [(i, j) for i in graph.users for j in graph.users if i not in a_sets[j - 1]]
    return a_sets, pairs


def parse_graph(text: str) -> SideInfoGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"graph file is not JSON: {exc}") from exc
    return graph_from_obj(obj)


def graph_from_obj(obj) -> SideInfoGraph:
    if not isinstance(obj, dict) or "n" not in obj or "side_info" not in obj:
        raise ModelError('graph must be {"n": ..., "side_info": [...]}')
    n, lists = obj["n"], obj["side_info"]
    if not isinstance(n, int) or isinstance(n, bool) or not isinstance(lists, list):
        raise ModelError("bad graph field types")
    for s in lists:
        if not isinstance(s, list) or not all(isinstance(j, int) and not isinstance(j, bool) for j in s):
            raise ModelError("side_info entries must be lists of integers")
        if len(set(s)) != len(s):
            raise ModelError("duplicate entry in a side_info list")
    return SideInfoGraph(n, tuple(frozenset(s) for s in lists))


def graph_to_obj(g: SideInfoGraph) -> dict:
    return {"n": g.n, "side_info": [sorted(s) for s in g.side_info]}


def serialize_graph(g: SideInfoGraph) -> str:
    return json.dumps(graph_to_obj(g))


# ---------------------------------------------------------------- rate tuples

@dataclass(frozen=True)
class RateTuple:
    R: Fraction
    key_rates: tuple[tuple[KeyPattern, Fraction], ...] = ()

    def __post_init__(self):
        R = Fraction(self.R)
        if R < 0:
            raise ModelError("transmission rate must be non-negative")
        rates = {}
        for b, v in (self.key_rates.items() if isinstance(self.key_rates, Mapping) else self.key_rates):
            b, v = KeyPattern(b), Fraction(v)
            if v < 0:
                raise ModelError(f"negative key rate for {b}")
            if b in rates:
                raise ModelError(f"duplicate key pattern {b}")
            if v:
                rates[b] = v
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "key_rates", tuple(sorted(rates.items())))

    @classmethod
    def of(cls, R, key_rates: Mapping[str, object] | None = None) -> "RateTuple":
        return cls(Fraction(R), tuple((KeyPattern(b), Fraction(v)) for b, v in (key_rates or {}).items()))

    def rate(self, b: str) -> Fraction:
        return dict(self.key_rates).get(KeyPattern(b), Fraction(0))

    def as_dict(self) -> dict[KeyPattern, Fraction]:
        return dict(self.key_rates)

    @property
    def sum_key_rate(self) -> Fraction:
        return sum((v for _, v in self.key_rates), Fraction(0))

    def support(self) -> list[KeyPattern]:
        return [b for b, _ in self.key_rates]

    def as_vector(self, n: int) -> list[Fraction]:
        """(R, R_b for b in all_patterns(n)), the printed-table column order."""
        rates = self.as_dict()
        return [self.R] + [rates.get(b, Fraction(0)) for b in all_patterns(n)]

    @classmethod
    def from_vector(cls, vec: Sequence, n: int) -> "RateTuple":
        pats = all_patterns(n)
        if len(vec) != len(pats) + 1:
            raise ModelError(f"expected {len(pats) + 1} entries for N={n}")
        return cls(Fraction(vec[0]), tuple(zip(pats, (Fraction(v) for v in vec[1:]))))


def rate_tuple_to_obj(t: RateTuple) -> dict:
    return {"R": format_rational(t.R), "key_rates": {b: format_rational(v) for b, v in t.key_rates}}


def parse_rate_tuple(text: str) -> RateTuple:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"rate-tuple file is not JSON: {exc}") from exc
    return rate_tuple_from_obj(obj)


def rate_tuple_from_obj(obj) -> RateTuple:
    if not isinstance(obj, dict) or "R" not in obj:
        raise ModelError('rate tuple must be {"R": ..., "key_rates": {...}}')
    rates = obj.get("key_rates", {})
    if not isinstance(rates, dict):
        raise ModelError("key_rates must be an object")
    return RateTuple(parse_rational(obj["R"]), tuple((KeyPattern(b), parse_rational(v)) for b, v in rates.items()))


def serialize_rate_tuple(t: RateTuple) -> str:
    return json.dumps(rate_tuple_to_obj(t))


# ---------------------------------------------------------------- linear schemes

@dataclass(frozen=True)
class KeyBlock:
    pattern: KeyPattern
    H: GFMatrix

    @property
    def width(self) -> int:
        return self.H.cols


@dataclass(frozen=True)
class LinearScheme:
    """M^T = sum_i G_i X_i^T + sum_b H_b K_b^T over GF(q), block length n."""

    q: int
    n: int
    r: int
    G: tuple[GFMatrix, ...]
    keys: tuple[KeyBlock, ...] = ()

    def __post_init__(self):
        if not is_prime(self.q):
            raise ModelError(f"field size {self.q} is not prime")
        if self.n < 1:
            raise ModelError("block length must be at least 1")
        if self.r < 0:
            raise ModelError("number of transmitted symbols must be non-negative")
        if not self.G:
            raise ModelError("scheme needs at least one user")
        N = len(self.G)
        for i, g in enumerate(self.G, start=1):
            if g.q != self.q:
                raise ModelError(f"G_{i} is over GF({g.q}), scheme over GF({self.q})")
            if (g.rows, g.cols) != (self.r, self.n):
                raise ModelError(f"G_{i} is {g.rows}x{g.cols}, expected {self.r}x{self.n}")
        seen = set()
        for kb in self.keys:
            if len(kb.pattern) != N:
                raise ModelError(f"key pattern {kb.pattern} has length {len(kb.pattern)}, expected {N}")
            if kb.pattern in seen:
                raise ModelError(f"duplicate key pattern {kb.pattern}")
            seen.add(kb.pattern)
            if kb.H.q != self.q:
                raise ModelError(f"H_{kb.pattern} over a different field")
            if kb.H.rows != self.r:
                raise ModelError(f"H_{kb.pattern} has {kb.H.rows} rows, expected {self.r}")

    @property
    def N(self) -> int:
        return len(self.G)

    def key(self, pattern: str) -> KeyBlock | None:
        pattern = KeyPattern(pattern)
        return next((kb for kb in self.keys if kb.pattern == pattern), None)

    def generator(self) -> GFMatrix:
        """Stacked [G_1 ... G_N H_b1 ...] so that M = generator * (x, k)."""
        return GFMatrix(self.q, self.r, 0, tuple(() for _ in range(self.r))).hstack(
            *self.G, *(kb.H for kb in self.keys))

    def key_structure(self) -> KeyAccessStructure:
        return KeyAccessStructure(self.N, frozenset(kb.pattern for kb in self.keys if kb.width))


def _matrix_from_obj(q: int, rows: int, obj, what: str) -> GFMatrix:
    if not isinstance(obj, list) or len(obj) != rows:
        raise ModelError(f"{what} must have {rows} rows")
    width = None
    for row in obj:
        if not isinstance(row, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
            raise ModelError(f"{what} rows must be integer lists")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ModelError(f"{what} has ragged rows")
        for v in row:
            if not 0 <= v < q:
                raise ModelError(f"{what} entry {v} outside [0, {q})")
    return GFMatrix(q, rows, width or 0, tuple(tuple(r) for r in obj))


def scheme_from_obj(obj) -> LinearScheme:
    if not isinstance(obj, dict):
        raise ModelError("scheme must be a JSON object")
    for k in ("q", "n", "r", "G"):
        if k not in obj:
            raise ModelError(f"scheme missing field {k!r}")
    q, n, r = obj["q"], obj["n"], obj["r"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (q, n, r)):
        raise ModelError("q, n, r must be integers")
    if not is_prime(q):
        raise ModelError(f"field size {q} is not prime")
    if not isinstance(obj["G"], list) or not obj["G"]:
        raise ModelError("G must be a non-empty list of matrices")
    try:
        G = []
        for i, g in enumerate(obj["G"], start=1):
            m = _matrix_from_obj(q, r, g, f"G_{i}")
            if r == 0:
                m = GFMatrix.zeros(q, 0, n)
            if m.cols != n:
                raise ModelError(f"G_{i} has {m.cols} columns, expected n={n}")
            G.append(m)
        keys = []
        for entry in obj.get("keys", []):
            if not isinstance(entry, dict) or "pattern" not in entry or "H" not in entry:
                raise ModelError('key entries must be {"pattern": ..., "H": ...}')
            pat = KeyPattern(entry["pattern"])
            H = _matrix_from_obj(q, r, entry["H"], f"H_{pat}")
            if r == 0:
                H = GFMatrix.zeros(q, 0, int(entry.get("width", 0)))
            keys.append(KeyBlock(pat, H))
    except DimensionError as exc:
        raise ModelError(str(exc)) from exc
    return LinearScheme(q, n, r, tuple(G), tuple(keys))


def parse_scheme(text: str) -> LinearScheme:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"scheme file is not JSON: {exc}") from exc
    return scheme_from_obj(obj)


def scheme_to_obj(s: LinearScheme) -> dict:
    keys = []
    for kb in s.keys:
        entry = {"pattern": str(kb.pattern), "H": kb.H.tolist()}
        if s.r == 0:
            entry["width"] = kb.width
        keys.append(entry)
    return {"q": s.q, "n": s.n, "r": s.r, "G": [g.tolist() for g in s.G], "keys": keys}


def serialize_scheme(s: LinearScheme) -> str:
    return json.dumps(scheme_to_obj(s))


# ---------------------------------------------------------------- multicast schemes

@dataclass(frozen=True)
class Session:
    """One GF(q) symbol sum(coeff * x_i^(coord)) delivered to ``recipients``."""

    recipients: frozenset[int]
    coefficients: tuple[tuple[tuple[int, int], int], ...] = field(default=())


@dataclass(frozen=True)
class MulticastScheme:
    q: int
    n: int
    N: int
    sessions: tuple[Session, ...]

    def __post_init__(self):
        if not is_prime(self.q):
            raise ModelError(f"field size {self.q} is not prime")
        if self.n < 1 or self.N < 1:
            raise ModelError("block length and user count must be positive")
        for k, sess in enumerate(self.sessions, start=1):
            for u in sess.recipients:
                if not 1 <= u <= self.N:
                    raise ModelError(f"session {k} addresses unknown user {u}")
            for (i, c), v in sess.coefficients:
                if not (1 <= i <= self.N and 1 <= c <= self.n):
                    raise ModelError(f"session {k} references x_{i}^({c}) outside the block")
                if not 0 <= v < self.q:
                    raise ModelError(f"session {k} coefficient {v} outside [0, {self.q})")

    def received_by(self, user: int) -> list[int]:
        """0-based indices of the sessions user ``user`` listens to."""
        return [k for k, s in enumerate(self.sessions) if user in s.recipients]


def multicast_to_obj(ms: MulticastScheme) -> dict:
    return {
        "q": ms.q, "n": ms.n, "N": ms.N,
        "sessions": [
            {"recipients": sorted(s.recipients),
             "payload": [[i, c, v] for (i, c), v in s.coefficients]}
            for s in ms.sessions
        ],
    }


def multicast_from_obj(obj) -> MulticastScheme:
    try:
        sessions = tuple(
            Session(frozenset(s["recipients"]), tuple(((int(i), int(c)), int(v)) for i, c, v in s["payload"]))
            for s in obj["sessions"]
        )
        return MulticastScheme(int(obj["q"]), int(obj["n"]), int(obj["N"]), sessions)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"bad multicast scheme: {exc}") from exc
