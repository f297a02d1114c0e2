"""Brute-force ground truth by enumerating every message and key realization.

Privacy is tested as exact conditional independence: inside every
conditioning cell z the joint counts must factor,
``N(z, m, w) * N(z) == N(z, m) * N(z, w)``, including pairs (m, w) that never
occur together. No logarithms are taken.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .model import LinearScheme, MulticastScheme, SideInfoGraph

DEFAULT_STATE_LIMIT = 2 ** 28


class StateSpaceError(ValueError):
    pass


def default_state_limit() -> int:
    env = os.environ.get("PIC_STATE_LIMIT")
    if env:
        try:
            return int(env)
        except ValueError:
            raise StateSpaceError(f"PIC_STATE_LIMIT={env!r} is not an integer") from None
    return DEFAULT_STATE_LIMIT


@dataclass(frozen=True)
class Leak:
    """A cell where the counts fail to factor; ``joint * cell != m_count * w_count``."""

    cell: dict
    m: tuple
    w: dict
    joint: int
    cell_count: int
    m_count: int
    w_count: int

    def to_obj(self) -> dict:
        return {"cell": {str(k): v for k, v in self.cell.items()}, "m": list(self.m),
                "w": {str(k): v for k, v in self.w.items()}, "joint": self.joint,
                "cell_count": self.cell_count, "m_count": self.m_count, "w_count": self.w_count}


@dataclass
class OracleReport:
    decodable: bool
    failing_user: int | None
    leakage: dict[int, Leak | None] = field(default_factory=dict)
    enumerated_states: int = 0

    @property
    def private(self) -> bool:
        return all(v is None for v in self.leakage.values())

    @property
    def ok(self) -> bool:
        return self.decodable and self.private

    def to_obj(self) -> dict:
        return {"decodable": self.decodable, "failing_user": self.failing_user,
                "leakage": {str(i): (None if v is None else v.to_obj()) for i, v in self.leakage.items()},
                "enumerated_states": self.enumerated_states, "ok": self.ok}


@dataclass
class WeakReport:
    decodable: bool
    failing_user: int | None
    pairs: dict[tuple[int, int], Leak | None] = field(default_factory=dict)
    enumerated_states: int = 0

    @property
    def private(self) -> bool:
        return all(v is None for v in self.pairs.values())

    @property
    def ok(self) -> bool:
        return self.decodable and self.private

    def to_obj(self) -> dict:
        return {"decodable": self.decodable, "failing_user": self.failing_user,
                "pairs": [{"user": i, "message": j, "leak": None if v is None else v.to_obj()}
                          for (i, j), v in self.pairs.items()],
                "enumerated_states": self.enumerated_states, "ok": self.ok}


# ---------------------------------------------------------------- enumeration core

class _Space:
    """All q^L assignments of L independent uniform symbols, as digit arrays."""

    def __init__(self, q: int, names: list, state_limit: int | None):
        limit = default_state_limit() if state_limit is None else state_limit
        size = q ** len(names)
        if size > limit:
            raise StateSpaceError(f"{q}^{len(names)} = {size} states exceeds the limit {limit}")
        self.q = q
        self.names = names
        self.index = {nm: k for k, nm in enumerate(names)}
        self.size = size
        idx = np.arange(size, dtype=np.int64)
        self.digits = [(idx // q ** k) % q for k in range(len(names))]

    def combo(self, coeffs) -> np.ndarray:
        """sum coeff * variable mod q for an iterable of (name, coeff)."""
        out = np.zeros(self.size, dtype=np.int64)
        for nm, c in coeffs:
            if c % self.q:
                out += (c % self.q) * self.digits[self.index[nm]]
        return out % self.q

    def code(self, arrays) -> np.ndarray:
        """Dense ids of the joint value of several symbol arrays."""
        out = np.zeros(self.size, dtype=np.int64)
        for a in arrays:
            _, out = np.unique(out * self.q + a, return_inverse=True)
            out = out.astype(np.int64).reshape(-1)
        return out

    def values(self, names, state: int) -> dict:
        return {nm: int(self.digits[self.index[nm]][state]) for nm in names}


def _dense(a: np.ndarray) -> np.ndarray:
    _, inv = np.unique(a, return_inverse=True)
    return inv.astype(np.int64).reshape(-1)


def _functional(key: np.ndarray, target: np.ndarray) -> bool:
    """True iff ``target`` is a function of ``key``."""
    pairs = np.unique(key * (int(target.max()) + 1) + target)
    return len(np.unique(pairs // (int(target.max()) + 1))) == len(pairs)


def _independence_witness(z, m, w):
    """None if m and w are independent given z (uniform states); else witness ids."""
    S = len(z)
    zm = _dense(z * S + m)
    zw = _dense(z * S + w)
    zmw = _dense(zm * S + w)
    c_z = np.bincount(z)
    c_zm = np.bincount(zm)
    c_zw = np.bincount(zw)
    c_zmw = np.bincount(zmw)
    # one representative state per (z, m, w) triple
    rep = np.full(len(c_zmw), -1, dtype=np.int64)
    rep[zmw[::-1]] = np.arange(S - 1, -1, -1)
    zr, mr, wr = z[rep], m[rep], w[rep]
    lhs = c_zmw * c_z[zr]
    rhs = c_zm[zm[rep]] * c_zw[zw[rep]]
    bad = np.nonzero(lhs != rhs)[0]
    if len(bad):
        t = bad[np.lexsort((wr[bad], mr[bad], zr[bad]))[0]]
        s = int(rep[t])
        return s, None, int(c_zmw[t]), int(c_z[zr[t]]), int(c_zm[zm[s]]), int(c_zw[zw[s]])
    # every present triple factors; now look for (m, w) combinations absent from a cell
    n_m = np.bincount(z[np.unique(zm, return_index=True)[1]], minlength=len(c_z))
    n_w = np.bincount(z[np.unique(zw, return_index=True)[1]], minlength=len(c_z))
    n_mw = np.bincount(zr, minlength=len(c_z))
    short = np.nonzero(n_m * n_w != n_mw)[0]
    if not len(short):
        return None
    cell = int(short.min())
    in_cell = np.nonzero(z == cell)[0]
    present = set(zip(m[in_cell].tolist(), w[in_cell].tolist()))
    ms = sorted(set(m[in_cell].tolist()))
    ws = sorted(set(w[in_cell].tolist()))
    mv, wv = next((a, b) for a in ms for b in ws if (a, b) not in present)
    s_m = int(in_cell[np.nonzero(m[in_cell] == mv)[0][0]])
    s_w = int(in_cell[np.nonzero(w[in_cell] == wv)[0][0]])
    return s_m, s_w, 0, int(c_z[cell]), int(c_zm[zm[s_m]]), int(c_zw[zw[s_w]])


def _leak(space, z_names, m_rows, w_names, found) -> Leak:
    s_m, s_w, joint, cz, cm, cw = found
    s_w = s_m if s_w is None else s_w
    return Leak(space.values(z_names, s_m), tuple(int(r[s_m]) for r in m_rows),
                space.values(w_names, s_w), joint, cz, cm, cw)


# ---------------------------------------------------------------- linear schemes

def _linear_space(scheme: LinearScheme, state_limit):
    names = [("x", i, c) for i in range(1, scheme.N + 1) for c in range(1, scheme.n + 1)]
    names += [("k", str(kb.pattern), c) for kb in scheme.keys for c in range(1, kb.width + 1)]
    space = _Space(scheme.q, names, state_limit)
    rows = []
    for t in range(scheme.r):
        coeffs = []
        for i, g in enumerate(scheme.G, start=1):
            coeffs += [(("x", i, c + 1), v) for c, v in enumerate(g.entries[t]) if v]
        for kb in scheme.keys:
            coeffs += [(("k", str(kb.pattern), c + 1), v) for c, v in enumerate(kb.H.entries[t]) if v]
        rows.append(space.combo(coeffs))
    return space, rows


def _x(i, n):
    return [("x", i, c) for c in range(1, n + 1)]


def oracle_check_private(scheme: LinearScheme, graph: SideInfoGraph, state_limit: int | None = None) -> OracleReport:
    if scheme.N != graph.n:
        raise ValueError(f"scheme has {scheme.N} users, graph has {graph.n}")
    space, rows = _linear_space(scheme, state_limit)
    n = scheme.n
    m = space.code(rows)
    decodable, failing = True, None
    leakage: dict[int, Leak | None] = {}
    for i in graph.users:
        keys = [("k", str(kb.pattern), c) for kb in scheme.keys if kb.pattern.has(i)
                for c in range(1, kb.width + 1)]
        z_names = [nm for j in sorted(graph.s(i)) for nm in _x(j, n)] + keys
        z = space.code([space.digits[space.index[nm]] for nm in z_names])
        if decodable:
            xi = space.code([space.digits[space.index[nm]] for nm in _x(i, n)])
            if not _functional(_dense(z * (int(m.max()) + 1) + m), xi):
                decodable, failing = False, i
        w_names = [nm for j in graph.unknown(i) for nm in _x(j, n)]
        w = space.code([space.digits[space.index[nm]] for nm in w_names])
        found = _independence_witness(z, m, w)
        leakage[i] = None if found is None else _leak(space, z_names, rows, w_names, found)
    return OracleReport(decodable, failing, leakage, space.size)


def oracle_check_weak(scheme: LinearScheme, graph: SideInfoGraph, state_limit: int | None = None) -> WeakReport:
    if scheme.N != graph.n:
        raise ValueError(f"scheme has {scheme.N} users, graph has {graph.n}")
    if any(kb.width for kb in scheme.keys):
        raise ValueError("weak-privacy schemes carry no keys")
    space, rows = _linear_space(scheme, state_limit)
    n = scheme.n
    m = space.code(rows)
    decodable, failing = True, None
    pairs: dict[tuple[int, int], Leak | None] = {}
    for i in graph.users:
        z_names = [nm for j in sorted(graph.s(i)) for nm in _x(j, n)]
        z = space.code([space.digits[space.index[nm]] for nm in z_names])
        if decodable:
            xi = space.code([space.digits[space.index[nm]] for nm in _x(i, n)])
            if not _functional(_dense(z * (int(m.max()) + 1) + m), xi):
                decodable, failing = False, i
        for j in graph.unknown(i):
            w = space.code([space.digits[space.index[nm]] for nm in _x(j, n)])
            found = _independence_witness(z, m, w)
            pairs[(i, j)] = None if found is None else _leak(space, z_names, rows, _x(j, n), found)
    return WeakReport(decodable, failing, pairs, space.size)


def oracle_check_multicast(ms: MulticastScheme, graph: SideInfoGraph, state_limit: int | None = None) -> OracleReport:
    if ms.N != graph.n:
        raise ValueError(f"scheme has {ms.N} users, graph has {graph.n}")
    n = ms.n
    names = [nm for i in range(1, ms.N + 1) for nm in _x(i, n)]
    space = _Space(ms.q, names, state_limit)
    payload = [space.combo([(("x", i, c), v) for (i, c), v in s.coefficients]) for s in ms.sessions]
    decodable, failing = True, None
    leakage: dict[int, Leak | None] = {}
    for i in graph.users:
        heard = [payload[k] for k in ms.received_by(i)]
        m = space.code(heard)
        z_names = [nm for j in sorted(graph.s(i)) for nm in _x(j, n)]
        z = space.code([space.digits[space.index[nm]] for nm in z_names])
        if decodable:
            xi = space.code([space.digits[space.index[nm]] for nm in _x(i, n)])
            if not _functional(_dense(z * (int(m.max()) + 1) + m), xi):
                decodable, failing = False, i
        w_names = [nm for j in graph.unknown(i) for nm in _x(j, n)]
        w = space.code([space.digits[space.index[nm]] for nm in w_names])
        found = _independence_witness(z, m, w)
        leakage[i] = None if found is None else _leak(space, z_names, heard, w_names, found)
    return OracleReport(decodable, failing, leakage, space.size)
