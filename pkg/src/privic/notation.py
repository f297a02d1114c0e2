"""Build linear schemes from transmissions written as sums.

``"x1 + x2 + k101 + k110"`` is one transmitted symbol. A superscript picks a
coordinate (``x3^2``, ``k0101^2``), a prime picks the second coordinate of a key
(``k'110``), and an integer prefix is a coefficient (``2*x1``).
"""

from __future__ import annotations

import re
from typing import Mapping, Sequence

from .gf import GFMatrix
from .model import KeyBlock, KeyPattern, LinearScheme, ModelError

_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?([xXkK])('?)(\d+)(?:\^\(?(\d+)\)?)?$")


def _terms(text: str):
    for raw in text.split("+"):
        raw = raw.strip().replace(" ", "")
        if not raw:
            continue
        mt = _TERM.match(raw)
        if not mt:
            raise ModelError(f"cannot read term {raw!r}")
        coef, kind, prime, label, sup = mt.groups()
        col = int(sup) if sup else (2 if prime else 1)
        yield int(coef or 1), kind.lower(), label, col


def scheme_from_sums(N: int, sums: Sequence[str], q: int = 2, n: int = 1,
                     widths: Mapping[str, int] | None = None) -> LinearScheme:
    """One transmitted symbol per entry of ``sums``.

    Key widths default to the largest coordinate referenced; ``widths`` may
    declare wider blocks (unused columns stay zero) or keys that no sum uses.
    """
    r = len(sums)
    g = [[[0] * n for _ in range(r)] for _ in range(N)]
    used: dict[KeyPattern, dict[tuple[int, int], int]] = {}
    for t, text in enumerate(sums):
        for coef, kind, label, col in _terms(text):
            if kind == "x":
                i = int(label)
                if not 1 <= i <= N or not 1 <= col <= n:
                    raise ModelError(f"x_{i}^({col}) outside {N} users, block length {n}")
                g[i - 1][t][col - 1] = (g[i - 1][t][col - 1] + coef) % q
            else:
                b = KeyPattern(label)
                if len(b) != N:
                    raise ModelError(f"key pattern {b} does not have length {N}")
                cell = used.setdefault(b, {})
                cell[(t, col)] = (cell.get((t, col), 0) + coef) % q
    widths = {KeyPattern(b): w for b, w in (widths or {}).items()}
    keys = []
    for b in sorted(set(used) | set(widths)):
        cells = used.get(b, {})
        w = max([c for _, c in cells] + [widths.get(b, 0)])
        H = [[0] * w for _ in range(r)]
        for (t, c), v in cells.items():
            H[t][c - 1] = v
        keys.append(KeyBlock(b, GFMatrix(q, r, w, tuple(tuple(row) for row in H))))
    G = tuple(GFMatrix(q, r, n, tuple(tuple(row) for row in gi)) for gi in g)
    return LinearScheme(q, n, r, G, tuple(keys))


def scheme_to_sums(scheme: LinearScheme) -> list[str]:
    out = []
    for t in range(scheme.r):
        terms = []
        for i, gi in enumerate(scheme.G, start=1):
            for c, v in enumerate(gi.entries[t], start=1):
                if v:
                    terms.append(("" if v == 1 else f"{v}*") + f"x{i}" + (f"^{c}" if scheme.n > 1 else ""))
        for kb in scheme.keys:
            for c, v in enumerate(kb.H.entries[t], start=1):
                if v:
                    terms.append(("" if v == 1 else f"{v}*") + f"k{kb.pattern}" + (f"^{c}" if kb.width > 1 else ""))
        out.append(" + ".join(terms) or "0")
    return out
