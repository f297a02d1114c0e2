import json
import random
import subprocess
import sys
from pathlib import Path

import pytest

from privic.catalogue import (SearchSpaceError, catalogue_entries, catalogue_entry, feasible_structures_of_size,
                              four_user_gap_demo, scalar_search, verify_catalogue)
from privic.catalogue.entries import CatalogueVertex
from privic.catalogue.instances import DIRECTED_TRIANGLE, GAP4, GAP4_CAPS, GAP4_RATE, RING5_NEIGHBOURS
from privic.feasibility import is_feasible
from privic.gf import GFMatrix
from privic.model import (KeyAccessStructure, KeyBlock, KeyPattern, LinearScheme, ModelError, SideInfoGraph,
                          all_patterns, derived_sets)
from privic.notation import scheme_from_sums
from privic.verifier import verify_private

from conftest import random_graph

ROOT = Path(__file__).resolve().parents[1]
COUNTS = json.loads((Path(__file__).parent / "fixtures" / "catalogue_counts.json").read_text())["entries"]


def test_counts_match_fixture():
    entries = {e.id: e for e in catalogue_entries()}
    assert sorted(entries) == sorted(c["entry"] for c in COUNTS)
    for c in COUNTS:
        e = entries[c["entry"]]
        assert e.printed_rows == c["rows"]
        assert len(e.vertices) == c["vertices"]
        # the extra printed row is the non-negativity line
        assert len(e.region.constraints) + 1 == e.printed_rows


def test_entry_population():
    entries = catalogue_entries()
    assert len(entries) == 20
    assert [e.n for e in entries].count(2) == 3
    assert [e.n for e in entries].count(3) == 17


def test_focus_entry():
    e = catalogue_entry("focus-01")
    assert "R + R_110 >= 3" in [c.name for c in e.region.constraints]
    assert len(e.vertices) == 8
    want = [2, 0, 0, 1, 0, 1, 1]
    v = next(v for v in e.vertices if v.rate.as_vector(3) == want)
    assert v.scheme == scheme_from_sums(3, ["x1 + x2 + k101 + k110", "x2 + x3 + k110 + k011"])


def test_two_user_no_edge_entry():
    e = catalogue_entry("n2-01")
    assert e.graph == SideInfoGraph.empty(2)
    v = next(v for v in e.vertices if v.rate.as_vector(2) == [2, 1, 1])
    assert v.scheme == scheme_from_sums(2, ["x1 + k10", "x2 + k01"])


def test_complete_three_user_entry():
    e = catalogue_entry("n3-16")
    assert e.graph == SideInfoGraph.complete(3)
    v = next(v for v in e.vertices if v.rate.as_vector(3) == [1, 0, 0, 0, 0, 0, 0])
    assert v.scheme == scheme_from_sums(3, ["x1 + x2 + x3"])


def test_unknown_entry():
    with pytest.raises(KeyError):
        catalogue_entry("n9-99")


def test_focus_vertices_pass_without_oracle():
    rep = verify_catalogue([catalogue_entry("focus-01")], oracle=False)
    assert rep.ok and rep.vertices == 8


def _flip_key_bit(v: CatalogueVertex) -> CatalogueVertex:
    s = v.scheme
    kb = s.keys[0]
    rows = [list(r) for r in kb.H.entries]
    rows[0][0] ^= 1
    H = GFMatrix(2, kb.H.rows, kb.H.cols, tuple(tuple(r) for r in rows))
    keys = (KeyBlock(kb.pattern, H),) + s.keys[1:]
    return CatalogueVertex(v.rate, LinearScheme(s.q, s.n, s.r, s.G, keys), v.sums)


def test_fault_injection_is_localised():
    e = catalogue_entry("focus-01")
    k = next(k for k, v in enumerate(e.vertices) if v.scheme.keys)
    e.vertices[k] = _flip_key_bit(e.vertices[k])
    rep = verify_catalogue([e])
    assert not rep.ok
    assert {(f.entry, f.vertex) for f in rep.failures} == {("focus-01", k)}


# ---------------------------------------------------------------- structures

def _set_pattern(users) -> str:
    users = {(u - 1) % 5 + 1 for u in users}
    return "".join("1" if u in users else "0" for u in range(1, 6))


# rows of the printed classification, offsets taken modulo 5
TABLE_ROWS = [
    [(0,), (1, 2), (-1, -2)],
    [(0, -1), (0, 1), (2, 3)],
    [(-1, 0, 1), (1, 2), (-1, -2)],
    [(0, 1), (1, 2, 3), (0, -1, -2)],
    [(-1, 0, 1), (1, 2, 3), (-1, -2, -3)],
    [(0, 1, 2), (0, -1, -2), (-1, -2, 1, 2)],
]


def test_thirty_structures_match_classes():
    found = {ks.patterns for ks in feasible_structures_of_size(RING5_NEIGHBOURS, 3)}
    classes = {frozenset(_set_pattern(i + d for d in s) for s in row) for row in TABLE_ROWS for i in range(1, 6)}
    assert len(found) == 30
    assert found == classes


def test_triangle_structures():
    found = feasible_structures_of_size(DIRECTED_TRIANGLE, 3)
    assert KeyAccessStructure.of(3, ["110", "101", "011"]) in found
    assert all(is_feasible(DIRECTED_TRIANGLE, ks) for ks in found)


def test_size_zero():
    rng = random.Random(2)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 4), rng.random())
        assert bool(feasible_structures_of_size(g, 0)) == (not derived_sets(g)[1])


def test_size_out_of_range():
    assert feasible_structures_of_size(DIRECTED_TRIANGLE, 7) == []


# ---------------------------------------------------------------- scalar search

TRIANGLE_CAPS = {"110": 1, "101": 1, "011": 1}


def test_triangle_search_finds_scheme():
    res = scalar_search(DIRECTED_TRIANGLE, 2, 2, TRIANGLE_CAPS)
    assert res.found and res.scheme.r == 2
    assert verify_private(res.scheme, DIRECTED_TRIANGLE).ok
    assert not scalar_search(DIRECTED_TRIANGLE, 2, 1, TRIANGLE_CAPS).found


def test_search_zero_transmissions():
    assert not scalar_search(DIRECTED_TRIANGLE, 2, 0, TRIANGLE_CAPS).found


def test_search_errors():
    with pytest.raises(ModelError):
        scalar_search(DIRECTED_TRIANGLE, 4, 2, TRIANGLE_CAPS)
    with pytest.raises(ModelError):
        scalar_search(DIRECTED_TRIANGLE, 2, 2, {"11": 1})
    with pytest.raises(SearchSpaceError):
        scalar_search(GAP4, 2, 3, {b: 2 for b in GAP4_CAPS}, limit=1000)


def test_search_reproducible():
    a = scalar_search(DIRECTED_TRIANGLE, 2, 2, TRIANGLE_CAPS)
    b = scalar_search(DIRECTED_TRIANGLE, 2, 2, TRIANGLE_CAPS)
    assert a == b


def _relabel_caps(caps, perm, n):
    inv = {v: k for k, v in perm.items()}
    return {"".join("1" if KeyPattern(b).has(inv[u]) else "0" for u in range(1, n + 1)): w for b, w in caps.items()}


def test_pruned_matches_unpruned():
    rng = random.Random(6)
    hits = 0
    for _ in range(30):
        n = rng.randint(2, 3)
        g = random_graph(rng, n)
        caps = {b: rng.randint(0, 2) for b in all_patterns(n)}
        r = rng.randint(1, 2)
        a = scalar_search(g, 2, r, caps).found
        b = scalar_search(g, 2, r, caps, pruned=False).found
        assert a == b
        hits += a
    assert 0 < hits < 30


def test_search_order_independent():
    rng = random.Random(7)
    for _ in range(20):
        g = random_graph(rng, 3)
        caps = {b: rng.randint(0, 1) for b in all_patterns(3)}
        r = rng.randint(1, 2)
        order = [1, 2, 3]
        rng.shuffle(order)
        perm = dict(zip((1, 2, 3), order))
        base = scalar_search(g, 2, r, caps).found
        assert scalar_search(g.relabel(perm), 2, r, _relabel_caps(caps, perm, 3)).found == base


# ---------------------------------------------------------------- four-user gap

# printed decoding conditions: unknown messages and hidden key patterns per user
GAP4_DECODE = {
    1: ({4}, {"0101", "0110", "0011"}),
    2: ({1, 3}, {"1001", "1010", "0011"}),
    3: ({4}, {"1001", "1100", "0101"}),
    4: ({2}, {"1010", "1100", "0110"}),
}


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_gap_graph_matches_span_conditions(i):
    unknown, hidden = GAP4_DECODE[i]
    assert set(GAP4.unknown(i)) == unknown
    assert {b for b in GAP4_CAPS if not KeyPattern(b).has(i)} == hidden


def test_four_user_demo():
    rep = four_user_gap_demo(relaxed=True)
    assert rep.ok
    assert rep.vector_rate == GAP4_RATE
    assert not rep.scalar[2].found
    assert rep.relaxed.found and rep.relaxed.scheme.r == 3


def test_build_script_check():
    out = subprocess.run([sys.executable, str(ROOT / "scripts" / "build_catalogue.py"), "--check"],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
