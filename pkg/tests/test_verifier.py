import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from privic.catalogue import catalogue_entry
from privic.catalogue.instances import (COVERABLE5, RING5_AHEAD, RING5_NEIGHBOURS, UNCOVERABLE7,
                                        ring5_ahead_scheme, ring5_neighbours_scheme, uncoverable7_scheme)
from privic.gf import GFMatrix, rank
from privic.model import KeyBlock, KeyPattern, LinearScheme, SideInfoGraph
from privic.notation import scheme_from_sums
from privic.oracle import oracle_check_private, oracle_check_weak
from privic.verifier import VerifierError, scheme_rate, verify_private, verify_weak_private

from conftest import graph_and_scheme

TRIANGLE = catalogue_entry("focus-01").graph
TRIANGLE_SUMS = ["x1 + x2 + k101 + k110", "x2 + x3 + k110 + k011"]


def test_triangle_vertex_scheme():
    assert verify_private(scheme_from_sums(3, TRIANGLE_SUMS), TRIANGLE).ok


def test_ring_ahead_scheme():
    assert verify_private(ring5_ahead_scheme(), RING5_AHEAD).ok


def test_deleted_key_exposes_user_three():
    s = scheme_from_sums(3, ["x1 + x2 + k101", "x2 + x3 + k110 + k011"])
    v = verify_private(s, TRIANGLE)
    assert (v.status, v.user) == ("privacy_violation", 3)
    assert not oracle_check_private(s, TRIANGLE).private


def test_cleartext_on_empty_pair():
    s = scheme_from_sums(2, ["x1", "x2 + k01"])
    v = verify_private(s, SideInfoGraph.empty(2))
    assert (v.status, v.user) == ("privacy_violation", 2)


def test_decode_violation_reports_coordinate():
    s = scheme_from_sums(2, ["x1^1 + x1^2", "x2^1"], n=2)
    v = verify_private(s, SideInfoGraph.complete(2))
    assert (v.status, v.user, v.coordinate) == ("decode_violation", 1, 2)


def test_weak_examples():
    assert verify_weak_private(uncoverable7_scheme(), UNCOVERABLE7).ok
    cover = scheme_from_sums(5, ["x1 + x2 + x4", "x3 + x5"])
    assert verify_weak_private(cover, COVERABLE5).ok
    v = verify_weak_private(scheme_from_sums(2, ["x1", "x2"]), SideInfoGraph.empty(2))
    assert (v.status, v.user) == ("privacy_violation", 1)


def test_weak_cleartext_user_two():
    v = verify_weak_private(scheme_from_sums(2, ["x1"]), SideInfoGraph.empty(2))
    assert (v.status, v.user) == ("privacy_violation", 2)


def test_weak_excludes_own_column():
    # each column alone is private only against the span of the other unknowns
    s = scheme_from_sums(3, ["x1 + x2", "x3"])
    g = SideInfoGraph.from_lists([[2, 3], [1, 3], []])
    assert verify_weak_private(s, g).ok
    assert oracle_check_weak(s, g).ok


def test_weak_rejects_keys():
    with pytest.raises(VerifierError):
        verify_weak_private(scheme_from_sums(3, TRIANGLE_SUMS), TRIANGLE)


def test_user_count_mismatch():
    with pytest.raises(VerifierError):
        verify_private(scheme_from_sums(3, TRIANGLE_SUMS), SideInfoGraph.empty(2))


def test_scheme_rates():
    t = scheme_rate(scheme_from_sums(3, TRIANGLE_SUMS))
    assert t.R == 2 and t.as_dict() == {"110": 1, "101": 1, "011": 1}
    t = scheme_rate(ring5_neighbours_scheme())
    assert t.R == Fraction(5, 2)
    assert t.as_dict() == {b: Fraction(1, 2) for b in ["11000", "00110", "10001", "01100", "00011"]}
    empty = LinearScheme(2, 1, 0, (GFMatrix.zeros(2, 0, 1),))
    t = scheme_rate(empty)
    assert t.R == 0 and t.key_rates == ()


def test_ring_neighbours_scheme_verifies():
    assert verify_private(ring5_neighbours_scheme(), RING5_NEIGHBOURS).ok


def _transform(scheme: LinearScheme, rng: random.Random) -> LinearScheme:
    r, q = scheme.r, scheme.q
    while True:
        T = GFMatrix.from_rows(q, [[rng.randrange(q) for _ in range(r)] for _ in range(r)], r)
        if rank(T) == r:
            break
    return LinearScheme(q, scheme.n, r, tuple(T @ g for g in scheme.G),
                        tuple(KeyBlock(kb.pattern, T @ kb.H) for kb in scheme.keys))


@given(graph_and_scheme(), st.integers(0, 2 ** 16))
def test_invertible_row_transform(gs, seed):
    g, s = gs
    before = verify_private(s, g)
    after = verify_private(_transform(s, random.Random(seed)), g)
    assert before.ok == after.ok


@given(graph_and_scheme(), st.randoms(use_true_random=False))
def test_relabel_users(gs, rnd):
    g, s = gs
    order = list(g.users)
    rnd.shuffle(order)
    perm = dict(zip(g.users, order))
    inv = {v: k for k, v in perm.items()}
    G = tuple(s.G[inv[i] - 1] for i in g.users)
    keys = tuple(KeyBlock(KeyPattern("".join("1" if kb.pattern.has(inv[i]) else "0" for i in g.users)), kb.H)
                 for kb in s.keys)
    moved = LinearScheme(s.q, s.n, s.r, G, keys)
    a, b = verify_private(s, g), verify_private(moved, g.relabel(perm))
    assert a.ok == b.ok


@given(graph_and_scheme(max_n=3, max_r=3))
def test_verifier_matches_oracle(gs):
    g, s = gs
    assert verify_private(s, g).ok == oracle_check_private(s, g).ok


@given(st.integers(0, 2 ** 16))
def test_weak_verifier_matches_oracle(seed):
    rng = random.Random(seed)
    N = rng.randint(2, 4)
    g = SideInfoGraph.from_lists([[j for j in range(1, N + 1) if j != i and rng.random() < 0.5]
                                  for i in range(1, N + 1)])
    r = rng.randint(1, 3)
    G = tuple(GFMatrix.from_rows(2, [[rng.randrange(2)] for _ in range(r)], 1) for _ in range(N))
    s = LinearScheme(2, 1, r, G)
    assert verify_weak_private(s, g).ok == oracle_check_weak(s, g).ok
