import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from privic.catalogue import catalogue_entry
from privic.catalogue.instances import (COVERABLE5, RING5_NEIGHBOURS, UNCOVERABLE7, ring5_neighbours_scheme,
                                        uncoverable7_scheme)
from privic.coloring import multicast_min_sessions, multicast_scheme_from_coloring
from privic.model import KeyBlock, KeyPattern, LinearScheme, MulticastScheme, Session, SideInfoGraph
from privic.notation import scheme_from_sums
from privic.oracle import (StateSpaceError, oracle_check_multicast, oracle_check_private, oracle_check_weak)

from conftest import graph_and_scheme

TRIANGLE = catalogue_entry("focus-01").graph


def recount(scheme: LinearScheme, leak) -> tuple[int, int, int, int]:
    """Counts behind a leak witness by plain enumeration."""
    names = [("x", i, c) for i in range(1, scheme.N + 1) for c in range(1, scheme.n + 1)]
    names += [("k", str(kb.pattern), c) for kb in scheme.keys for c in range(1, kb.width + 1)]
    joint = cell = mc = wc = 0
    for vals in itertools.product(range(scheme.q), repeat=len(names)):
        a = dict(zip(names, vals))
        m = []
        for t in range(scheme.r):
            v = sum(g.entries[t][c] * a[("x", i + 1, c + 1)] for i, g in enumerate(scheme.G) for c in range(scheme.n))
            v += sum(kb.H.entries[t][c] * a[("k", str(kb.pattern), c + 1)]
                     for kb in scheme.keys for c in range(kb.width))
            m.append(v % scheme.q)
        in_cell = all(a[k] == v for k, v in leak.cell.items())
        m_ok = tuple(m) == leak.m
        w_ok = all(a[k] == v for k, v in leak.w.items())
        cell += in_cell
        mc += in_cell and m_ok
        wc += in_cell and w_ok
        joint += in_cell and m_ok and w_ok
    return joint, cell, mc, wc


def test_triangle_vertex_clean():
    s = scheme_from_sums(3, ["x1 + x2 + k101 + k110", "x2 + x3 + k110 + k011"])
    rep = oracle_check_private(s, TRIANGLE)
    assert rep.ok and rep.enumerated_states == 2 ** 6
    assert rep.leakage == {1: None, 2: None, 3: None}


def test_cleartext_leak_has_empty_cell():
    s = scheme_from_sums(2, ["x1"])
    rep = oracle_check_private(s, SideInfoGraph.empty(2))
    assert rep.leakage[1] is None
    leak = rep.leakage[2]
    assert leak.cell == {}
    assert leak.joint * leak.cell_count != leak.m_count * leak.w_count
    assert recount(s, leak) == (leak.joint, leak.cell_count, leak.m_count, leak.w_count)


def test_block_two_ring_scheme():
    rep = oracle_check_private(ring5_neighbours_scheme(), RING5_NEIGHBOURS)
    assert rep.ok and rep.enumerated_states == 2 ** 15


def test_deleted_key_witness_recounts():
    s = scheme_from_sums(3, ["x1 + x2 + k101", "x2 + x3 + k110 + k011"])
    leak = oracle_check_private(s, TRIANGLE).leakage[3]
    assert leak is not None
    assert recount(s, leak) == (leak.joint, leak.cell_count, leak.m_count, leak.w_count)
    assert leak.joint * leak.cell_count != leak.m_count * leak.w_count


def test_weak_cover_and_matrix_clean():
    cover = scheme_from_sums(5, ["x1 + x2 + x4", "x3 + x5"])
    rep = oracle_check_weak(cover, COVERABLE5)
    assert rep.ok and rep.enumerated_states == 2 ** 5
    rep = oracle_check_weak(uncoverable7_scheme(), UNCOVERABLE7)
    assert rep.ok and rep.enumerated_states == 2 ** 7
    assert len(rep.pairs) == sum(len(UNCOVERABLE7.unknown(i)) for i in UNCOVERABLE7.users)


def test_weak_masking_contrast():
    g = SideInfoGraph.from_lists([[2], [1], []])
    masked = oracle_check_weak(scheme_from_sums(3, ["x1 + x2"]), g)
    assert masked.pairs[(3, 1)] is None and masked.pairs[(3, 2)] is None
    split = oracle_check_weak(scheme_from_sums(3, ["x1", "x2"]), g)
    assert split.pairs[(3, 1)] is not None and split.pairs[(3, 2)] is not None


def test_weak_rejects_keys():
    with pytest.raises(ValueError):
        oracle_check_weak(scheme_from_sums(3, ["x1 + k110"]), TRIANGLE)


def test_multicast_ring_coloring():
    sc = multicast_min_sessions(RING5_NEIGHBOURS)
    ms = multicast_scheme_from_coloring(RING5_NEIGHBOURS, sc.coloring)
    rep = oracle_check_multicast(ms, RING5_NEIGHBOURS)
    assert rep.ok and rep.enumerated_states == 2 ** 10


def test_multicast_broadcast_leaks():
    ms = MulticastScheme(2, 1, 2, (Session(frozenset({1, 2}), (((1, 1), 1),)),))
    rep = oracle_check_multicast(ms, SideInfoGraph.empty(2))
    assert rep.leakage[2] is not None and rep.leakage[1] is None


def test_multicast_nothing_sent():
    rep = oracle_check_multicast(MulticastScheme(2, 1, 1, ()), SideInfoGraph.complete(1))
    assert not rep.decodable and rep.failing_user == 1


def test_state_limit():
    s = scheme_from_sums(3, ["x1 + x2 + k101 + k110", "x2 + x3 + k110 + k011"])
    with pytest.raises(StateSpaceError):
        oracle_check_private(s, TRIANGLE, state_limit=63)
    assert oracle_check_private(s, TRIANGLE, state_limit=64).ok


def test_state_limit_environment(monkeypatch):
    monkeypatch.setenv("PIC_STATE_LIMIT", "7")
    with pytest.raises(StateSpaceError):
        oracle_check_private(scheme_from_sums(3, ["x1 + x2 + x3"]), SideInfoGraph.complete(3), None)


def test_user_count_mismatch():
    with pytest.raises(ValueError):
        oracle_check_private(scheme_from_sums(2, ["x1 + x2"]), TRIANGLE)


def _relabel(g, s, perm):
    inv = {v: k for k, v in perm.items()}
    G = tuple(s.G[inv[i] - 1] for i in g.users)
    keys = tuple(KeyBlock(KeyPattern("".join("1" if kb.pattern.has(inv[i]) else "0" for i in g.users)), kb.H)
                 for kb in s.keys)
    return g.relabel(perm), LinearScheme(s.q, s.n, s.r, G, keys)


@given(graph_and_scheme(), st.randoms(use_true_random=False))
def test_enumeration_order_irrelevant(gs, rnd):
    g, s = gs
    order = list(g.users)
    rnd.shuffle(order)
    perm = dict(zip(g.users, order))
    h, t = _relabel(g, s, perm)
    a, b = oracle_check_private(s, g), oracle_check_private(t, h)
    assert a.decodable == b.decodable
    assert {perm[i] for i, v in a.leakage.items() if v} == {i for i, v in b.leakage.items() if v}


@given(graph_and_scheme(max_n=2, max_r=2))
def test_leak_witnesses_recount(gs):
    g, s = gs
    rep = oracle_check_private(s, g)
    for leak in rep.leakage.values():
        if leak is not None:
            assert recount(s, leak) == (leak.joint, leak.cell_count, leak.m_count, leak.w_count)
            assert leak.joint * leak.cell_count != leak.m_count * leak.w_count


def test_multicast_random_colorings_decode():
    rng = random.Random(5)
    for _ in range(20):
        N = rng.randint(1, 5)
        g = SideInfoGraph.from_lists([[j for j in range(1, N + 1) if j != i and rng.random() < 0.7]
                                      for i in range(1, N + 1)])
        sc = multicast_min_sessions(g)
        rep = oracle_check_multicast(multicast_scheme_from_coloring(g, sc.coloring), g)
        assert rep.ok
