import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from privic.bounds import (Bracket, PolymatroidInstance, SizeError, keyrate_lp, mais, pm4_generation,
                           polymatroid_check, sum_keyrate_bracket)
from privic.catalogue.instances import DIRECTED_TRIANGLE, RING5_AHEAD, RING5_NEIGHBOURS
from privic.feasibility import canonical_scheme, is_feasible
from privic.model import KeyAccessStructure, RateTuple, SideInfoGraph, all_patterns
from privic.verifier import scheme_rate, verify_private

from conftest import graphs, random_graph, random_scheme, random_structure


def induced(g: SideInfoGraph, keep) -> SideInfoGraph:
    keep = sorted(keep)
    idx = {u: k + 1 for k, u in enumerate(keep)}
    return SideInfoGraph.from_lists([[idx[j] for j in g.s(u) if j in idx] for u in keep])


def has_cycle(g: SideInfoGraph) -> bool:
    for size in range(2, g.n + 1):
        for cyc in itertools.permutations(g.users, size):
            if cyc[0] == min(cyc) and all(cyc[(k + 1) % size] in g.s(cyc[k]) for k in range(size)):
                return True
    return False


# ---------------------------------------------------------------- mais

def test_mais_examples():
    assert mais(DIRECTED_TRIANGLE)[0] == 2
    assert mais(RING5_NEIGHBOURS)[0] == 2
    assert mais(SideInfoGraph.empty(3)) == (3, (1, 2, 3))


def test_mais_witness_is_lexicographic():
    assert mais(DIRECTED_TRIANGLE)[1] == (1, 2)
    assert mais(RING5_NEIGHBOURS)[1] == (1, 3)


def test_mais_size_limit():
    with pytest.raises(SizeError):
        mais(SideInfoGraph.empty(25))


@given(graphs(1, 5))
def test_mais_bounds(g):
    size, witness = mais(g)
    assert size <= g.n and len(witness) == size
    assert (size == g.n) == (not has_cycle(g))
    assert not has_cycle(induced(g, witness))


@given(graphs(2, 5))
def test_mais_monotone_under_induced_subgraphs(g):
    full = mais(g)[0]
    for drop in g.users:
        assert mais(induced(g, set(g.users) - {drop}))[0] <= full


# ---------------------------------------------------------------- key-rate LP

def test_keyrate_examples():
    assert keyrate_lp(RING5_AHEAD).value == Fraction(10, 3)
    assert keyrate_lp(DIRECTED_TRIANGLE).value == 3
    for n in range(1, 5):
        assert keyrate_lp(SideInfoGraph.complete(n)).value == 0


def test_keyrate_default_is_pairs_only():
    assert keyrate_lp(RING5_AHEAD) == keyrate_lp(RING5_AHEAD, False)


def test_keyrate_size_limit():
    with pytest.raises(SizeError):
        keyrate_lp(SideInfoGraph.empty(7))


@given(graphs(1, 4))
def test_triples_only_tighten(g):
    assert keyrate_lp(g, True).value >= keyrate_lp(g).value


def test_keyrate_below_verified_sum_key_rate():
    rng = random.Random(11)
    seen = 0
    while seen < 30:
        N = rng.randint(1, 4)
        g = random_graph(rng, N)
        ks = random_structure(rng, N, 0.6)
        if not is_feasible(g, ks):
            continue
        s = canonical_scheme(g, ks)
        assert keyrate_lp(g).value <= scheme_rate(s).sum_key_rate
        seen += 1


# ---------------------------------------------------------------- bracket

def test_bracket_examples():
    assert sum_keyrate_bracket(RING5_AHEAD) == Bracket(Fraction(10, 3), "keyrate_lp", Fraction(5))
    for n in range(1, 5):
        b = sum_keyrate_bracket(SideInfoGraph.complete(n))
        assert (b.lower, b.upper) == (0, 1)
    b = sum_keyrate_bracket(DIRECTED_TRIANGLE)
    assert (b.lower, b.upper) == (3, 3)


@given(graphs(1, 5))
def test_bracket_ordered(g):
    b = sum_keyrate_bracket(g)
    assert b.lower <= b.upper
    assert b.lower == max(Fraction(mais(g)[0] - 1), keyrate_lp(g).value)


# ---------------------------------------------------------------- polymatroid bound

def triangle_check(vec, mode="elemental"):
    return polymatroid_check(PolymatroidInstance(DIRECTED_TRIANGLE, RateTuple.from_vector(vec, 3), mode=mode))


def test_polymatroid_vertex_passes():
    res = triangle_check([3, 1, 1, 0, 1, 0, 0])
    assert res.passes and res.verdict == "passes"


def test_polymatroid_violation():
    res = triangle_check([2, 0, 0, 1, 0, 1, 0])
    assert not res.passes and res.verdict == "outer_bound_violated"


def test_polymatroid_modes_agree_on_examples():
    for vec in ([3, 1, 1, 0, 1, 0, 0], [2, 0, 0, 1, 0, 1, 0]):
        assert triangle_check(vec).passes == triangle_check(vec, "exhaustive").passes


@pytest.mark.parametrize("lists", [[[]], [[], []], [[2], [1]], [[2], []], [[2], [3], [1]], [[], [], []],
                                   [[2, 3], [1], [1, 2]]])
def test_polymatroid_generous_tuple_passes(lists):
    g = SideInfoGraph.from_lists(lists)
    N = g.n
    rates = RateTuple.of(N, {b: N for b in all_patterns(N)})
    assert polymatroid_check(PolymatroidInstance(g, rates)).passes


def test_pm4_elemental_count():
    inst = PolymatroidInstance(SideInfoGraph.empty(2), RateTuple.of(1), key_support=("10", "01"))
    rows = pm4_generation(inst, "elemental")
    m = inst.bits
    fams = [r.family for r in rows]
    assert fams.count("pm3") == m * 2 ** (m - 1)
    assert fams.count("pm4") == math.comb(m, 2) * 2 ** (m - 2)
    assert len(rows) == 56
    assert pm4_generation(inst, "elemental") == rows


def test_pm4_exhaustive_count():
    inst = PolymatroidInstance(SideInfoGraph.empty(2), RateTuple.of(1), key_support=("10", "01"))
    assert len(pm4_generation(inst, "exhaustive")) == 120


def test_pm4_single_user():
    inst = PolymatroidInstance(SideInfoGraph.empty(1), RateTuple.of(1))
    rows = pm4_generation(inst, "elemental")
    assert [r.family for r in rows] == ["pm3"]
    assert not [r for r in pm4_generation(inst, "exhaustive") if r.family == "pm4"]


def test_instance_validation():
    from privic.model import ModelError

    with pytest.raises(ModelError):
        PolymatroidInstance(DIRECTED_TRIANGLE, RateTuple.of(1, {"110": 1}), key_support=("101",))
    with pytest.raises(ModelError):
        PolymatroidInstance(DIRECTED_TRIANGLE, RateTuple.of(1), mode="sideways")
    with pytest.raises(ModelError):
        PolymatroidInstance(DIRECTED_TRIANGLE, RateTuple.of(1, {"11": 1}))


def _verified_schemes(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        N = rng.randint(1, 3)
        g = random_graph(rng, N)
        if rng.random() < 0.5:
            ks = random_structure(rng, N, 0.6)
            if not is_feasible(g, ks):
                continue
            s = canonical_scheme(g, ks)
        else:
            s = random_scheme(rng, N)
            if not verify_private(s, g).ok:
                continue
        out.append((g, s))
    return out


def test_outer_bound_soundness():
    for g, s in _verified_schemes(50, 4):
        assert polymatroid_check(PolymatroidInstance(g, scheme_rate(s))).passes


@settings(max_examples=15)
@given(graphs(1, 3))
def test_outer_bound_rejects_rate_below_mais(g):
    # R below the acyclic lower bound is never achievable
    m, _ = mais(g)
    rates = RateTuple.of(Fraction(m) - Fraction(1, 2), {b: g.n for b in all_patterns(g.n)})
    assert not polymatroid_check(PolymatroidInstance(g, rates)).passes
