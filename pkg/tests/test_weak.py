import itertools
import random

import pytest
from hypothesis import given

from privic.catalogue.instances import COVERABLE5, DIRECTED_TRIANGLE, UNCOVERABLE7
from privic.coloring import secure_clique_cover
from privic.model import SideInfoGraph
from privic.weak import SizeError, necessary_condition_infeasible, recheck_certificate, subset_condition_violation

from conftest import graphs, random_graph


def test_subset_examples():
    assert subset_condition_violation(SideInfoGraph.empty(2)) == (1, 2)
    assert subset_condition_violation(COVERABLE5) is None
    assert subset_condition_violation(DIRECTED_TRIANGLE) == (1, 2)


def test_subset_complete_graph_clean():
    for n in range(1, 6):
        assert subset_condition_violation(SideInfoGraph.complete(n)) is None


def test_necessary_examples():
    assert necessary_condition_infeasible(COVERABLE5).verdict == "inconclusive"
    v = necessary_condition_infeasible(SideInfoGraph.empty(2))
    assert v.verdict == "infeasible" and v.user == 1
    assert v.certificates == {(1,): (2, 1)}


def test_necessary_uncoverable_not_flagged():
    # a linear weak-private code exists there, so the necessary condition must stay silent
    assert not necessary_condition_infeasible(UNCOVERABLE7).infeasible


def test_necessary_size_limit():
    with pytest.raises(SizeError):
        necessary_condition_infeasible(SideInfoGraph.empty(21))


def test_subsumption_on_random_graphs():
    rng = random.Random(9)
    flagged = 0
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 6), rng.random())
        if subset_condition_violation(g) is not None:
            flagged += 1
            assert necessary_condition_infeasible(g).infeasible
    assert flagged


@given(graphs(1, 6))
def test_cover_implies_inconclusive(g):
    if secure_clique_cover(g) is not None:
        assert not necessary_condition_infeasible(g).infeasible


@given(graphs(1, 6))
def test_certificates_recheck(g):
    v = necessary_condition_infeasible(g)
    if not v.infeasible:
        return
    i = v.user
    expected = {tuple(sorted(set(extra) | {i})) for size in range(len(g.s(i)) + 1)
                for extra in itertools.combinations(sorted(g.s(i)), size)}
    assert set(v.certificates) == expected
    for S, (j, k) in v.certificates.items():
        assert j != i and recheck_certificate(g, S, j, k)


@given(graphs(2, 5))
def test_subset_witness_definition(g):
    w = subset_condition_violation(g)
    pairs = [(i, j) for i in g.users for j in g.users
             if i != j and i not in g.s(j) and g.s(i) <= g.a(j)]
    assert w == (min(pairs) if pairs else None)
