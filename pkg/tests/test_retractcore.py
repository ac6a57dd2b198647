import itertools
import random

import pytest
from hypothesis import given, strategies as st

from known_graphs import XX2X_HALFWAY, Z33_PRETZEL
from pretzelkit.cancellative import bundled_monoid
from pretzelkit.errors import AlphabetMismatch, SearchBudgetExceeded
from pretzelkit.graphs import (base_tree, glue, identity_graph, isomorphic,
                               make_graph, reroot_plus)
from pretzelkit.idempath import tilde
from pretzelkit.retractcore import (Morphism, core, find_birooted_morphism,
                                    find_endomorphism_shrinking,
                                    idempotent_power, is_core)
from pretzelkit.terms import tree_of, tree_retract
from strategies import graphs, shuffled, trees


def brute_force_shrinks(g):
    """Does some root-fixing endomorphism miss a vertex? Tries every map."""
    for m in itertools.product(range(g.n), repeat=g.n):
        if m[g.start] != g.start or m[g.end] != g.end or len(set(m)) == g.n:
            continue
        if all((m[a], l, m[b]) in g.edges for a, l, b in g.edges):
            return True
    return False


def test_base_tree_is_core():
    assert find_endomorphism_shrinking(base_tree("x", "x")) is None


def test_xplus_x_folds():
    t = tree_of("x^+x", "x")
    phi = find_endomorphism_shrinking(t.graph)
    assert phi is not None and phi.is_valid()
    branch = next(v for v in range(t.n) if v not in (t.start, t.end))
    assert phi(branch) == t.end


def test_two_paths_through_distinct_middles():
    g = make_graph("x", 4, [(0, "x", 1), (1, "x", 3), (0, "x", 2), (2, "x", 3)], 0, 3)
    phi = find_endomorphism_shrinking(g)
    assert phi is not None and {phi(1), phi(2)} in ({1}, {2})
    assert core(g).n == 3


def test_xx2x_halfway_is_core():
    assert is_core(XX2X_HALFWAY)
    assert not brute_force_shrinks(XX2X_HALFWAY)


@given(graphs(max_vertices=5, max_extra=4))
def test_shrinking_search_matches_brute_force(g):
    assert (find_endomorphism_shrinking(g) is not None) == brute_force_shrinks(g)


@given(trees(max_edges=12))
def test_core_of_tree_matches_tree_retract(t):
    assert isomorphic(core(t.graph), tree_retract(t).graph)


@given(graphs())
def test_core_is_idempotent_and_a_core(g):
    h = core(g)
    assert core(h) == h and is_core(h)
    assert find_birooted_morphism(g, h) is not None


@given(graphs(), st.randoms())
def test_core_ignores_vertex_names(g, r):
    assert isomorphic(core(shuffled(g, r)), core(g))


def test_idempotent_power():
    assert idempotent_power((1, 2, 0)) == (0, 1, 2)
    assert idempotent_power((1, 1, 3, 2)) == (1, 1, 2, 3)
    phi = (1, 2, 3, 1, 0)
    psi = idempotent_power(phi)
    assert all(psi[psi[v]] == psi[v] for v in range(5))


def test_core_budget_is_loud():
    star = make_graph("x", 14, [(0, "x", i) for i in range(1, 14)]
                      + [(i, "x", i + 1) for i in range(1, 13)], 0, 0)
    with pytest.raises(SearchBudgetExceeded):
        core(star, budget=3)


# morphisms between graphs

def test_identity_morphism_always_found():
    rng = random.Random(4)
    for g in (XX2X_HALFWAY, Z33_PRETZEL, base_tree("xy", "y")):
        h = shuffled(g, rng)
        phi = find_birooted_morphism(g, h)
        assert phi is not None and phi.is_valid()


def test_no_morphism_between_different_letters():
    assert find_birooted_morphism(base_tree("xy", "x"), base_tree("xy", "y")) is None
    with pytest.raises(AlphabetMismatch):
        find_birooted_morphism(base_tree("x", "x"), base_tree("xy", "x"))


def test_morphism_image():
    g = make_graph("x", 3, [(0, "x", 1), (0, "x", 2)], 0, 0)
    m = Morphism(g, g, (0, 1, 1))
    assert m.is_valid() and m.image().n == 2


@given(graphs(max_vertices=6, max_extra=3), graphs(max_vertices=6, max_extra=3))
def test_morphism_both_ways_gives_same_core(s, t):
    if find_birooted_morphism(s, t) and find_birooted_morphism(t, s):
        assert isomorphic(core(s), core(t))


# interaction with glue, reroot and tilde

@given(graphs(max_vertices=5), graphs(max_vertices=5))
def test_core_commutes_with_glue(g, h):
    assert isomorphic(core(glue(core(g), core(h))), core(glue(g, h)))


@given(graphs())
def test_core_commutes_with_reroot(g):
    assert isomorphic(core(reroot_plus(g)), core(reroot_plus(core(g))))


C3 = bundled_monoid("c3")


@given(trees(max_edges=10, alphabet="x"), trees(max_edges=6, alphabet="x"))
def test_core_and_tilde_stack(s, t):
    g = glue(s.graph, reroot_plus(t.graph))
    once = core(tilde(g, C3)[0])
    assert isomorphic(core(tilde(core(tilde(g, C3)[0]), C3)[0]), once)


def test_identity_graph_core():
    assert core(identity_graph("xy")) == identity_graph("xy")
