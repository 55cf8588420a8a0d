from fractions import Fraction

import pytest

from systolic.curves import closed_walk, self_crossing_count, walk_length
from systolic.homotopy import is_contractible
from systolic.paths import (
    mark_contractible_tree_loops,
    shortest_path_tree,
    tree_loop,
)

from conftest import make_p, make_q, make_t3


def test_q_trivial_tree(Q):
    t = shortest_path_tree(Q, 0)
    assert t.dist[0] == 0
    assert t.tree_edges() == set()


def test_t3_distance_profile(T3):
    for src in range(9):
        t = shortest_path_tree(T3, src)
        dists = sorted(t.dist)
        assert dists == [0, 1, 1, 1, 1, 2, 2, 2, 2]


def test_p_distance(P):
    t = shortest_path_tree(P, 0)
    assert t.dist[1] == 1
    assert t.path_to(1) == (0,)  # via edge a


def test_tree_determinism(T3):
    t1 = shortest_path_tree(T3, 4)
    t2 = shortest_path_tree(T3, 4)
    assert t1.parent_arrival == t2.parent_arrival
    assert t1.key == t2.key


def test_tree_paths_reverse_consistent(T3):
    # symmetric tie-break: the unique u-v path is the reverse of the v-u path
    for u, v in [(0, 5), (2, 7), (1, 8)]:
        tu = shortest_path_tree(T3, u)
        tv = shortest_path_tree(T3, v)
        fwd = tu.path_to(v)
        back = tv.path_to(u)
        assert fwd == tuple(h ^ 1 for h in reversed(back))


def test_tree_loop_row(T3):
    t = shortest_path_tree(T3, 0)
    assert 1 not in t.tree_edges()
    loop = tree_loop(T3, t, 1)
    assert walk_length(T3, loop) == 3
    assert loop.closed


def test_tree_loop_on_tree_edge_backtracks(T3):
    t = shortest_path_tree(T3, 0)
    e = next(iter(t.tree_edges()))
    loop = tree_loop(T3, t, e)
    assert is_contractible(T3, loop)


def test_tree_loops_weakly_simple(T3, P):
    for s in (T3, P):
        for src in range(s.n_vertices):
            t = shortest_path_tree(s, src)
            for e in range(s.n_edges):
                assert self_crossing_count(s, tree_loop(s, t, e)) == 0


def test_cut_locus_q(Q):
    t = shortest_path_tree(Q, 0)
    locus = mark_contractible_tree_loops(Q, t)
    assert locus.flag[0] is False and locus.flag[1] is False


def test_cut_locus_p_all_perforated(P):
    t = shortest_path_tree(P, 0)
    locus = mark_contractible_tree_loops(P, t)
    for e in range(3):
        if e in locus.tree_edges:
            assert locus.flag[e]
        else:
            assert not locus.flag[e]


def test_cut_locus_matches_contractibility(T3):
    for src in range(9):
        t = shortest_path_tree(T3, src)
        locus = mark_contractible_tree_loops(T3, t)
        for e in range(18):
            expected = is_contractible(T3, tree_loop(T3, t, e))
            assert locus.flag[e] == expected, (src, e)


def test_cut_locus_matches_contractibility_t3b(T3b):
    t = shortest_path_tree(T3b, 0)
    locus = mark_contractible_tree_loops(T3b, t)
    for e in range(18):
        assert locus.flag[e] == is_contractible(T3b, tree_loop(T3b, t, e))


def test_distances_not_above_walks(T3):
    t = shortest_path_tree(T3, 0)
    # the row walk 0 -> v02 has length 2; the tree distance must not exceed it
    assert t.dist[2] <= 2
