"""Deterministic shortest path trees, tree loops and cut loci.

Shortest paths are made unique by comparing ``(length, sorted multiset of
edge ids)``; the second component simulates shrinking every edge weight by
an infinitesimal that decreases with the edge id.  The perturbation is
additive and symmetric under path reversal, so for every ordered pair of
vertices there is a unique minimal path and the two trees agree on it.
Lengths of minimizers are never changed by the tie-break.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .curves import Walk
from .errors import SystolicError
from .surface import Surface

PathKey = Tuple[Fraction, Tuple[int, ...]]


def key_add_edge(key: PathKey, e: int, w: Fraction) -> PathKey:
    dist, multiset = key
    return dist + w, tuple(sorted(multiset + (e,)))


def key_concat(a: PathKey, b: PathKey) -> PathKey:
    return a[0] + b[0], tuple(sorted(a[1] + b[1]))


ZERO_KEY: PathKey = (Fraction(0), ())


class ShortestPathTree:
    """Unique shortest paths from ``source`` under the perturbed metric."""

    def __init__(self, surface: Surface, source: int):
        self.surface = surface
        self.source = source
        n = surface.n_vertices
        self.dist: List[Optional[Fraction]] = [None] * n
        self.key: List[Optional[PathKey]] = [None] * n
        # half-edge by which the tree path enters the vertex; None at source
        self.parent_arrival: List[Optional[int]] = [None] * n
        self._run()

    def _run(self):
        s = self.surface
        done = [False] * s.n_vertices
        heap: List[Tuple[Fraction, Tuple[int, ...], int, Optional[int]]] = [
            (Fraction(0), (), self.source, None)
        ]
        while heap:
            d, ms, v, arr = heapq.heappop(heap)
            if done[v]:
                continue
            done[v] = True
            self.dist[v] = d
            self.key[v] = (d, ms)
            self.parent_arrival[v] = arr
            for h in s.rotations[v]:
                u = s.vertex_of[h ^ 1]
                if done[u]:
                    continue
                nd, nms = key_add_edge((d, ms), h >> 1, s.weights[h >> 1])
                heapq.heappush(heap, (nd, nms, u, h))

    def tree_edges(self) -> Set[int]:
        return {
            h >> 1 for h in self.parent_arrival if h is not None
        }

    def path_to(self, v: int) -> Tuple[int, ...]:
        """Half-edges of the unique tree path source -> v."""
        rev = []
        while v != self.source:
            h = self.parent_arrival[v]
            rev.append(h)
            v = self.surface.vertex_of[h]
        return tuple(reversed(rev))

    def path_key(self, v: int) -> PathKey:
        return self.key[v]


def shortest_path_tree(s: Surface, source: int) -> ShortestPathTree:
    return ShortestPathTree(s, source)


def tree_loop(s: Surface, t: ShortestPathTree, e: int) -> Walk:
    """The closed walk tree-path(source->u) . uv . tree-path(v->source)."""
    h = 2 * e
    u, v = s.vertex_of[h], s.vertex_of[h ^ 1]
    fwd = t.path_to(u) + (h,)
    back = tuple(x ^ 1 for x in reversed(t.path_to(v)))
    return Walk(fwd + back, True)


def tree_loop_key(s: Surface, t: ShortestPathTree, e: int) -> PathKey:
    both = key_concat(t.path_key(s.vertex_of[2 * e]), t.path_key(s.vertex_of[2 * e + 1]))
    return key_add_edge(both, e, s.weights[e])


@dataclass
class CutLocus:
    """Dual edges not dual to tree edges, with contractibility flags.

    ``flag[e]`` is True exactly when the tree loop of edge ``e`` is
    contractible in the perforated surface; tree edges themselves always
    carry True (their loops backtrack).
    """

    source: int
    tree_edges: Set[int]
    flag: Dict[int, bool]
    pruned_order: List[int] = field(default_factory=list)

    def contractible(self, e: int) -> bool:
        return self.flag[e]


def mark_contractible_tree_loops(s: Surface, t: ShortestPathTree) -> CutLocus:
    """Iterated leaf pruning of the cut locus.

    The cut locus is the dual graph minus duals of tree edges.  Removing
    non-perforated degree-one dual vertices repeatedly removes exactly the
    dual edges whose tree loops are contractible; perforated dual
    vertices are never treated as leaves.
    """
    tree = t.tree_edges()
    perforated_faces = s.perforated_face_indices()
    adj: List[Dict[int, int]] = [dict() for _ in range(s.n_faces)]
    degree = [0] * s.n_faces
    locus_edges = []
    for e in range(s.n_edges):
        if e in tree:
            continue
        f1 = s.face_index_of[2 * e]
        f2 = s.face_index_of[2 * e + 1]
        locus_edges.append(e)
        adj[f1][e] = f2
        adj[f2][e] = f1
        degree[f1] += 1
        degree[f2] += 1

    flag = {e: True for e in tree}
    for e in locus_edges:
        flag[e] = False

    removed_edge: Set[int] = set()
    removed_vertex = [False] * s.n_faces
    order: List[int] = []
    stack = [
        f
        for f in range(s.n_faces)
        if degree[f] == 1 and f not in perforated_faces
    ]
    while stack:
        f = stack.pop()
        if removed_vertex[f] or degree[f] != 1 or f in perforated_faces:
            continue
        live = [e for e in adj[f] if e not in removed_edge]
        if len(live) != 1:
            continue
        e = live[0]
        g = adj[f][e]
        removed_vertex[f] = True
        removed_edge.add(e)
        flag[e] = True
        order.append(e)
        degree[f] -= 1
        degree[g] -= 1
        if not removed_vertex[g] and degree[g] == 1 and g not in perforated_faces:
            stack.append(g)
    return CutLocus(t.source, tree, flag, order)
