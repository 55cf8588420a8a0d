"""Homotopy tests for curves on combinatorial surfaces.

Words live in the free group on the edges: letter ``e + 1`` stands for
edge ``e`` traversed by its even half-edge, negative letters for the
reverse. Three backends:

* surfaces with boundary: the non-perforated faces are collapsed onto a
  spine, leaving a free fundamental group where everything is exact word
  reduction;
* closed tori: homotopy equals homology, decided by integer lattice
  membership;
* closed surfaces of genus >= 2: the spanning tree is contracted, the
  face relators are Tietze-eliminated to a single relator, the relator is
  normalized to the standard commutator form (all substitutions logged),
  and words are decided by Dehn's algorithm on the standard presentation.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .curves import Arc, Walk, validate_arc, validate_walk, walk_endpoints
from .errors import SystolicError
from .surface import Surface

Word = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Free words


def reduce_word(word: Sequence[int]) -> Word:
    out: List[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(reduce_word(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def least_rotation(word: Word) -> Word:
    if not word:
        return word
    return min(tuple(word[k:] + word[:k]) for k in range(len(word)))


# ---------------------------------------------------------------------------
# Spine presentation (surfaces with boundary)


class SpinePresentation:
    """Free presentation of pi_1 for a surface with boundary.

    Collapses non-perforated faces one by one: a face with an edge on its
    boundary exactly once, bounding a different face on the other side,
    is merged into that face and the edge removed; the removed half-edge
    expands to the remainder of the face boundary.  The surviving graph
    is a spine of the surface; after contracting a spanning tree its
    cotree edges generate a free group.
    """

    def __init__(self, s: Surface):
        if s.is_closed():
            raise SystolicError("spine presentation needs a perforated face")
        self.surface = s
        live_faces: Dict[int, List[int]] = {
            fid: list(s.face_cycle(fid)) for fid in s.face_ids
        }
        perforated = set(s.perforated)
        self._expansion: Dict[int, Tuple[int, ...]] = {}
        live_edges: Set[int] = set(range(s.n_edges))

        while True:
            candidate = None
            for fid in sorted(live_faces):
                if fid in perforated:
                    continue
                cycle = live_faces[fid]
                in_cycle = set(cycle)
                for h in sorted(cycle):
                    if (h ^ 1) not in in_cycle:
                        candidate = (fid, h)
                        break
                if candidate:
                    break
            if candidate is None:
                remaining = [f for f in live_faces if f not in perforated]
                if remaining:
                    raise SystolicError("face collapse got stuck on a closed piece")
                break
            fid, h = candidate
            cycle = live_faces.pop(fid)
            k = cycle.index(h)
            rest = cycle[k + 1:] + cycle[:k]
            gid, gcycle = next(
                (g, c) for g, c in live_faces.items() if (h ^ 1) in c
            )
            j = gcycle.index(h ^ 1)
            live_faces[gid] = gcycle[:j] + rest + gcycle[j + 1:]
            self._expansion[h] = tuple(x ^ 1 for x in reversed(rest))
            live_edges.discard(h >> 1)

        self.live_edges = live_edges
        self._expand_memo: Dict[int, Word] = {}
        self.tree_edges, self.generator_of = _graph_presentation(s, live_edges)
        rank = len(live_edges) - len(self.tree_edges)
        assert rank == 2 * s.genus + s.boundary_count - 1

    def _expand(self, h: int) -> Word:
        if (h >> 1) in self.live_edges:
            return (h,)
        if h in self._expand_memo:
            return self._expand_memo[h]
        if h in self._expansion:
            out: List[int] = []
            for x in self._expansion[h]:
                out.extend(self._expand(x))
            res = tuple(out)
        else:
            res = invert_word(self._expand(h ^ 1))
        self._expand_memo[h] = res
        return res

    def word_of(self, half_edges: Sequence[int]) -> Word:
        letters: List[int] = []
        for h in half_edges:
            for x in self._expand(h):
                g = self.generator_of.get(x >> 1)
                if g is None:
                    continue
                letters.append(g if x % 2 == 0 else -g)
        return reduce_word(letters)


def _graph_presentation(s: Surface, edges: Set[int]):
    """Spanning tree of the subgraph on ``edges``; cotree edges become
    generators numbered from 1 upward in edge order."""
    parent_seen = [False] * s.n_vertices
    tree: Set[int] = set()
    parent_seen[0] = True
    frontier = [0]
    adj: Dict[int, List[Tuple[int, int]]] = {}
    for e in sorted(edges):
        u, v = s.endpoints(e)
        adj.setdefault(u, []).append((e, v))
        adj.setdefault(v, []).append((e, u))
    while frontier:
        v = frontier.pop(0)
        for e, u in adj.get(v, []):
            if not parent_seen[u]:
                parent_seen[u] = True
                tree.add(e)
                frontier.append(u)
    if not all(parent_seen):
        raise SystolicError("spine graph is disconnected")
    generator_of: Dict[int, int] = {}
    g = 1
    for e in sorted(edges):
        if e not in tree:
            generator_of[e] = g
            g += 1
    return tree, generator_of


@lru_cache(maxsize=64)
def _spine(s: Surface) -> SpinePresentation:
    return SpinePresentation(s)


# ---------------------------------------------------------------------------
# Closed surfaces


def _cotree_word(s: Surface, generator_of: Dict[int, int], half_edges) -> List[int]:
    out = []
    for h in half_edges:
        g = generator_of.get(h >> 1)
        if g is not None:
            out.append(g if h % 2 == 0 else -g)
    return out


class ClosedPresentation:
    """One-relator standard presentation of a closed surface, genus >= 2."""

    def __init__(self, s: Surface):
        if not s.is_closed() or s.genus < 2:
            raise SystolicError("closed presentation requires a closed surface of genus >= 2")
        self.surface = s
        self.tree_edges, self.generator_of = _graph_presentation(
            s, set(range(s.n_edges))
        )
        relators = []
        for fid in s.face_ids:
            w = reduce_word(_cotree_word(s, self.generator_of, s.face_cycle(fid)))
            if w:
                relators.append(list(w))
        self.subs: List[Tuple[int, Word]] = []
        self._next_letter = max(self.generator_of.values(), default=0) + 1
        relator = self._eliminate_to_one(relators)
        self.relator = self._normalize(relator)
        self.genus = len(self.relator) // 4
        assert self.genus == s.genus
        self._dehn_table = self._build_dehn_table()

    # -- Tietze elimination to a single relator -------------------------

    def _eliminate_to_one(self, relators: List[List[int]]) -> List[int]:
        while len(relators) > 1:
            occ: Dict[int, List[int]] = {}
            for i, r in enumerate(relators):
                for x in r:
                    occ.setdefault(abs(x), []).append(i)
            best = None
            for letter, where in sorted(occ.items()):
                if len(where) == 2 and where[0] != where[1]:
                    i, j = where
                    size = len(relators[i]) + len(relators[j])
                    if best is None or size < best[0]:
                        best = (size, letter, i, j)
            if best is None:
                raise SystolicError("face relators do not connect; dual not connected?")
            _, letter, i, j = best
            ri = relators[i]
            k = next(idx for idx, x in enumerate(ri) if abs(x) == letter)
            rot = ri[k:] + ri[:k]
            head, rest = rot[0], rot[1:]
            # head = letter^s; relator head*rest = 1 -> letter^s = rest^{-1}
            replacement = invert_word(rest) if head > 0 else tuple(rest)
            self.subs.append((letter, replacement))
            rj = self._apply_sub(relators[j], letter, replacement)
            relators = [r for idx, r in enumerate(relators) if idx not in (i, j)]
            relators.append(list(reduce_word(rj)))
        return list(cyclic_reduce(relators[0]))

    @staticmethod
    def _apply_sub(word: Sequence[int], letter: int, replacement: Word) -> List[int]:
        out: List[int] = []
        for x in word:
            if x == letter:
                out.extend(replacement)
            elif x == -letter:
                out.extend(invert_word(replacement))
            else:
                out.append(x)
        return out

    # -- normalization to the standard commutator relator ----------------

    def _fresh(self) -> int:
        x = self._next_letter
        self._next_letter += 1
        return x

    @staticmethod
    def _clean_quad_at(w: List[int], i: int) -> bool:
        """Is w[i..i+3] (cyclic) a commutator block (p, q, -p, -q) whose
        letters occur nowhere else?  Such blocks are already normalized
        and survive later rounds intact (possibly inverted)."""
        n = len(w)
        p, q, r, t = (w[(i + d) % n] for d in range(4))
        if r != -p or t != -q or abs(p) == abs(q):
            return False
        others = [w[(i + d) % n] for d in range(4, n)]
        return all(abs(z) not in (abs(p), abs(q)) for z in others)

    def _clean_letters(self, w: List[int]) -> Set[int]:
        clean: Set[int] = set()
        for i in range(len(w)):
            if self._clean_quad_at(w, i):
                clean.add(abs(w[i]))
                clean.add(abs(w[(i + 1) % len(w)]))
        return clean

    def _normalize(self, relator: List[int]) -> Word:
        """Rewrite the relator into commutator blocks, logging substitutions.

        Each round rotates an interleaved pair (x, y) to the front and
        applies four generator changes that turn the prefix into a fresh
        commutator block; already-clean blocks ride along unchanged, so
        the number of non-normalized letters drops every round.
        """
        w = list(cyclic_reduce(relator))
        while True:
            counts: Dict[int, int] = {}
            for t in w:
                counts[abs(t)] = counts.get(abs(t), 0) + 1
            assert all(c == 2 for c in counts.values()), "letter not paired in relator"
            clean = self._clean_letters(w)
            start = next((i for i, t in enumerate(w) if abs(t) not in clean), None)
            if start is None:
                quad = next(i for i in range(len(w)) if self._clean_quad_at(w, i))
                w = w[quad:] + w[:quad]
                return tuple(w)
            w = w[start:] + w[:start]
            x = w[0]
            j = next(i for i in range(1, len(w)) if abs(w[i]) == abs(x))
            assert w[j] == -x, "relator is not orientable"
            y_pos = None
            for i in range(1, j):
                if sum(1 for t in w[1:j] if abs(t) == abs(w[i])) == 1:
                    y_pos = i
                    break
            if y_pos is None:
                raise SystolicError("relator splits as a free product; not a surface word")
            y = w[y_pos]
            k = next(i for i in range(j + 1, len(w)) if abs(w[i]) == abs(y))
            assert w[k] == -y
            A = tuple(w[1:y_pos])
            B = tuple(w[y_pos + 1:j])
            C = tuple(w[j + 1:k])
            D = tuple(w[k + 1:])
            # With u := B x^{-1} C the relator x A y B x^{-1} C y^{-1} D
            # becomes (after a rotation and an inversion)
            # u R y u^{-1} y^{-1} S, R = (DC)^{-1}, S = (BA)^{-1}; sliding
            # R out in three more steps leaves u3 y2 u3^{-1} y2^{-1} S R.
            u = self._fresh()
            self._log_sub(abs(x), x, C + (-u,) + B)
            R = invert_word(D + C)
            S = invert_word(B + A)
            u2 = self._fresh()
            self.subs.append((u, (u2,) + invert_word(R)))
            y2 = self._fresh()
            self._log_sub(abs(y), y, (y2,) + invert_word(R))
            u3 = self._fresh()
            self.subs.append((u2, R + (u3,)))
            w = list(cyclic_reduce((u3, y2, -u3, -y2) + S + R))

    def _log_sub(self, letter: int, occurrence_sign: int, replacement: Word):
        """Record letter -> replacement given the rule was derived for the
        signed occurrence; normalize to the positive letter."""
        if occurrence_sign > 0:
            self.subs.append((letter, replacement))
        else:
            self.subs.append((letter, invert_word(replacement)))

    def _chain(self, word: Sequence[int]) -> Word:
        out = list(word)
        for letter, replacement in self.subs:
            out = self._apply_sub(out, letter, replacement)
        return reduce_word(out)

    def word_of(self, half_edges: Sequence[int]) -> Word:
        return self._chain(_cotree_word(self.surface, self.generator_of, half_edges))

    # -- Dehn's algorithm -------------------------------------------------

    def _build_dehn_table(self):
        R = self.relator
        table = []
        for base in (R, invert_word(R)):
            for k in range(len(base)):
                table.append(base[k:] + base[:k])
        return table

    def is_trivial(self, word: Word) -> bool:
        """Dehn's algorithm: any nontrivial reduced word of the identity
        contains more than half of a cyclic rotation of the relator."""
        w = list(cyclic_reduce(word))
        half = len(self.relator) // 2
        while w:
            n = len(w)
            found = None
            for i in range(n):
                wr = w[i:] + w[:i]
                for rot in self._dehn_table:
                    m = 0
                    while m < min(n, len(rot)) and wr[m] == rot[m]:
                        m += 1
                    if m > half:
                        found = (wr, m, rot)
                        break
                if found:
                    break
            if found is None:
                return False
            wr, m, rot = found
            w = list(cyclic_reduce(list(invert_word(rot[m:])) + wr[m:]))
        return True


@lru_cache(maxsize=16)
def _closed(s: Surface) -> ClosedPresentation:
    return ClosedPresentation(s)


# ---------------------------------------------------------------------------
# Homology (integer lattice reduction)


class HomologyLattice:
    """H_1 coset keys: cotree exponent vectors modulo face relator spans."""

    def __init__(self, s: Surface):
        self.surface = s
        self.tree_edges, self.generator_of = _graph_presentation(
            s, set(range(s.n_edges))
        )
        self.dim = len(self.generator_of)
        vectors = []
        for fid in s.face_ids:
            v = self._vector(s.face_cycle(fid))
            if any(v):
                vectors.append(list(v))
        self.pivots: List[Tuple[int, List[int]]] = []
        cols = [list(v) for v in vectors]
        for row in range(self.dim):
            live = [c for c in cols if c[row] != 0]
            if not live:
                continue
            col = live[0]
            for other in live[1:]:
                # Euclidean reduction of two columns at this row
                while other[row] != 0:
                    q = col[row] // other[row]
                    for r in range(self.dim):
                        col[r] -= q * other[r]
                    col, other = other, col
            if col[row] < 0:
                col = [-x for x in col]
            self.pivots.append((row, col))
            cols = [c for c in cols if c is not col and any(c)]
            for c in cols:
                if c[row] != 0:
                    q = c[row] // col[row]
                    for r in range(self.dim):
                        c[r] -= q * col[r]
            cols = [c for c in cols if any(c)]

    def _vector(self, half_edges) -> List[int]:
        v = [0] * self.dim
        for h in half_edges:
            g = self.generator_of.get(h >> 1)
            if g is not None:
                v[g - 1] += 1 if h % 2 == 0 else -1
        return v

    def key(self, half_edges) -> Tuple[int, ...]:
        """Canonical coset representative of the homology class."""
        v = self._vector(half_edges)
        for row, col in self.pivots:
            q = v[row] // col[row]
            for r in range(self.dim):
                v[r] -= q * col[r]
        return tuple(v)

    def is_zero(self, half_edges) -> bool:
        v = self._vector(half_edges)
        for row, col in self.pivots:
            if v[row] % col[row] != 0:
                return False
            q = v[row] // col[row]
            for r in range(self.dim):
                v[r] -= q * col[r]
        return not any(v)


@lru_cache(maxsize=64)
def homology_lattice(s: Surface) -> HomologyLattice:
    return HomologyLattice(s)


# ---------------------------------------------------------------------------
# Public operations


def _require_closed_walk(w: Walk):
    if isinstance(w, Arc) or not w.closed:
        raise SystolicError("operation requires a closed walk")


def is_contractible(s: Surface, w: Walk) -> bool:
    """Is the closed walk null-homotopic, perforations read as punctures?"""
    _require_closed_walk(w)
    validate_walk(s, w)
    if not s.is_closed():
        return not _spine(s).word_of(w.half_edges)
    if s.genus == 0:
        return True
    if s.genus == 1:
        return homology_lattice(s).is_zero(w.half_edges)
    pres = _closed(s)
    return pres.is_trivial(pres.word_of(w.half_edges))


def is_power_of_boundary(s: Surface, gamma: Walk, delta: Walk, delta_yx: Walk) -> bool:
    """Is the arc walk homotopic (endpoints fixed) to delta_xy . delta^k?

    Decided through contractibility of the commutator
    (gamma . delta_yx) delta (gamma . delta_yx)^{-1} delta^{-1}; valid on
    surfaces with boundary, where the fundamental group is free.
    """
    if s.is_closed():
        raise SystolicError("is_power_of_boundary needs a surface with boundary")
    validate_walk(s, delta)
    spine = _spine(s)
    loop = spine.word_of(tuple(gamma.half_edges) + tuple(delta_yx.half_edges))
    d = spine.word_of(delta.half_edges)
    commutator = reduce_word(loop + d + invert_word(loop) + invert_word(d))
    return not commutator


def boundary_walk(s: Surface, face_id: int) -> Walk:
    if face_id not in s.perforated:
        raise SystolicError(f"face {face_id} is not perforated")
    return Walk(s.face_cycle(face_id), True)


def is_essential_arc(s: Surface, arc: Arc) -> bool:
    """Arcs between distinct boundary components are always essential; an
    arc with both endpoints on one boundary is essential when it is not
    homotopic into that boundary (winding allowed)."""
    validate_arc(s, arc)
    f1, f2 = arc.end_faces
    if f1 != f2:
        return True
    delta = boundary_walk(s, f1)
    x, y = walk_endpoints(s, arc.walk)
    cycle = delta.half_edges
    origins = [s.vertex_of[h] for h in cycle]
    ix = origins.index(x)
    iy = origins.index(y)
    if iy >= ix:
        delta_yx = cycle[iy:] + cycle[:ix]
    else:
        delta_yx = cycle[iy:ix]
    return not is_power_of_boundary(s, arc.walk, delta, Walk(delta_yx, False))


def free_homotopy_key(s: Surface, w: Walk, unoriented: bool = True) -> Word:
    """Canonical key of the free homotopy class on a surface with boundary.

    Keys are equal exactly for freely homotopic closed walks; with
    ``unoriented`` a walk and its reverse share the key.
    """
    _require_closed_walk(w)
    if s.is_closed():
        raise SystolicError("free_homotopy_key needs a surface with boundary")
    word = cyclic_reduce(_spine(s).word_of(w.half_edges))
    key = least_rotation(word)
    if unoriented:
        key = min(key, least_rotation(cyclic_reduce(invert_word(word))))
    return key


def primitive_root(word: Word) -> Tuple[Word, int]:
    """Smallest cyclic word r and k >= 1 with word = r^k (cyclically)."""
    n = len(word)
    if n == 0:
        return (), 1
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == tuple(word):
            return tuple(word[:p]), n // p
    return tuple(word), 1
