"""Walks, arcs, combinatorial perturbations and crossing counts.

A combinatorial curve is a walk in the surface graph.  To talk about
intersections of curves that share edges, every family of curves is
augmented with a *combinatorial perturbation*: for each edge, a
left-to-right order over all traversals (strands) of that edge.  The
orders induce, at every vertex, a cyclic sequence of slots; each passage
of a curve through a vertex becomes a chord between two slots, and two
passages cross exactly when their chords interleave.

``canonical_perturbation`` orders the strands of each edge by walking
pairs of strands forwards and backwards until their itineraries diverge
and comparing the divergent ports in the rotation order.  Strand pairs
whose constraints conflict necessarily cross once; strands that never
diverge are parallel and are ordered by a travel-consistent tie-break,
so parallel copies and tree-path bundles never produce spurious
crossings.  Minimality is exercised against a brute-force search over
all orders in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import SurfaceFormatError
from .surface import Surface

# ---------------------------------------------------------------------------
# Walks and arcs


@dataclass(frozen=True)
class Walk:
    half_edges: Tuple[int, ...]
    closed: bool = True

    def __len__(self):
        return len(self.half_edges)

    def reversed(self) -> "Walk":
        return Walk(tuple(h ^ 1 for h in reversed(self.half_edges)), self.closed)

    def rotated(self, k: int) -> "Walk":
        if not self.closed:
            raise ValueError("cannot rotate an open walk")
        he = self.half_edges
        k %= len(he)
        return Walk(he[k:] + he[:k], True)


@dataclass(frozen=True)
class Arc:
    """An open walk whose endpoints carry perforated-face assignments."""

    walk: Walk
    end_faces: Tuple[int, int]

    @property
    def half_edges(self) -> Tuple[int, ...]:
        return self.walk.half_edges

    def reversed(self) -> "Arc":
        return Arc(self.walk.reversed(), (self.end_faces[1], self.end_faces[0]))


Curve = Union[Walk, Arc]


def closed_walk(half_edges: Iterable[int]) -> Walk:
    return Walk(tuple(half_edges), True)


def open_walk(half_edges: Iterable[int]) -> Walk:
    return Walk(tuple(half_edges), False)


def walk_endpoints(s: Surface, w: Walk) -> Tuple[int, int]:
    he = w.half_edges
    return s.vertex_of[he[0]], s.vertex_of[he[-1] ^ 1]


def validate_walk(s: Surface, w: Walk):
    he = w.half_edges
    if not he:
        raise SurfaceFormatError("empty walk")
    n = 2 * s.n_edges
    for h in he:
        if not 0 <= h < n:
            raise SurfaceFormatError(f"half-edge id {h} out of range")
    pairs = zip(he, he[1:] + (he[0],)) if w.closed else zip(he, he[1:])
    for a, b in pairs:
        if s.vertex_of[a ^ 1] != s.vertex_of[b]:
            raise SurfaceFormatError(
                f"walk breaks at {a}->{b}: head of {a} is not origin of {b}"
            )


def validate_arc(s: Surface, arc: Arc):
    if arc.walk.closed:
        raise SurfaceFormatError("an arc must be an open walk")
    validate_walk(s, arc.walk)
    x, y = walk_endpoints(s, arc.walk)
    for v, fid in ((x, arc.end_faces[0]), (y, arc.end_faces[1])):
        if fid not in s.perforated:
            raise SurfaceFormatError(f"arc endpoint face {fid} is not perforated")
        incident = {s.face_id_of(g) for g in s.rotations[v]}
        if fid not in incident:
            raise SurfaceFormatError(
                f"arc endpoint face {fid} is not incident to vertex {v}"
            )


def walk_length(s: Surface, w: Curve) -> Fraction:
    """Total weight of a walk, multiplicities counted."""
    if isinstance(w, Arc):
        validate_arc(s, w)
        he = w.half_edges
    else:
        validate_walk(s, w)
        he = w.half_edges
    return sum((s.weights[h >> 1] for h in he), Fraction(0))


def walk_to_text(w: Curve) -> str:
    if isinstance(w, Arc):
        he = " ".join(str(h) for h in w.half_edges)
        return f"walk open {he} ends {w.end_faces[0]} {w.end_faces[1]}"
    kind = "closed" if w.closed else "open"
    return f"walk {kind} " + " ".join(str(h) for h in w.half_edges)


def walk_from_text(line: str, lineno: Optional[int] = None) -> Curve:
    parts = line.split()
    if len(parts) < 3 or parts[0] != "walk" or parts[1] not in ("closed", "open"):
        raise SurfaceFormatError(f"bad walk line: {line!r}", lineno)
    try:
        if "ends" in parts:
            k = parts.index("ends")
            he = tuple(int(t) for t in parts[2:k])
            f1, f2 = int(parts[k + 1]), int(parts[k + 2])
            if parts[1] != "open":
                raise SurfaceFormatError("ends are only valid on open walks", lineno)
            return Arc(Walk(he, False), (f1, f2))
        he = tuple(int(t) for t in parts[2:])
        return Walk(he, parts[1] == "closed")
    except (ValueError, IndexError):
        raise SurfaceFormatError(f"bad walk line: {line!r}", lineno)


# ---------------------------------------------------------------------------
# Perturbations

# A corner token is ('corner', vertex, rotation_index): the corner between
# rotations[v][i-1] and rotations[v][i], which must belong to a perforated
# face.  Arc endpoints attach to the first corner of their assigned face in
# rotation order.

CornerToken = Tuple[str, int, int]
Port = Union[int, CornerToken]


class _CurveData:
    __slots__ = ("half_edges", "closed", "end_corners", "index")

    def __init__(self, index, half_edges, closed, end_corners):
        self.index = index
        self.half_edges = half_edges
        self.closed = closed
        self.end_corners = end_corners  # (start corner, end corner) or None


def _corner_face(s: Surface, v: int, i: int) -> int:
    """Face id of the corner between rotations[v][i-1] and rotations[v][i]."""
    return s.face_id_of(s.rotations[v][i])


def _pick_corner(s: Surface, v: int, fid: int) -> CornerToken:
    for i in range(len(s.rotations[v])):
        if _corner_face(s, v, i) == fid:
            return ("corner", v, i)
    raise SurfaceFormatError(f"face {fid} has no corner at vertex {v}")


class Perturbation:
    """Left-to-right strand orders for a family of curves on a surface.

    ``orders[e]`` lists the strand occurrences ``(curve_index, position)``
    of edge ``e`` in the left-to-right order of the even half-edge
    ``2*e``; the order for ``2*e + 1`` is the reverse.
    """

    def __init__(self, s: Surface, curves: Sequence[Curve]):
        self.surface = s
        self.curves: List[_CurveData] = []
        for ci, c in enumerate(curves):
            if isinstance(c, Arc):
                validate_arc(s, c)
                x, y = walk_endpoints(s, c.walk)
                corners = (
                    _pick_corner(s, x, c.end_faces[0]),
                    _pick_corner(s, y, c.end_faces[1]),
                )
                self.curves.append(_CurveData(ci, c.half_edges, False, corners))
            else:
                validate_walk(s, c)
                if not c.closed:
                    raise SurfaceFormatError(
                        "open walks in a perturbation must be arcs with end faces"
                    )
                self.curves.append(_CurveData(ci, c.half_edges, True, None))
        self._base_pos: Dict[int, Dict[Port, int]] = {}
        self._base_len: Dict[int, int] = {}
        self.orders: Dict[int, List[Tuple[int, int]]] = self._sort_strands()
        self._report: Optional[CrossingReport] = None

    # -- base circular order of ports at a vertex ----------------------

    def _base(self, v: int) -> Tuple[Dict[Port, int], int]:
        if v not in self._base_pos:
            pos: Dict[Port, int] = {}
            k = 0
            s = self.surface
            for i, g in enumerate(s.rotations[v]):
                if s.face_id_of(g) in s.perforated:
                    pos[("corner", v, i)] = k
                    k += 1
                pos[g] = k
                k += 1
            self._base_pos[v] = pos
            self._base_len[v] = k
        return self._base_pos[v], self._base_len[v]

    def _angle(self, v: int, ref: Port, port: Port) -> int:
        pos, n = self._base(v)
        return (pos[port] - pos[ref]) % n

    # -- itinerary walks ------------------------------------------------

    def _step(self, ci: int, pos: int, direction: int):
        """Advance one passage in travel ``direction`` along curve ``ci``.

        Returns ``(vertex, port, new_pos)`` where ``port`` is the port the
        itinerary continues into at ``vertex`` (a half-edge or, for an arc
        end, its corner token); ``new_pos`` is None when the walk stops.
        """
        c = self.curves[ci]
        he = c.half_edges
        n = len(he)
        s = self.surface
        if direction > 0:
            v = s.vertex_of[he[pos] ^ 1]
            if pos == n - 1 and not c.closed:
                return v, c.end_corners[1], None
            npos = (pos + 1) % n
            return v, he[npos], npos
        v = s.vertex_of[he[pos]]
        if pos == 0 and not c.closed:
            return v, c.end_corners[0], None
        npos = (pos - 1) % n
        return v, he[npos] ^ 1, npos

    def _walk_compare(self, o1, o2, start_dirs, cap: int) -> Optional[int]:
        """Follow both itineraries until the ports diverge.

        Returns the angular comparison (-1/+1) at the first divergence or
        None when the itineraries agree for ``cap`` steps or both stop.
        """
        (c1, p1), (c2, p2) = o1, o2
        d1, d2 = start_dirs
        for _ in range(cap):
            v1, q1, np1 = self._step(c1, p1, d1)
            v2, q2, np2 = self._step(c2, p2, d2)
            if q1 != q2:
                # Both itineraries sit at the same vertex, arrived along the
                # same directed half-edge; compare ports from that reference.
                assert v1 == v2
                if isinstance(q1, int) and isinstance(q2, int) and q1 == (q2 ^ 1):
                    pass  # distinct ports; angular order still decides
                # reference: the half-edge opposite to the shared arrival
                ref = self._arrival_ref(c1, p1, d1)
                a1 = self._angle(v1, ref, q1)
                a2 = self._angle(v1, ref, q2)
                return -1 if a1 < a2 else 1
            if np1 is None or np2 is None:
                return None  # both stopped at the same corner
            p1, p2 = np1, np2
        return None

    def _arrival_ref(self, ci: int, pos: int, direction: int) -> int:
        he = self.curves[ci].half_edges
        return he[pos] ^ 1 if direction > 0 else he[pos]

    # -- strand comparator ----------------------------------------------

    def _strand_dir(self, e: int, occ) -> int:
        ci, pos = occ
        return 1 if self.curves[ci].half_edges[pos] == 2 * e else -1

    def _compare(self, e: int, o1, o2) -> int:
        """Order of two strands of edge ``e`` in the even-frame."""
        if o1 == o2:
            return 0
        d1 = self._strand_dir(e, o1)
        d2 = self._strand_dir(e, o2)
        cap = len(self.curves[o1[0]].half_edges) + len(self.curves[o2[0]].half_edges) + 2
        fwd = self._walk_compare(o1, o2, (d1, d2), cap)
        if fwd is not None:
            return fwd
        bwd = self._walk_compare(o1, o2, (-d1, -d2), cap)
        if bwd is not None:
            return -bwd
        # Parallel forever: travel-consistent tie-break.
        if d1 != d2:
            return -1 if d1 > 0 else 1
        base = -1 if o1 < o2 else 1
        return base if d1 > 0 else -base

    def _sort_strands(self) -> Dict[int, List[Tuple[int, int]]]:
        per_edge: Dict[int, List[Tuple[int, int]]] = {}
        for c in self.curves:
            for pos, h in enumerate(c.half_edges):
                per_edge.setdefault(h >> 1, []).append((c.index, pos))
        orders = {}
        for e, occs in per_edge.items():
            occs.sort()
            occs.sort(key=cmp_to_key(lambda a, b, e=e: self._compare(e, a, b)))
            orders[e] = occs
        return orders

    # -- slots and chords -------------------------------------------------

    def slot_rank(self, g: int, occ) -> int:
        """Rank of a strand occurrence within the block of half-edge ``g``."""
        order = self.orders[g >> 1]
        r = order.index(occ)
        return r if g % 2 == 0 else len(order) - 1 - r

    def _slot_layout(self, v: int):
        """Cyclic slot list at ``v``: strand slots and arc-end corner slots.

        Returns (positions, total) where positions maps slot keys to
        circular indices.  Slot keys: ('s', g, occ) for the slot of a
        strand occurrence in the block of half-edge g, and
        ('c', corner, ci, which_end) for arc-end sub-slots.
        """
        s = self.surface
        corner_chords: Dict[CornerToken, List[Tuple[int, int]]] = {}
        for c in self.curves:
            if c.end_corners is not None:
                corner_chords.setdefault(c.end_corners[0], []).append((c.index, 0))
                corner_chords.setdefault(c.end_corners[1], []).append((c.index, 1))
        pos: Dict[Tuple, int] = {}
        k = 0
        for i, g in enumerate(s.rotations[v]):
            corner = ("corner", v, i)
            if corner in corner_chords:
                ends = corner_chords[corner]
                ends.sort(key=cmp_to_key(self._corner_cmp))
                for ci, which in ends:
                    pos[("c", corner, ci, which)] = k
                    k += 1
            block = self.orders.get(g >> 1, [])
            view = block if g % 2 == 0 else list(reversed(block))
            for occ in view:
                pos[("s", g, occ)] = k
                k += 1
        return pos, k

    def _corner_cmp(self, a, b) -> int:
        """Nesting order of arc-end chords sharing a corner."""
        (c1, w1), (c2, w2) = a, b
        if a == b:
            return 0
        o1 = (c1, 0 if w1 == 0 else len(self.curves[c1].half_edges) - 1)
        o2 = (c2, 0 if w2 == 0 else len(self.curves[c2].half_edges) - 1)
        d1 = 1 if w1 == 0 else -1
        d2 = 1 if w2 == 0 else -1
        cap = len(self.curves[c1].half_edges) + len(self.curves[c2].half_edges) + 2
        res = self._walk_compare(o1, o2, (d1, d2), cap)
        if res is not None:
            return res
        return -1 if (w1, c1) < (w2, c2) else 1

    def passages(self, ci: int) -> List[int]:
        c = self.curves[ci]
        return list(range(len(c.half_edges))) if c.closed else list(
            range(len(c.half_edges) + 1)
        )

    def passage_vertex(self, ci: int, k: int) -> int:
        c = self.curves[ci]
        s = self.surface
        if k < len(c.half_edges):
            return s.vertex_of[c.half_edges[k]]
        return s.vertex_of[c.half_edges[-1] ^ 1]

    def passage_chord(self, ci: int, k: int):
        """Slot keys (arrival, departure) of passage ``k`` of curve ``ci``.

        Arc passages 0 and len(walk) have a corner sub-slot on one side.
        """
        c = self.curves[ci]
        he = c.half_edges
        n = len(he)
        if c.closed:
            dep = ("s", he[k], (ci, k))
            arr = ("s", he[(k - 1) % n] ^ 1, (ci, (k - 1) % n))
            return arr, dep
        if k == 0:
            return ("c", c.end_corners[0], ci, 0), ("s", he[0], (ci, 0))
        if k == n:
            return ("s", he[n - 1] ^ 1, (ci, n - 1)), ("c", c.end_corners[1], ci, 1)
        return ("s", he[k - 1] ^ 1, (ci, k - 1)), ("s", he[k], (ci, k))


@dataclass(frozen=True)
class Crossing:
    vertex: int
    first: Tuple[int, int]   # (curve index, passage index)
    second: Tuple[int, int]
    sign: int


@dataclass
class CrossingReport:
    crossings: List[Crossing]
    pair_counts: Dict[Tuple[int, int], int]
    self_counts: Dict[int, int]

    def count(self, i: int, j: int) -> int:
        if i == j:
            return self.self_counts.get(i, 0)
        key = (min(i, j), max(i, j))
        return self.pair_counts.get(key, 0)

    def signed_sum(self, i: int, j: int) -> int:
        total = 0
        for c in self.crossings:
            if c.first[0] == i and c.second[0] == j:
                total += c.sign
            elif c.first[0] == j and c.second[0] == i:
                total -= c.sign
        return total


def canonical_perturbation(s: Surface, curves: Sequence[Curve]) -> Perturbation:
    """Deterministic minimal-crossing perturbation of a curve family."""
    return Perturbation(s, curves)


def _interleaved(a1, a2, b1, b2) -> bool:
    """Do chords {a1,a2} and {b1,b2} interleave on a circle of positions?"""
    if len({a1, a2, b1, b2}) < 4:
        return False
    lo, hi = min(a1, a2), max(a1, a2)
    inside1 = lo < b1 < hi
    inside2 = lo < b2 < hi
    return inside1 != inside2


def count_crossings(
    s: Surface, p: Perturbation, curves: Optional[Sequence[Curve]] = None
) -> CrossingReport:
    """All crossings of the family under the perturbation.

    Two passages at occurrences of the same vertex cross exactly when
    their four slots interleave in the cyclic slot order at that vertex.
    The sign of a crossing is +1 when departure/departure/arrival/arrival
    slots occur counterclockwise (in rotation order).
    """
    if curves is not None and len(curves) != len(p.curves):
        raise SurfaceFormatError("perturbation does not cover the curve family")
    if p._report is not None:
        return p._report
    by_vertex: Dict[int, List[Tuple[int, int]]] = {}
    for ci in range(len(p.curves)):
        for k in p.passages(ci):
            by_vertex.setdefault(p.passage_vertex(ci, k), []).append((ci, k))
    crossings: List[Crossing] = []
    pair_counts: Dict[Tuple[int, int], int] = {}
    self_counts: Dict[int, int] = {}
    for v, passes in by_vertex.items():
        pos, _total = p._slot_layout(v)
        chords = {pk: p.passage_chord(*pk) for pk in passes}
        for idx, pk1 in enumerate(passes):
            arr1, dep1 = chords[pk1]
            a1, d1 = pos[arr1], pos[dep1]
            for pk2 in passes[idx + 1:]:
                arr2, dep2 = chords[pk2]
                a2, d2 = pos[arr2], pos[dep2]
                if not _interleaved(a1, d1, a2, d2):
                    continue
                sign = _crossing_sign(d1, d2, a1, a2)
                crossings.append(Crossing(v, pk1, pk2, sign))
                i, j = pk1[0], pk2[0]
                if i == j:
                    self_counts[i] = self_counts.get(i, 0) + 1
                else:
                    key = (min(i, j), max(i, j))
                    pair_counts[key] = pair_counts.get(key, 0) + 1
    crossings.sort(key=lambda c: (c.first, c.second))
    report = CrossingReport(crossings, pair_counts, self_counts)
    p._report = report
    return report


def _crossing_sign(dep1: int, dep2: int, arr1: int, arr2: int) -> int:
    """+1 when (dep1, dep2, arr1, arr2) is cyclically increasing."""
    seq = [dep1, dep2, arr1, arr2]
    k = seq.index(min(seq))
    rot = seq[k:] + seq[:k]
    return 1 if rot[1] < rot[2] < rot[3] else -1


def self_crossing_count(s: Surface, c: Curve) -> int:
    p = canonical_perturbation(s, [c])
    return count_crossings(s, p).count(0, 0)


def crossing_count(s: Surface, a: Curve, b: Curve) -> int:
    p = canonical_perturbation(s, [a, b])
    return count_crossings(s, p).count(0, 1)


def smooth(w: Curve, crossing: Tuple[Tuple[int, int], Tuple[int, int]], s: Optional[Surface] = None) -> Curve:
    """Resolve a self-crossing, keeping a single connected curve.

    ``crossing`` is a pair of passage indices of the same curve; the
    subwalk between the two passages is reversed, which preserves the
    length and the multiset of traversed edges.
    """
    (c1, j), (c2, k) = crossing
    if c1 != c2:
        raise SurfaceFormatError("smooth expects two passages of the same curve")
    if isinstance(w, Arc):
        he = w.half_edges
        if not (0 <= j <= len(he) and 0 <= k <= len(he)):
            raise SurfaceFormatError("arc passage index out of range")
        j, k = min(j, k), max(j, k)
        if (j, k) == (0, len(he)):
            raise SurfaceFormatError("cannot smooth an arc at both of its endpoints")
        new = he[:j] + tuple(h ^ 1 for h in reversed(he[j:k])) + he[k:]
        return Arc(Walk(new, False), w.end_faces)
    he = w.half_edges
    j, k = min(j, k) % len(he), max(j, k) % len(he)
    if j == k:
        raise SurfaceFormatError("smoothing requires two distinct passages")
    new = he[:j] + tuple(h ^ 1 for h in reversed(he[j:k])) + he[k:]
    return Walk(new, True)


def smooth_at_same_vertex(s: Surface, w: Curve, crossing) -> Curve:
    (c1, j), (c2, k) = crossing
    p = canonical_perturbation(s, [w])
    if p.passage_vertex(0, j) != p.passage_vertex(0, k):
        raise SurfaceFormatError("smoothing occurrences lie at different vertices")
    return smooth(w, crossing, s)


def algebraic_intersection_number(s: Surface, a: Walk, b: Walk) -> int:
    """Signed crossing count of two closed walks; a homology invariant."""
    for w in (a, b):
        if isinstance(w, Arc) or not w.closed:
            raise SurfaceFormatError("algebraic intersection numbers need closed walks")
    p = canonical_perturbation(s, [a, b])
    report = count_crossings(s, p)
    return report.signed_sum(0, 1)
