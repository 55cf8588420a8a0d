"""Weighted combinatorial surfaces given by rotation systems.

A surface is a connected graph with positive rational edge weights,
cellularly embedded in an orientable surface.  The embedding is encoded
by a rotation system: for every vertex, the cyclic sequence of incident
half-edges in the direct (counterclockwise) order.  A subset of faces may
be marked as perforated; those act as boundary components.

Half-edge encoding: edge ``e`` owns half-edges ``2*e`` and ``2*e + 1``,
and ``opposite(h) == h ^ 1``.  Faces are traversed keeping the face on
the left: the successor of ``h`` around its face is the rotation
successor of ``h ^ 1``.  A face is identified by the smallest half-edge
id it contains, which makes all derived ids deterministic functions of
the input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import SurfaceFormatError


def opposite(h: int) -> int:
    return h ^ 1


def edge_of(h: int) -> int:
    return h >> 1


class Surface:
    """Immutable rotation-system surface with weights and perforations.

    Do not mutate a Surface after construction; all algorithms in this
    package rely on structural sharing being safe.
    """

    def __init__(
        self,
        rotations: Sequence[Sequence[int]],
        weights: Sequence[Fraction],
        perforated: Iterable[int] = (),
    ):
        self.rotations: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(r) for r in rotations
        )
        self.weights: Tuple[Fraction, ...] = tuple(Fraction(w) for w in weights)
        self.n_vertices = len(self.rotations)
        self.n_edges = len(self.weights)
        self._validate_half_edges()
        self._validate_weights()

        # vertex_of[h], rot_pos[h]
        self.vertex_of = [0] * (2 * self.n_edges)
        self._rot_pos = [0] * (2 * self.n_edges)
        for v, rot in enumerate(self.rotations):
            for i, h in enumerate(rot):
                self.vertex_of[h] = v
                self._rot_pos[h] = i

        self._check_connected()

        # Face orbits of h -> rot_next(h ^ 1); deterministic ids.
        self.faces: Tuple[Tuple[int, ...], ...] = self._trace_faces()
        self.face_ids: Tuple[int, ...] = tuple(f[0] for f in self.faces)
        self._face_index_of_id: Dict[int, int] = {
            fid: i for i, fid in enumerate(self.face_ids)
        }
        self.face_index_of = [0] * (2 * self.n_edges)
        for i, cycle in enumerate(self.faces):
            for h in cycle:
                self.face_index_of[h] = i

        self.perforated: frozenset = frozenset(perforated)
        for fid in self.perforated:
            if fid not in self._face_index_of_id:
                raise SurfaceFormatError(f"perforate: no face with id {fid}")

        self.n_faces = len(self.faces)
        euler = self.n_vertices - self.n_edges + self.n_faces
        if (2 - euler) % 2 != 0 or euler > 2:
            raise SurfaceFormatError(
                f"impossible Euler characteristic {euler} for an orientable surface"
            )
        self.genus = (2 - euler) // 2

    # -- validation ---------------------------------------------------

    def _validate_half_edges(self):
        n = 2 * self.n_edges
        seen = [False] * n
        for v, rot in enumerate(self.rotations):
            if not rot:
                raise SurfaceFormatError(f"vertex {v} is isolated")
            for h in rot:
                if not isinstance(h, int) or h < 0 or h >= n:
                    raise SurfaceFormatError(f"half-edge id {h} out of range")
                if seen[h]:
                    raise SurfaceFormatError(f"half-edge {h} appears twice")
                seen[h] = True
        missing = [h for h in range(n) if not seen[h]]
        if missing:
            raise SurfaceFormatError(f"half-edge {missing[0]} missing from rotations")

    def _validate_weights(self):
        for e, w in enumerate(self.weights):
            if w <= 0:
                raise SurfaceFormatError(f"edge {e} has non-positive weight {w}")

    def _check_connected(self):
        if self.n_vertices == 0:
            raise SurfaceFormatError("surface has no vertices")
        seen = [False] * self.n_vertices
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for h in self.rotations[v]:
                u = self.vertex_of[h ^ 1]
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        if not all(seen):
            raise SurfaceFormatError("graph is not connected")

    def _trace_faces(self) -> Tuple[Tuple[int, ...], ...]:
        n = 2 * self.n_edges
        seen = [False] * n
        faces = []
        for start in range(n):
            if seen[start]:
                continue
            cycle = []
            h = start
            while not seen[h]:
                seen[h] = True
                cycle.append(h)
                h = self.rot_next(h ^ 1)
            faces.append(tuple(cycle))
        faces.sort(key=lambda c: c[0])
        return tuple(faces)

    # -- navigation ---------------------------------------------------

    def rot_next(self, h: int) -> int:
        rot = self.rotations[self.vertex_of[h]]
        return rot[(self._rot_pos[h] + 1) % len(rot)]

    def rot_prev(self, h: int) -> int:
        rot = self.rotations[self.vertex_of[h]]
        return rot[(self._rot_pos[h] - 1) % len(rot)]

    def face_next(self, h: int) -> int:
        return self.rot_next(h ^ 1)

    def face_id_of(self, h: int) -> int:
        return self.face_ids[self.face_index_of[h]]

    def face_cycle(self, face_id: int) -> Tuple[int, ...]:
        return self.faces[self._face_index_of_id[face_id]]

    def has_face(self, face_id: int) -> bool:
        return face_id in self._face_index_of_id

    def face_index(self, face_id: int) -> int:
        return self._face_index_of_id[face_id]

    def perforated_face_indices(self) -> frozenset:
        return frozenset(self._face_index_of_id[fid] for fid in self.perforated)

    def weight_of_half_edge(self, h: int) -> Fraction:
        return self.weights[h >> 1]

    def endpoints(self, e: int) -> Tuple[int, int]:
        return self.vertex_of[2 * e], self.vertex_of[2 * e + 1]

    @property
    def boundary_count(self) -> int:
        return len(self.perforated)

    @property
    def complexity(self) -> int:
        return self.n_vertices + self.n_edges

    def is_closed(self) -> bool:
        return not self.perforated

    def boundary_vertices(self, face_id: int) -> Tuple[int, ...]:
        """Vertex occurrences along a face cycle (origins of its half-edges)."""
        return tuple(self.vertex_of[h] for h in self.face_cycle(face_id))

    def with_perforations(self, perforated: Iterable[int]) -> "Surface":
        return Surface(self.rotations, self.weights, perforated)

    # -- equality / repr ----------------------------------------------

    def _key(self):
        return (self.rotations, self.weights, self.perforated)

    def __eq__(self, other):
        return isinstance(other, Surface) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"Surface(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces}, "
            f"g={self.genus}, b={self.boundary_count})"
        )

    # -- text format ----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"surface {self.n_vertices} {self.n_edges}"]
        for v, rot in enumerate(self.rotations):
            lines.append("rot " + str(v) + " " + " ".join(str(h) for h in rot))
        for e, w in enumerate(self.weights):
            if w.denominator == 1:
                lines.append(f"w {e} {w.numerator}")
            else:
                lines.append(f"w {e} {w.numerator}/{w.denominator}")
        for fid in sorted(self.perforated):
            lines.append(f"perforate {fid}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Surface":
        return parse_surface(text)


class DualSurface:
    """The dual graph of a surface, embedded on the same surface.

    Dual half-edge ids coincide with primal ones: the dual of ``h`` is the
    half-edge ``h`` whose origin is the dual vertex of the face to the
    right of ``h`` (the face containing ``h ^ 1``).  Dual vertices are
    indexed by face index of the primal surface; perforated primal faces
    become perforated dual vertices.  Edge weights carry over unchanged.
    """

    def __init__(self, primal: Surface):
        self.primal = primal
        rotations = [
            tuple(h ^ 1 for h in cycle) for cycle in primal.faces
        ]
        self.surface = Surface(rotations, primal.weights)
        self.perforated_vertices = frozenset(
            primal._face_index_of_id[fid] for fid in primal.perforated
        )

    def dual_vertex_of_face(self, face_id: int) -> int:
        return self.primal._face_index_of_id[face_id]


def build_surface(
    rotations: Sequence[Sequence[int]],
    weights: Sequence,
    perforated: Iterable[int] = (),
) -> Surface:
    """Build and validate a Surface from a rotation-system description."""
    return Surface(rotations, [Fraction(w) for w in weights], perforated)


def genus_and_boundaries(s: Surface) -> Tuple[int, int]:
    """Genus of the closed underlying surface and number of perforations."""
    return s.genus, s.boundary_count


def dual(s: Surface) -> DualSurface:
    return DualSurface(s)


def parse_fraction(token: str) -> Fraction:
    if "/" in token:
        num, den = token.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_surface(text: str) -> Surface:
    """Parse the text surface format.

    Lines: ``surface <nV> <nE>``, per vertex ``rot <v> <h...>``, per edge
    ``w <e> <p>[/<q>]``, and optional ``perforate <face_id>`` lines.
    Blank lines and ``#`` comments are ignored.
    """
    n_v = n_e = None
    rotations: List[Optional[List[int]]] = []
    weights: List[Optional[Fraction]] = []
    perforated: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "surface":
                if n_v is not None:
                    raise SurfaceFormatError("duplicate surface line", lineno)
                n_v, n_e = int(parts[1]), int(parts[2])
                rotations = [None] * n_v
                weights = [None] * n_e
            elif parts[0] == "rot":
                v = int(parts[1])
                if n_v is None or not 0 <= v < n_v:
                    raise SurfaceFormatError(f"bad vertex id {parts[1]}", lineno)
                if rotations[v] is not None:
                    raise SurfaceFormatError(f"duplicate rot line for vertex {v}", lineno)
                rotations[v] = [int(t) for t in parts[2:]]
            elif parts[0] == "w":
                e = int(parts[1])
                if n_e is None or not 0 <= e < n_e:
                    raise SurfaceFormatError(f"bad edge id {parts[1]}", lineno)
                if weights[e] is not None:
                    raise SurfaceFormatError(f"duplicate weight for edge {e}", lineno)
                weights[e] = parse_fraction(parts[2])
            elif parts[0] == "perforate":
                perforated.append(int(parts[1]))
            else:
                raise SurfaceFormatError(f"unknown directive {parts[0]!r}", lineno)
        except (ValueError, IndexError) as exc:
            raise SurfaceFormatError(f"cannot parse: {raw.strip()!r} ({exc})", lineno)
    if n_v is None:
        raise SurfaceFormatError("missing surface header line")
    for v, rot in enumerate(rotations):
        if rot is None:
            raise SurfaceFormatError(f"missing rot line for vertex {v}")
    for e, w in enumerate(weights):
        if w is None:
            raise SurfaceFormatError(f"missing weight for edge {e}")
    return Surface(rotations, weights, perforated)
