"""Canonical fixtures used across the test suite.

Q    one-vertex torus: loop edges a=0, b=1 of weight 1, rotation (a, b, a', b').
T3   3x3 unit-weight toroidal grid, 9 vertices / 18 edges / 9 faces.
P    theta-graph pair of pants: vertices x=0, y=1, parallel edges a=0 (w=1),
     b=1 (w=2), c=2 (w=3), all three faces perforated.
T3b  T3 with exactly one face perforated.
"""

import random

import pytest

from systolic.surface import Surface, build_surface


def make_q() -> Surface:
    return build_surface([[0, 2, 1, 3]], [1, 1])


def make_t3(perforate_one=False) -> Surface:
    # vertex (i, j) -> 3*i + j; horizontal edge (i,j)-(i,j+1) has id 3*i+j,
    # vertical edge (i,j)-(i+1,j) has id 9+3*i+j; indices mod 3.
    rotations = []
    for i in range(3):
        for j in range(3):
            east = 2 * (3 * i + j)
            west = 2 * (3 * i + (j - 1) % 3) + 1
            south = 2 * (9 + 3 * i + j)
            north = 2 * (9 + 3 * ((i - 1) % 3) + j) + 1
            rotations.append([east, south, west, north])
    s = build_surface(rotations, [1] * 18)
    if perforate_one:
        s = s.with_perforations([s.face_ids[0]])
    return s


def make_p() -> Surface:
    s = build_surface([[0, 2, 4], [1, 5, 3]], [1, 2, 3])
    return s.with_perforations(s.face_ids)


def make_annulus() -> Surface:
    """P with one boundary capped: genus 0, two perforations."""
    p = make_p()
    return p.with_perforations(sorted(p.perforated)[:2])


def t3_row_cycle(i=0):
    """Closed walk along row i of T3, eastbound."""
    return [2 * (3 * i + j) for j in range(3)]


def t3_column_cycle(j=0):
    """Closed walk down column j of T3."""
    return [2 * (9 + 3 * i + j) for i in range(3)]


@pytest.fixture
def Q():
    return make_q()


@pytest.fixture
def T3():
    return make_t3()


@pytest.fixture
def T3b():
    return make_t3(perforate_one=True)


@pytest.fixture
def P():
    return make_p()


@pytest.fixture
def rng():
    return random.Random(12345)
