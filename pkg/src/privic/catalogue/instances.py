"""Named example instances used across the toolkit, scripts and tests."""

from __future__ import annotations

from fractions import Fraction

from ..gf import GFMatrix
from ..model import LinearScheme, RateTuple, SideInfoGraph
from ..notation import scheme_from_sums

# user i holds x_{i+1} and x_{i+2}
RING5_AHEAD = SideInfoGraph.from_lists([[2, 3], [3, 4], [4, 5], [5, 1], [1, 2]])
# user i holds both ring neighbours
RING5_NEIGHBOURS = SideInfoGraph.from_lists([[5, 2], [1, 3], [2, 4], [3, 5], [4, 1]])
DIRECTED_TRIANGLE = SideInfoGraph.from_lists([[2], [3], [1]])
COVERABLE5 = SideInfoGraph.from_lists([[2, 3, 4, 5], [1, 3, 4, 5], [1, 5], [1, 2, 3, 5], [2, 3]])
UNCOVERABLE7 = SideInfoGraph.from_lists([[2, 3, 7], [3, 4, 6], [4, 5, 7], [1, 6, 7],
                                         [1, 2, 4], [1, 3, 5], [2, 5, 6]])
GAP4 = SideInfoGraph.from_lists([[2, 3], [4], [1, 2], [1, 3]])

NAMED_GRAPHS = {
    "ring5-ahead": RING5_AHEAD,
    "ring5-neighbours": RING5_NEIGHBOURS,
    "directed-triangle": DIRECTED_TRIANGLE,
    "coverable5": COVERABLE5,
    "uncoverable7": UNCOVERABLE7,
    "gap4": GAP4,
}

# three transmissions on RING5_AHEAD with sum key rate 4
RING5_AHEAD_SUMS = [
    "x1 + x2 + x3 + k10010 + k11001",
    "x2 + x3 + x4 + k11001 + k01110",
    "x3 + x4 + x5 + k01110 + k00101",
]

# block length 2, five transmissions on RING5_NEIGHBOURS
RING5_NEIGHBOURS_SUMS = [
    "x1^1 + x2^1 + k11000",
    "x3^1 + x4^1 + k00110",
    "x5^1 + x1^2 + k10001",
    "x2^2 + x3^2 + k01100",
    "x4^2 + x5^2 + k00011",
]

GAP4_SUMS = [
    "x1^1 + x2^1 + k1100 + k1001",
    "x2^1 + x4^1 + k1100 + k0101^1",
    "x2^2 + x4^2 + k0110 + k0101^2",
    "x4^2 + x3^1 + k0101^2 + k0011",
    "x1^2 + x3^2 + k1010",
]
GAP4_RATE = RateTuple.of(Fraction(5, 2), {
    "1001": Fraction(1, 2), "1010": Fraction(1, 2), "1100": Fraction(1, 2),
    "0101": 1, "0110": Fraction(1, 2), "0011": Fraction(1, 2),
})
GAP4_CAPS = {"1001": 1, "1010": 1, "1100": 1, "0101": 2, "0110": 1, "0011": 1}

# weak-privacy code on UNCOVERABLE7; column i is G_i
UNCOVERABLE7_MATRIX = [
    [1, 1, 1, 0, 0, 0, 1],
    [0, 1, 1, 1, 0, 1, 0],
    [0, 0, 1, 1, 1, 0, 1],
    [1, 0, 0, 1, 0, 1, 1],
    [1, 1, 0, 1, 1, 0, 0],
    [1, 0, 1, 0, 1, 1, 0],
    [0, 1, 0, 0, 1, 1, 1],
]


def gap4_scheme() -> LinearScheme:
    return scheme_from_sums(4, GAP4_SUMS, n=2)


def ring5_ahead_scheme() -> LinearScheme:
    return scheme_from_sums(5, RING5_AHEAD_SUMS)


def ring5_neighbours_scheme() -> LinearScheme:
    return scheme_from_sums(5, RING5_NEIGHBOURS_SUMS, n=2)


def uncoverable7_scheme() -> LinearScheme:
    M = UNCOVERABLE7_MATRIX
    G = tuple(GFMatrix.from_columns(2, [[row[i] for row in M]], len(M)) for i in range(7))
    return LinearScheme(2, 1, len(M), G)
