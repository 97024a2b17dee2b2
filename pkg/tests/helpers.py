from fractions import Fraction

import numpy as np

import tropcy as tc

SQUARE = [[-1, -1], [1, -1], [1, 1], [-1, 1]]
DIAMOND = [[1, 0], [0, 1], [-1, 0], [0, -1]]
HEXAGON = [[-1, 0], [0, -1], [1, -1], [1, 0], [0, 1], [-1, 1]]


def square_scenario(**overrides):
    data = {
        "name": "square",
        "rank": 2,
        "d": 1,
        "r": 1,
        "delta_vertices": SQUARE,
        "nef_partition": {"parts": [SQUARE]},
    }
    data.update(overrides)
    return data


def fractions(*values):
    return tuple(Fraction(v) for v in values)


TRIANGLE = [[-1, -1], [2, -1], [-1, 2]]
REFLEXIVE_POLYGONS = [
    SQUARE,
    DIAMOND,
    HEXAGON,
    TRIANGLE,
    [[1, 0], [0, 1], [-1, -1]],
    [[-1, -1], [1, -1], [1, 0], [0, 1], [-1, 1]],
    [[-1, -1], [1, -1], [1, 1], [-1, 0]],
]


def unimodular(rng, rank=2, steps=3):
    """A random integer matrix of determinant ±1, as a product of shears."""
    U = np.eye(rank, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(rank, size=2, replace=False)
        E = np.eye(rank, dtype=np.int64)
        E[i, j] = rng.integers(-2, 3)
        U = E @ U
    if rng.integers(2):
        U[0] *= -1
    return U


def transform(points, U):
    return [[int(c) for c in U @ np.array(p, dtype=np.int64)] for p in points]


def random_polygon(rng, radius=3):
    """Hull of random lattice points, redrawn until it is two-dimensional."""
    while True:
        points = rng.integers(-radius, radius + 1, size=(6, 2)).tolist()
        P = tc.convex_hull(points)
        if P.dim == 2:
            return P
