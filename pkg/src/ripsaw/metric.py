"""Distance oracles over point clouds, explicit matrices, and the circle.

Every oracle exposes ``size`` and ``eval(i, j)`` returning a finite,
nonnegative, symmetric length with ``eval(i, i) == 0``.  Oracles are
immutable after construction, so concurrent reads are safe.  The triangle
inequality is *not* assumed by the abstraction itself (explicit matrices may
encode arbitrary weighted graphs); consumers that rely on it say so.
"""

from __future__ import annotations

import math

from .errors import InputError


class EuclideanOracle:
    """Euclidean distances between fixed-dimension real vectors."""

    def __init__(self, points):
        self.points = points
        self.size = len(points)

    def eval(self, i, j):
        return math.dist(self.points[i], self.points[j])


class CircleOracle:
    """Geodesic distance on the unit-circumference circle R/Z."""

    def __init__(self, angles):
        self.angles = angles
        self.size = len(angles)

    def eval(self, i, j):
        gap = abs(self.angles[i] - self.angles[j])
        return min(gap, 1.0 - gap)


class MatrixOracle:
    """Reads a stored row-major lower-triangle distance matrix."""

    def __init__(self, values, n):
        self.values = values
        self.size = n

    def eval(self, i, j):
        if i == j:
            return 0.0
        if i < j:
            i, j = j, i
        return self.values[i * (i - 1) // 2 + j]


def euclidean_oracle(points) -> EuclideanOracle:
    """Build a Euclidean oracle; all points must share one dimension."""
    pts = [tuple(float(c) for c in p) for p in points]
    if not pts:
        raise InputError("no points given")
    dim = len(pts[0])
    for k, p in enumerate(pts):
        if len(p) != dim:
            raise InputError(f"point {k} has dimension {len(p)}, expected {dim}")
        if not all(math.isfinite(c) for c in p):
            raise InputError(f"point {k} has a non-finite coordinate")
    return EuclideanOracle(pts)


def circle_oracle(angles) -> CircleOracle:
    """Build a geodesic oracle from angles in [0, 1)."""
    angs = [float(a) for a in angles]
    if not angs:
        raise InputError("no angles given")
    for k, a in enumerate(angs):
        if not (0.0 <= a < 1.0):
            raise InputError(f"angle {k} = {a!r} outside [0, 1)")
    return CircleOracle(angs)


def matrix_oracle(lower_triangle) -> MatrixOracle:
    """Build an oracle from a row-major lower-triangle list of lengths.

    The list length must be n(n-1)/2 for some n >= 1; the diagonal is an
    implicit zero.  The empty list denotes a single point.
    """
    values = [float(v) for v in lower_triangle]
    m = len(values)
    # invert m = n(n-1)/2
    n = int((1 + math.isqrt(1 + 8 * m)) // 2)
    if n * (n - 1) // 2 != m:
        raise InputError(f"{m} entries is not a triangular count n(n-1)/2")
    for k, v in enumerate(values):
        if not math.isfinite(v):
            raise InputError(f"entry {k} is not finite")
        if v < 0:
            raise InputError(f"entry {k} is negative")
    return MatrixOracle(values, n)


def load_points(path):
    """Parse a point CSV: one point per line, comma or whitespace separated."""
    points = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                coords = tuple(float(tok) for tok in text.replace(",", " ").split())
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
            points.append(coords)
    if not points:
        raise InputError(f"{path}: no points")
    return points


def write_points_csv(path, points):
    with open(path, "w") as fh:
        for p in points:
            fh.write(",".join(repr(float(c)) for c in p))
            fh.write("\n")


def load_lower_distance(path):
    """Parse a lower-distance-matrix file (comma/newline separated decimals)."""
    with open(path) as fh:
        text = fh.read()
    tokens = text.replace(",", " ").split()
    try:
        return [float(tok) for tok in tokens]
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
