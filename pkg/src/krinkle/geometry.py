"""Direction vectors, exact lattice points and rigid motions.

A point reachable by unit steps is stored exactly as an integer vector of
length ``n``: coefficient ``c[d]`` counts the steps taken in direction
``d``.  Floats only appear when such a point is projected to the plane.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

#: Global tolerance for comparisons of real coordinates (edge length is 1).
EPS = 1e-9


class RealPoint(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return RealPoint(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return RealPoint(self.x - other[0], self.y - other[1])

    def scale(self, s: float) -> "RealPoint":
        return RealPoint(self.x * s, self.y * s)


def unit_vector(i: int, n: int) -> RealPoint:
    """Unit vector at angle ``2*pi*i/n``; exact on the axes."""
    if not 0 <= i < n:
        raise IndexError(f"direction {i} out of range [0, {n})")
    if (4 * i) % n == 0:
        return RealPoint(*[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][4 * i // n])
    a = 2.0 * math.pi * i / n
    return RealPoint(math.cos(a), math.sin(a))


@lru_cache(maxsize=None)
def _unit_table(n: int) -> np.ndarray:
    table = np.array([unit_vector(i, n) for i in range(n)], dtype=float)
    table.setflags(write=False)
    return table


def unit_vectors(n: int) -> np.ndarray:
    """``(n, 2)`` read-only array of all direction vectors."""
    return _unit_table(n)


@dataclass(frozen=True)
class LatticePoint:
    """Exact point: integer coefficients over the ``n`` direction vectors."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...]) -> "LatticePoint":
        # arithmetic results are already int tuples; skip normalisation
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", coeffs)
        return p

    @classmethod
    def zero(cls, n: int) -> "LatticePoint":
        return cls((0,) * n)

    @classmethod
    def basis(cls, d: int, n: int) -> "LatticePoint":
        c = [0] * n
        c[d % n] = 1
        return cls(tuple(c))

    @classmethod
    def from_steps(cls, dirs: Iterable[int], n: int) -> "LatticePoint":
        c = [0] * n
        for d in dirs:
            c[d % n] += 1
        return cls(tuple(c))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        if len(other.coeffs) != len(self.coeffs):
            raise ValueError("lattice points of different n")
        return LatticePoint._raw(tuple(map(operator.add, self.coeffs, other.coeffs)))

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        if len(other.coeffs) != len(self.coeffs):
            raise ValueError("lattice points of different n")
        return LatticePoint._raw(tuple(map(operator.sub, self.coeffs, other.coeffs)))

    def __neg__(self) -> "LatticePoint":
        return LatticePoint._raw(tuple(-a for a in self.coeffs))

    def __mul__(self, s: int) -> "LatticePoint":
        s = operator.index(s)
        return LatticePoint._raw(tuple(s * a for a in self.coeffs))

    __rmul__ = __mul__

    def rotate(self, r: int) -> "LatticePoint":
        """Rotate by ``2*pi*r/n``: the coefficient of direction d moves to d + r."""
        n = self.n
        r %= n
        return LatticePoint._raw(self.coeffs[n - r:] + self.coeffs[:n - r]) if r else self

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def project(self) -> RealPoint:
        return project(self)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.int64)


def project(p: LatticePoint, n: int | None = None) -> RealPoint:
    """Evaluate the coefficient combination of unit vectors in floating point."""
    n = p.n if n is None else n
    if n != p.n:
        raise ValueError(f"lattice point has {p.n} coefficients, expected {n}")
    x, y = np.asarray(p.coeffs, dtype=float) @ unit_vectors(n)
    return RealPoint(float(x), float(y))


def project_many(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Project an ``(N, n)`` integer coefficient array to ``(N, 2)`` floats."""
    return np.asarray(coeffs, dtype=float) @ unit_vectors(n)


def trace_path(start: LatticePoint, dirs: Sequence[int]) -> list[LatticePoint]:
    """Vertices of the unit-step path from ``start`` following ``dirs``."""
    n = start.n
    pts = [start]
    c = list(start.coeffs)
    for d in dirs:
        c[d % n] += 1
        pts.append(LatticePoint._raw(tuple(c)))
    return pts


def trace_coeffs(start: np.ndarray, dirs: Sequence[int], n: int) -> np.ndarray:
    """Array form of :func:`trace_path`: ``(len(dirs) + 1, n)`` integer rows."""
    steps = np.zeros((len(dirs) + 1, n), dtype=np.int64)
    for j, d in enumerate(dirs):
        steps[j + 1, d % n] = 1
    return np.cumsum(steps, axis=0) + np.asarray(start, dtype=np.int64)


@dataclass(frozen=True)
class RigidMotion:
    """Rotation by ``2*pi*rotation_index/n`` about the origin, then a lattice translation.

    With ``half_turn_about`` set the motion is instead the point reflection
    through that real point; it then maps into real coordinates only.
    """

    n: int
    rotation_index: int = 0
    translation: LatticePoint | None = None
    half_turn_about: RealPoint | None = None

    def __post_init__(self):
        object.__setattr__(self, "rotation_index", self.rotation_index % self.n)
        if self.translation is None:
            object.__setattr__(self, "translation", LatticePoint.zero(self.n))
        if self.half_turn_about is not None:
            object.__setattr__(self, "half_turn_about", RealPoint(*self.half_turn_about))
            if self.rotation_index or not self.translation.is_zero():
                raise ValueError("a half-turn motion carries no rotation index or translation")

    @classmethod
    def identity(cls, n: int) -> "RigidMotion":
        return cls(n)

    @property
    def is_lattice(self) -> bool:
        return self.half_turn_about is None

    def then(self, outer: "RigidMotion") -> "RigidMotion":
        """Composition: apply ``self`` first, then ``outer`` (lattice motions only)."""
        if not (self.is_lattice and outer.is_lattice):
            raise ValueError("only lattice motions compose exactly")
        return RigidMotion(
            self.n,
            self.rotation_index + outer.rotation_index,
            self.translation.rotate(outer.rotation_index) + outer.translation,
        )

    def as_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Real 2x2 rotation and offset equivalent to this motion."""
        if self.half_turn_about is not None:
            c = np.asarray(self.half_turn_about, dtype=float)
            return -np.eye(2), 2.0 * c
        a = 2.0 * math.pi * self.rotation_index / self.n
        rot = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
        return rot, np.asarray(project(self.translation), dtype=float)


def apply_motion(motion: RigidMotion, p: LatticePoint) -> LatticePoint | RealPoint:
    if motion.half_turn_about is not None:
        q = project(p)
        c = motion.half_turn_about
        return RealPoint(2.0 * c.x - q.x, 2.0 * c.y - q.y)
    return p.rotate(motion.rotation_index) + motion.translation


def apply_real(motion: RigidMotion, xy) -> RealPoint:
    """Apply ``motion`` to a real point with ordinary float arithmetic."""
    rot, off = motion.as_matrix()
    x, y = rot @ np.asarray(xy, dtype=float) + off
    return RealPoint(float(x), float(y))


def half_turn_lattice(n: int, twice_center: LatticePoint) -> RigidMotion:
    """Point reflection through ``project(twice_center) / 2`` written as a lattice motion.

    Negation of a step equals rotation by ``n/2``, so for even ``n`` the
    half-turn maps lattice points to lattice points.
    """
    if n % 2:
        raise ValueError(f"half-turn is not a lattice rotation for odd n={n}")
    return RigidMotion(n, n // 2, twice_center)


def shoelace_area(vertices: np.ndarray) -> float:
    """Signed area of a closed polygon given as ``(V, 2)`` vertices (no repeat)."""
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _point_segment(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # rows of p, a, b broadcast against each other
    ab = b - a
    L = np.einsum("...i,...i->...", ab, ab)
    s = np.einsum("...i,...i->...", p - a, ab) / np.where(L == 0, 1.0, L)
    s = np.clip(np.where(L == 0, 0.0, s), 0.0, 1.0)
    return np.hypot(*np.moveaxis(a + s[..., None] * ab - p, -1, 0))


def segment_distances(p1, p2, q1, q2) -> np.ndarray:
    """Minimum distance between segment p1p2 and each segment ``q1[j] q2[j]``."""
    p1, p2 = np.asarray(p1, dtype=float), np.asarray(p2, dtype=float)
    q1, q2 = np.atleast_2d(np.asarray(q1, dtype=float)), np.atleast_2d(np.asarray(q2, dtype=float))
    d1, d2, r = p2 - p1, q2 - q1, q1 - p1
    denom = d1[0] * d2[:, 1] - d1[1] * d2[:, 0]
    safe = np.where(np.abs(denom) > 1e-15, denom, 1.0)
    s = (r[:, 0] * d2[:, 1] - r[:, 1] * d2[:, 0]) / safe
    u = (r[:, 0] * d1[1] - r[:, 1] * d1[0]) / safe
    crossing = (np.abs(denom) > 1e-15) & (s >= 0) & (s <= 1) & (u >= 0) & (u <= 1)
    best = np.minimum.reduce([
        _point_segment(p1, q1, q2),
        _point_segment(p2, q1, q2),
        _point_segment(q1, p1, p2),
        _point_segment(q2, p1, p2),
    ])
    return np.where(crossing, 0.0, best)


def segment_distance(p1, p2, q1, q2) -> float:
    """Minimum distance between closed segments p1p2 and q1q2."""
    return float(segment_distances(p1, p2, q1, q2)[0])
