"""The prototile: a 2(k+1)-gon bounded by two unit-step paths."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import EPS, LatticePoint, project_many, segment_distances, shoelace_area, trace_path
from .sequences import Params, lower_sequence, upper_sequence


class ConstructionError(RuntimeError):
    """An internal invariant of the construction failed (a bug, not bad input)."""


@dataclass(frozen=True)
class Edge:
    start: LatticePoint
    end: LatticePoint
    direction: int

    def translated(self, v: LatticePoint) -> "Edge":
        return Edge(self.start + v, self.end + v, self.direction)


@dataclass(frozen=True, eq=False)
class Prototile:
    """Canonical tile with its starting point at the origin.

    ``boundary`` runs along the lower path and back along the upper path, so
    it is counterclockwise and has ``2k + 2`` vertices.  The two paths share
    only their first and last vertex.
    """

    params: Params
    lower_dirs: tuple[int, ...]
    upper_dirs: tuple[int, ...]
    lower_vertices: tuple[LatticePoint, ...]
    upper_vertices: tuple[LatticePoint, ...]

    @property
    def start(self) -> LatticePoint:
        return self.lower_vertices[0]

    @property
    def end(self) -> LatticePoint:
        return self.lower_vertices[-1]

    @property
    def boundary(self) -> tuple[LatticePoint, ...]:
        return self.lower_vertices + tuple(reversed(self.upper_vertices[1:-1]))

    def boundary_coeffs(self) -> np.ndarray:
        return np.array([p.coeffs for p in self.boundary], dtype=np.int64)

    def vertices(self) -> np.ndarray:
        """Projected boundary, shape ``(2k + 2, 2)``."""
        return project_many(self.boundary_coeffs(), self.params.n)

    @property
    def base(self) -> Edge:
        return Edge(self.lower_vertices[0], self.lower_vertices[1], self.lower_dirs[0])

    @property
    def neighbor(self) -> Edge:
        return Edge(self.upper_vertices[0], self.upper_vertices[1], self.upper_dirs[0])

    @property
    def opposite_base(self) -> Edge:
        return Edge(self.upper_vertices[-2], self.upper_vertices[-1], self.upper_dirs[-1])

    @property
    def opposite_neighbor(self) -> Edge:
        return Edge(self.lower_vertices[-2], self.lower_vertices[-1], self.lower_dirs[-1])

    @property
    def named_edges(self) -> dict[str, Edge]:
        return {
            "base": self.base,
            "neighbor": self.neighbor,
            "opposite_base": self.opposite_base,
            "opposite_neighbor": self.opposite_neighbor,
        }

    def area(self) -> float:
        return shoelace_area(self.vertices())


def simplicity_violation(vertices: np.ndarray, eps: float = EPS) -> str | None:
    """Brute-force check that a closed polygon is simple.

    Non-adjacent edges must stay more than ``eps`` apart and adjacent edges
    must not fold back onto each other.  Straight (180 degree) vertices are
    allowed.
    """
    V = len(vertices)
    if V < 3:
        return "fewer than three vertices"
    vertices = np.asarray(vertices, dtype=float)
    nxt = np.roll(vertices, -1, axis=0)
    for i in range(V):
        a0, a1 = vertices[i], nxt[i]
        u, v = a1 - a0, nxt[(i + 1) % V] - vertices[(i + 1) % V]
        if abs(u[0] * v[1] - u[1] * v[0]) < eps and float(u @ v) < 0:
            return f"edges {i} and {(i + 1) % V} fold back"
        # edge 0 and edge V-1 are adjacent
        js = np.arange(i + 2, V - 1 if i == 0 else V)
        if not len(js):
            continue
        d = segment_distances(a0, a1, vertices[js], nxt[js])
        hit = np.flatnonzero(d <= eps)
        if len(hit):
            j = int(js[hit[0]])
            return f"edges {i} and {j} touch (distance {d[hit[0]]:.3g})"
    return None


def collinear_vertices(vertices: np.ndarray, eps: float = EPS) -> list[int]:
    """Indices of vertices where the boundary continues straight on."""
    V = len(vertices)
    out = []
    for i in range(V):
        u = vertices[i] - vertices[i - 1]
        v = vertices[(i + 1) % V] - vertices[i]
        if abs(u[0] * v[1] - u[1] * v[0]) < eps and float(u @ v) > 0:
            out.append(i)
    return out


@lru_cache(maxsize=256)
def build_prototile(params: Params) -> Prototile:
    m, k, n = params.m, params.k, params.n
    lower = lower_sequence(m, k)
    upper = upper_sequence(m, k)
    origin = LatticePoint.zero(n)
    tile = Prototile(
        params,
        tuple(lower),
        tuple(upper),
        tuple(trace_path(origin, lower)),
        tuple(trace_path(origin, upper)),
    )
    if tile.lower_vertices[-1] != tile.upper_vertices[-1]:
        raise ConstructionError(f"lower and upper paths end apart for {params}")
    verts = tile.vertices()
    problem = simplicity_violation(verts)
    if problem:
        raise ConstructionError(f"prototile for {params} is not simple: {problem}")
    if shoelace_area(verts) <= 0:
        raise ConstructionError(f"prototile for {params} is not counterclockwise")
    return tile


def interior_direction_check(params: Params) -> bool:
    """Every interior step direction has a positive component along angle k*pi/n."""
    k, n = params.k, params.n
    axis = (math.cos(k * math.pi / n), math.sin(k * math.pi / n))
    return all(
        math.cos(2 * math.pi * d / n) * axis[0] + math.sin(2 * math.pi * d / n) * axis[1] > 0
        for d in range(1, k)
    )


def prototile_area(params: Params) -> float:
    return build_prototile(params).area()
