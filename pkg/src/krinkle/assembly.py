"""Wedges of translated prototiles, their counterclockwise placement, and closure.

All placement arithmetic happens on exact lattice points; floats are only
produced when a placed tile's vertices are projected.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .geometry import (
    LatticePoint,
    RealPoint,
    RigidMotion,
    apply_motion,
    half_turn_lattice,
    project,
    project_many,
    trace_path,
)
from .prototile import ConstructionError, Prototile, build_prototile
from .sequences import (
    DirectionSequence,
    Params,
    alignment_index,
    condition_c_violation,
    first_index_of,
    lower_boundary,
    lower_sequence,
    upper_boundary,
)


class CoverageWarning(UserWarning):
    """The row budget does not reach far enough to cover the requested window."""


@lru_cache(maxsize=4096)
def _rotated_vertices(params: Params, r: int) -> np.ndarray:
    coeffs = np.roll(build_prototile(params).boundary_coeffs(), r % params.n, axis=1)
    out = project_many(coeffs, params.n)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PlacedTile:
    """A copy of the prototile moved by a lattice rigid motion."""

    wedge_index: int
    row: int
    col: int
    motion: RigidMotion
    closure_copy: int = 0
    vertices: np.ndarray = field(default=None, repr=False)

    @classmethod
    def place(cls, params: Params, wedge_index: int, row: int, col: int, motion: RigidMotion,
              closure_copy: int = 0) -> "PlacedTile":
        if not 0 <= col <= row:
            raise ValueError(f"need 0 <= c <= r, got r={row}, c={col}")
        if motion.rotation_index != wedge_index % params.n:
            raise ValueError("rotation index must equal the wedge index mod n")
        verts = _rotated_vertices(params, motion.rotation_index) + np.asarray(project(motion.translation))
        verts.setflags(write=False)
        return cls(wedge_index % params.n, row, col, motion, closure_copy, verts)

    def key(self) -> tuple[int, int, int, int]:
        return (self.closure_copy, self.wedge_index, self.row, self.col)

    def lattice_vertices(self, prototile: Prototile) -> list[LatticePoint]:
        return [apply_motion(self.motion, p) for p in prototile.boundary]


def row_shift(params: Params) -> LatticePoint:
    """Translation between consecutive rows: the sum of one period of lower steps."""
    return LatticePoint.from_steps(lower_sequence(params.m, params.k)[: params.k], params.n)


def in_row_shift(params: Params) -> LatticePoint:
    return LatticePoint.basis(params.k, params.n) - LatticePoint.basis(0, params.n)


def row_height(params: Params) -> float:
    """Distance gained per row along the wedge axis at angle k*pi/n."""
    d0 = project(row_shift(params))
    a = params.k * math.pi / params.n
    return d0.x * math.cos(a) + d0.y * math.sin(a)


@dataclass(frozen=True, eq=False)
class Wedge:
    index: int
    origin_motion: RigidMotion
    tiles: tuple[PlacedTile, ...]
    d0: LatticePoint
    d1: LatticePoint
    lower_boundary: DirectionSequence
    upper_boundary: DirectionSequence
    rows: int

    @property
    def start(self) -> LatticePoint:
        return self.origin_motion.translation

    def tile(self, r: int, c: int) -> PlacedTile:
        return self.tiles[r * (r + 1) // 2 + c]


def build_wedge(params: Params, i: int, rows: int, start: LatticePoint | None = None) -> Wedge:
    """Tiles ``T[r, c]`` for ``0 <= c <= r < rows`` of wedge ``i``.

    Tile ``T[r, c]`` starts at ``start + rot_i(r*d0 + c*d1)``.
    """
    n = params.n
    if not 0 <= i < n:
        raise ValueError(f"wedge index {i} out of range [0, {n})")
    if rows < 1:
        raise ValueError(f"rows must be >= 1, got {rows}")
    start = LatticePoint.zero(n) if start is None else start
    d0 = row_shift(params).rotate(i)
    d1 = in_row_shift(params).rotate(i)
    tiles = []
    for r in range(rows):
        for c in range(r + 1):
            motion = RigidMotion(n, i, start + d0 * r + d1 * c)
            tiles.append(PlacedTile.place(params, i, r, c, motion))
    return Wedge(
        index=i,
        origin_motion=RigidMotion(n, i, start),
        tiles=tuple(tiles),
        d0=d0,
        d1=d1,
        lower_boundary=lower_boundary(params.m, params.k, i),
        upper_boundary=upper_boundary(params.m, params.k, i),
        rows=rows,
    )


def wedge_start_position(params: Params, i: int, front_prev: DirectionSequence | None) -> LatticePoint:
    """Where wedge ``i`` attaches: the start of the first front edge in direction ``i``."""
    n, k = params.n, params.k
    if i == 0:
        return LatticePoint.zero(n)
    j_star = alignment_index(i, params.m, k)
    scanned = first_index_of(front_prev, i, k)
    if scanned is None:
        raise ConstructionError(f"front before wedge {i} has no edge in direction {i}")
    if scanned != j_star:
        raise ConstructionError(f"alignment index {j_star} disagrees with scan {scanned} for wedge {i}")
    return LatticePoint.from_steps(front_prev.take(j_star), n)


def advance_front(front_prev: DirectionSequence, i: int, k: int, m: int | None = None) -> DirectionSequence:
    """Replace every ``i`` in the front by ``i + k``.

    ``m`` is read off the first step of the front when not given; it is only
    needed to check that the input satisfies C(i).
    """
    if m is None:
        m = (front_prev[1] - front_prev[0]) % k
    problem = condition_c_violation(front_prev, i, m, k)
    if problem:
        raise ValueError(f"front does not satisfy C({i}): {problem}")
    return front_prev.replace(i, i + k)


def splice_front(front_prev: DirectionSequence, j_star: int, wedge_upper: DirectionSequence) -> DirectionSequence:
    """Front after attaching a wedge at index ``j_star``: old prefix, then the wedge's upper boundary."""
    return DirectionSequence(tuple(front_prev.take(j_star)) + wedge_upper.prefix, wedge_upper.period).canonical()


@dataclass(frozen=True, eq=False)
class Tiling:
    """The fundamental region (``w`` wedges) plus the motions that close it up.

    ``closure_motions`` are recorded in their natural form (rotations about
    the origin, or a half-turn about a real point); ``closure_lattice`` holds
    the equivalent lattice motions used for placing tiles.
    """

    params: Params
    rows: int
    prototile: Prototile
    wedges: tuple[Wedge, ...]
    base: DirectionSequence
    fronts: tuple[DirectionSequence, ...]
    closure_motions: tuple[RigidMotion, ...]
    closure_lattice: tuple[RigidMotion, ...]

    def iter_tiles(self, rows: int | None = None) -> Iterator[PlacedTile]:
        """All tiles with row < ``rows``, in (closure_copy, wedge, r, c) order."""
        rows = self.rows if rows is None else min(rows, self.rows)
        for q, outer in enumerate(self.closure_lattice):
            for wedge in self.wedges:
                for tile in wedge.tiles:
                    if tile.row >= rows:
                        break
                    if q == 0:
                        yield tile
                        continue
                    motion = tile.motion.then(outer)
                    yield PlacedTile.place(self.params, motion.rotation_index, tile.row, tile.col, motion, q)

    def wedge_starts(self) -> list[tuple[int, RigidMotion]]:
        """(closure copy, lattice motion of the wedge origin) for all ``n`` wedges."""
        out = []
        for q, outer in enumerate(self.closure_lattice):
            for wedge in self.wedges:
                out.append((q, wedge.origin_motion.then(outer)))
        return out

    def covered_radius(self, rows: int | None = None) -> float:
        """Radius of the origin-centred disk that rows beyond the budget cannot reach.

        Every tile point has a non-negative component along its wedge axis
        relative to the tile start, so row ``r`` lies in the half-plane at
        height ``r*h + start . axis``.
        """
        rows = self.rows if rows is None else min(rows, self.rows)
        h = row_height(self.params)
        n, k = self.params.n, self.params.k
        best = math.inf
        for _, motion in self.wedge_starts():
            a = math.pi * (k + 2 * motion.rotation_index) / n
            s = project(motion.translation)
            best = min(best, rows * h + s.x * math.cos(a) + s.y * math.sin(a))
        return best


def build_tiling(params: Params, rows: int) -> Tiling:
    if rows < 1:
        raise ValueError(f"rows must be >= 1, got {rows}")
    n, k, m = params.n, params.k, params.m
    prototile = build_prototile(params)
    base = lower_boundary(m, k, 0)
    wedges = [build_wedge(params, 0, rows)]
    fronts = [wedges[0].upper_boundary.canonical()]
    for i in range(1, params.w):
        prev = fronts[-1]
        start = wedge_start_position(params, i, prev)
        wedge = build_wedge(params, i, rows, start)
        j_star = alignment_index(i, m, k)
        if prev.drop(j_star) != wedge.lower_boundary:
            raise ConstructionError(f"wedge {i} lower boundary does not follow the front")
        wedges.append(wedge)
        fronts.append(splice_front(prev, j_star, wedge.upper_boundary))

    if params.offset:
        closure = (RigidMotion.identity(n), RigidMotion(n, half_turn_about=RealPoint(0.5, 0.0)))
        lattice = (RigidMotion.identity(n), half_turn_lattice(n, LatticePoint.basis(0, n)))
    else:
        closure = tuple(RigidMotion(n, q * k) for q in range(params.t))
        lattice = closure
    return Tiling(params, rows, prototile, tuple(wedges), base, tuple(fronts), closure, lattice)


def _bbox_distance(vertices: np.ndarray) -> float:
    lo, hi = vertices.min(axis=0), vertices.max(axis=0)
    dx = max(lo[0], 0.0, -hi[0])
    dy = max(lo[1], 0.0, -hi[1])
    return math.hypot(dx, dy)


def tiles_in_window(tiling: Tiling, radius: float | None, rows: int | None = None) -> list[PlacedTile]:
    """Tiles whose bounding box meets the disk of ``radius`` about the origin.

    ``radius`` of None or 0 returns every tile within the row budget.  A
    :class:`CoverageWarning` is issued when the budget may leave part of the
    disk uncovered.
    """
    tiles = tiling.iter_tiles(rows)
    if not radius:
        return list(tiles)
    if radius < 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if tiling.covered_radius(rows) <= radius:
        warnings.warn(
            f"row budget {rows or tiling.rows} covers only radius {tiling.covered_radius(rows):.3f} < {radius}",
            CoverageWarning,
            stacklevel=2,
        )
    return [t for t in tiles if _bbox_distance(t.vertices) <= radius + 1e-9]


def rows_for_radius(params: Params, radius: float) -> int:
    """Smallest row budget whose tiles are guaranteed to cover the disk."""
    probe = build_tiling(params, 1)
    slack = probe.covered_radius(1) - row_height(params)
    return max(1, math.floor((radius - slack) / row_height(params)) + 1)


def front_path(front: DirectionSequence, count: int, n: int) -> list[LatticePoint]:
    """First ``count`` edges of a front, traced from the origin."""
    return trace_path(LatticePoint.zero(n), front.take(count))


def wedge_lower_path(wedge: Wedge, prototile: Prototile) -> list[LatticePoint]:
    """Lower boundary vertices read off tiles ``T[r, 0]``."""
    k = prototile.params.k
    pts: list[LatticePoint] = []
    for r in range(wedge.rows):
        motion = wedge.tile(r, 0).motion
        pts.extend(apply_motion(motion, p) for p in prototile.lower_vertices[:k])
    pts.append(apply_motion(wedge.tile(wedge.rows - 1, 0).motion, prototile.lower_vertices[k]))
    return pts


def wedge_upper_path(wedge: Wedge, prototile: Prototile) -> list[LatticePoint]:
    """Upper boundary vertices read off tiles ``T[r, r]``."""
    k = prototile.params.k
    pts: list[LatticePoint] = []
    for r in range(wedge.rows):
        motion = wedge.tile(r, r).motion
        pts.extend(apply_motion(motion, p) for p in prototile.upper_vertices[:k])
    last = wedge.rows - 1
    pts.append(apply_motion(wedge.tile(last, last).motion, prototile.upper_vertices[k]))
    return pts
