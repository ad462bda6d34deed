"""Executable checks of a Modulo Krinkle tiling.

Two families of checks live here.  Sequence checks are exact integer
identities on direction sequences and lattice paths.  Geometric checks work
on projected tile polygons inside a disk about the origin: shared edges,
angle sums at vertices and point-sampled coverage.  Every check reports
instead of raising, so a failing tiling still yields a complete report.
"""

from __future__ import annotations

import json
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .assembly import (
    PlacedTile,
    Tiling,
    build_tiling,
    front_path,
    rows_for_radius,
    tiles_in_window,
    wedge_lower_path,
    wedge_upper_path,
)
from .geometry import EPS, LatticePoint
from .prototile import build_prototile, collinear_vertices, interior_direction_check, simplicity_violation
from .sequences import (
    DirectionSequence,
    Params,
    alignment_index,
    condition_c_violation,
    first_index_of,
    lower_boundary,
    shifted_period,
    shifted_progression,
    upper_boundary,
)

#: Cell size used to identify coincident vertices.
QUANTUM = 1e-6
#: Distinct vertices closer than this are reported as a near-collision.
MIN_SEPARATION = 1e-3
DEFAULT_SEED = 20240501


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counts: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "counts": self.counts}


@dataclass
class ValidationReport:
    params: Params | None
    checks: list[CheckResult] = field(default_factory=list)
    window: dict = field(default_factory=dict)
    tolerance: float = EPS

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", **counts) -> CheckResult:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"check {name!r} registered twice")
        result = CheckResult(name, bool(passed), detail, counts)
        self.checks.append(result)
        return result

    def merge(self, *others: "ValidationReport") -> "ValidationReport":
        for other in others:
            for c in other.checks:
                self.add(c.name, c.passed, c.detail, **c.counts)
            self.window.update(other.window)
        return self

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "params": self.params.as_dict() if self.params else None,
            "passed": self.passed,
            "window": self.window,
            "tolerance": self.tolerance,
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        head = f"Modulo Krinkle tiling {self.params}" if self.params else "Modulo Krinkle tiling"
        lines = [head]
        if self.window:
            lines.append("window: " + ", ".join(f"{k}={v}" for k, v in self.window.items()))
        lines.append(f"tolerance: {self.tolerance:g}")
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            counts = " ".join(f"{k}={v}" for k, v in c.counts.items())
            lines.append(f"[{tag}] {c.name}" + (f"  ({counts})" if counts else ""))
            if c.detail:
                lines.append(f"       {c.detail}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# exact sequence identities


def check_sequence_identities(
    params: Params,
    horizon: int | None = None,
    fronts: Sequence[DirectionSequence] | None = None,
    base: DirectionSequence | None = None,
) -> ValidationReport:
    """Integer identities of the construction, compared term by term up to ``horizon``.

    ``fronts`` and ``base`` default to the ones produced by
    :func:`build_tiling`; pass stored values to audit an exported tiling.
    """
    m, k, n, w = params.m, params.k, params.n, params.w
    horizon = 10 * k if horizon is None else horizon
    if horizon < 2 * k:
        raise ValueError(f"horizon {horizon} too small, need at least {2 * k}")
    if fronts is None or base is None:
        tiling = build_tiling(params, 1)
        fronts = tiling.fronts if fronts is None else fronts
        base = tiling.base if base is None else base
    report = ValidationReport(params)
    s = [shifted_progression(m, k, i, horizon + 1) for i in range(w + 1)]

    bad = [(i, p) for i in range(w + 1) if (p := condition_c_violation(s[i][:horizon], i, m, k, horizon))]
    report.add("C(i) for shifted progressions", not bad,
               f"level {bad[0][0]}: {bad[0][1]}" if bad else "", levels=w + 1, horizon=horizon)

    bad = [(i, p) for i in range(w + 1) if (p := condition_c_violation(lower_boundary(m, k, i).take(horizon), i, m, k))]
    report.add("C(i) for lower boundaries", not bad,
               f"wedge {bad[0][0]}: {bad[0][1]}" if bad else "", levels=w + 1)

    bad = []
    for i in range(w + 1):
        lo, up = lower_boundary(m, k, i), upper_boundary(m, k, i)
        if lo.replace(i, i + k) != up:
            bad.append(i)
    report.add("upper boundary = lower boundary with i -> i+k", not bad,
               f"wedge {bad[0]}" if bad else "", levels=w + 1)

    base_ok = list(base.take(horizon)) == s[0][:horizon]
    report.add("base = plain progression", base_ok, "" if base_ok else f"base {base.take(k)} != {s[0][:k]}")

    detail, checked = "", 0
    if len(fronts) != w:
        detail = f"expected {w} fronts, got {len(fronts)}"
    else:
        for i, front in enumerate(fronts):
            checked += 1
            j = next((j for j in range(horizon) if front[j] != s[i + 1][j]), None)
            if j is not None:
                detail = f"front {i} differs from level {i + 1} at j={j}: {front[j]} != {s[i + 1][j]}"
                break
    report.add("front i = shifted progression level i+1", not detail, detail, fronts=checked, horizon=horizon)

    last = fronts[-1] if fronts else DirectionSequence.finite([])
    if params.offset:
        name, shift, lag = "closure: last front = truncated base + n/2", n // 2, 1
    else:
        name, shift, lag = "closure: last front = base + k", k, 0
    detail = ""
    try:
        j = next((j for j in range(horizon) if last[j] != base[j + lag] + shift), None)
        if j is not None:
            detail = f"f[{j}] = {last[j]} != b[{j + lag}] + {shift} = {base[j + lag] + shift}"
    except IndexError as exc:
        detail = f"sequence too short: {exc}"
    report.add(name, not detail, detail)

    if params.offset:
        first = last[0] if fronts else None
        ok = first == params.t * k == n // 2 + m
        report.add("closure: first front term = tk", ok, "" if ok else f"first term {first} != {params.t * k}")

    bad = [(i, j) for i in range(w + 1) for j in range(horizon)
           if (d := s[i][j] - s[0][j]) < 0 or d % k]
    report.add("level i - level 0 is a non-negative multiple of k", not bad,
               f"level {bad[0][0]} index {bad[0][1]}" if bad else "", levels=w + 1)

    bad = []
    for i in range(w + 1):
        seq = shifted_period(m, k, i)
        if condition_c_violation(seq.drop(1), i, m, k):
            bad.append(f"drop-first at level {i}")
        for c in (1, k, n):
            if condition_c_violation(seq.shift(c), i + c, m, k):
                bad.append(f"shift by {c} at level {i}")
    report.add("C(i) closed under truncation and shifting", not bad, bad[0] if bad else "", levels=w + 1)

    bad = []
    for i in range(1, w + 1):
        scanned = first_index_of(s[i], i, horizon)
        if scanned != alignment_index(i, m, k):
            bad.append(f"i={i}: formula {alignment_index(i, m, k)} scan {scanned}")
    report.add("alignment index formula = linear scan", not bad, bad[0] if bad else "", levels=w)
    return report


def check_lattice_alignment(tiling: Tiling, min_rows: int = 3) -> ValidationReport:
    """Each wedge's tile-derived lower boundary retraces the previous front from j*.

    Works in exact lattice coordinates; the comparison spans ``rows * k``
    edges, so ``tiling.rows >= 3`` gives the required 3k edges.
    """
    params = tiling.params
    if tiling.rows < min_rows:
        tiling = build_tiling(params, min_rows)
    m, k, n = params.m, params.k, params.n
    proto = tiling.prototile
    span = tiling.rows * k
    report = ValidationReport(params)
    lower_bad, upper_bad = [], []
    for i, wedge in enumerate(tiling.wedges):
        lower = wedge_lower_path(wedge, proto)
        upper = wedge_upper_path(wedge, proto)
        if i == 0:
            if lower[0] != LatticePoint.zero(n) or upper[0] != LatticePoint.zero(n):
                lower_bad.append("wedge 0 does not start at the origin")
            base = front_path(tiling.base, span, n)
            if lower != base:
                lower_bad.append("wedge 0 lower boundary is not the base")
            j_star = 0
        else:
            j_star = alignment_index(i, m, k)
            prev = front_path(tiling.fronts[i - 1], j_star + span, n)[j_star:]
            if lower != prev:
                at = next(j for j, (a, b) in enumerate(zip(lower, prev)) if a != b)
                lower_bad.append(f"wedge {i} leaves the front at vertex {at}")
        new = front_path(tiling.fronts[i], j_star + span, n)[j_star:]
        if upper != new:
            upper_bad.append(f"wedge {i}")
    report.add("wedge lower boundary follows previous front", not lower_bad,
               lower_bad[0] if lower_bad else "", wedges=len(tiling.wedges), edges=span)
    report.add("wedge upper boundary becomes the new front", not upper_bad,
               f"{upper_bad[0]} upper boundary differs" if upper_bad else "", wedges=len(tiling.wedges), edges=span)
    return report


def check_prototile(params: Params) -> ValidationReport:
    report = ValidationReport(params)
    proto = build_prototile(params)
    n, k = params.n, params.k
    report.add("prototile paths share endpoints", proto.lower_vertices[-1] == proto.upper_vertices[-1]
               and proto.lower_vertices[0] == proto.upper_vertices[0])
    verts = proto.vertices()
    problem = simplicity_violation(verts)
    report.add("prototile is a simple polygon", problem is None, problem or "", edges=len(verts))
    area = proto.area()
    report.add("prototile is counterclockwise", area > 0, f"area {area:.12g}")
    report.add("interior steps point into one half-plane", interior_direction_check(params))
    straight = collinear_vertices(verts)
    expected = 2 if n == 2 * k else 0
    report.add("straight vertices only when n = 2k", len(straight) == expected,
               f"straight at {straight}", straight=len(straight), expected=expected)
    dirs = {name: e.direction for name, e in proto.named_edges.items()}
    ok = dirs == {"base": 0, "neighbor": k, "opposite_base": 0, "opposite_neighbor": k}
    report.add("named edge directions", ok, "" if ok else str(dirs))
    shift = LatticePoint.from_steps(proto.lower_dirs[1:], n)
    ok = proto.opposite_base == proto.base.translated(shift)
    report.add("opposite base edge = translated base edge", ok)
    return report


# ---------------------------------------------------------------------------
# geometry on projected tiles


class PointIndex:
    """Identify nearly coincident points by snapping to a ``QUANTUM`` grid.

    A new point joins an existing one if any of the 3x3 neighbouring cells
    already holds a representative within ``QUANTUM``.
    """

    def __init__(self, quantum: float = QUANTUM):
        self.quantum = quantum
        self.cells: dict[tuple[int, int], list[int]] = defaultdict(list)
        self.points: list[tuple[float, float]] = []

    def id(self, x: float, y: float) -> int:
        q = self.quantum
        cx, cy = math.floor(x / q), math.floor(y / q)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for pid in self.cells.get((cx + dx, cy + dy), ()):
                    px, py = self.points[pid]
                    if abs(px - x) <= q and abs(py - y) <= q:
                        return pid
        pid = len(self.points)
        self.points.append((x, y))
        self.cells[(cx, cy)].append(pid)
        return pid

    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)


def _index_tiles(tiles: Sequence[PlacedTile]) -> tuple[PointIndex, list[list[int]]]:
    index = PointIndex()
    ids = [[index.id(float(x), float(y)) for x, y in t.vertices] for t in tiles]
    return index, ids


def _pt(p) -> str:
    return f"({float(p[0]):.6f}, {float(p[1]):.6f})"


def _tile_label(t: PlacedTile) -> str:
    return f"tile(copy={t.closure_copy}, wedge={t.wedge_index}, r={t.row}, c={t.col})"


def check_vertex_separation(tiles: Sequence[PlacedTile], radius: float) -> ValidationReport:
    """Distinct vertices must be at least ``MIN_SEPARATION`` apart."""
    report = ValidationReport(None)
    index, _ = _index_tiles(tiles)
    pts = index.array()
    pairs = cKDTree(pts).query_pairs(MIN_SEPARATION) if len(pts) else set()
    detail = ""
    if pairs:
        a, b = sorted(pairs)[0]
        detail = f"vertices {_pt(pts[a])} and {_pt(pts[b])} are {np.hypot(*(pts[a] - pts[b])):.3g} apart"
    report.add("vertex separation", not pairs, detail, vertices=len(pts), close_pairs=len(pairs))
    return report


def check_edge_matching(tiles: Sequence[PlacedTile], radius: float) -> ValidationReport:
    """Every edge with both ends strictly inside the disk is shared by exactly two tiles, oppositely oriented."""
    report = ValidationReport(None, window={"radius": radius})
    index, ids = _index_tiles(tiles)
    pts = index.array()
    inside = np.hypot(pts[:, 0], pts[:, 1]) < radius if len(pts) else np.zeros(0, bool)
    uses: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for ti, vid in enumerate(ids):
        V = len(vid)
        for j in range(V):
            a, b = vid[j], vid[(j + 1) % V]
            if inside[a] and inside[b]:
                key = (a, b) if a < b else (b, a)
                uses[key].append((ti, 1 if a < b else -1))
    unmatched, triple, clash = [], [], []
    for key, u in uses.items():
        if len(u) == 1:
            unmatched.append(key)
        elif len(u) > 2:
            triple.append(key)
        elif u[0][1] == u[1][1]:
            clash.append(key)
    problems = []
    for label, keys in (("unmatched edge", unmatched), ("edge shared by >2 tiles", triple),
                        ("orientation clash", clash)):
        if keys:
            a, b = sorted(keys)[0]
            owners = ", ".join(_tile_label(tiles[ti]) for ti, _ in uses[(a, b)])
            problems.append(f"{label} {_pt(pts[a])}-{_pt(pts[b])} in {owners}")
    report.add("edge matching", not problems, "; ".join(problems),
               interior_edges=len(uses), unmatched=len(unmatched), overshared=len(triple), clashes=len(clash))
    return report


def check_vertex_angles(tiles: Sequence[PlacedTile], radius: float, tol: float = EPS) -> ValidationReport:
    """Interior angles of the tiles around each vertex strictly inside the disk sum to 2*pi."""
    report = ValidationReport(None, window={"radius": radius})
    index, ids = _index_tiles(tiles)
    total: dict[int, float] = defaultdict(float)
    corners: dict[int, int] = defaultdict(int)
    for t, vid in zip(tiles, ids):
        v = np.asarray(t.vertices, dtype=float)
        nxt = np.roll(v, -1, axis=0) - v
        prv = np.roll(v, 1, axis=0) - v
        cross = nxt[:, 0] * prv[:, 1] - nxt[:, 1] * prv[:, 0]
        dot = (nxt * prv).sum(axis=1)
        ang = np.mod(np.arctan2(cross, dot), 2 * math.pi)
        for pid, a in zip(vid, ang):
            total[pid] += float(a)
            corners[pid] += 1
    pts = index.array()
    gaps, excess = [], []
    checked = 0
    for pid, s in total.items():
        if math.hypot(*pts[pid]) >= radius:
            continue
        checked += 1
        if s < 2 * math.pi - tol:
            gaps.append((pid, s))
        elif s > 2 * math.pi + tol:
            excess.append((pid, s))
    problems = []
    for label, found in (("angle deficit (gap)", gaps), ("angle excess (overlap)", excess)):
        if found:
            pid, s = min(found)
            problems.append(f"{label} at {_pt(pts[pid])}: sum {s:.12f} over {corners[pid]} corners")
    report.add("vertex angle sums", not problems, "; ".join(problems),
               interior_vertices=checked, deficits=len(gaps), excesses=len(excess))
    return report


def sample_disk(radius: float, samples: int, seed: int | None = None) -> np.ndarray:
    """Scrambled Sobol points mapped area-uniformly onto the disk."""
    if seed is None:
        seed = int(os.environ.get("KRINKLE_SEED", DEFAULT_SEED))
    sobol = qmc.Sobol(d=2, scramble=True, seed=seed)
    u = sobol.random_base2(max(1, math.ceil(math.log2(max(samples, 2)))))[:samples]
    r = radius * np.sqrt(u[:, 0])
    a = 2.0 * math.pi * u[:, 1]
    return np.column_stack([r * np.cos(a), r * np.sin(a)])


def winding_numbers(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Winding number of a closed polygon around each of ``points``."""
    px, py = points[:, 0], points[:, 1]
    wn = np.zeros(len(points), dtype=np.int64)
    for (x0, y0), (x1, y1) in zip(polygon, np.roll(polygon, -1, axis=0)):
        left = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
        wn += ((y0 <= py) & (y1 > py) & (left > 0)).astype(np.int64)
        wn -= ((y0 > py) & (y1 <= py) & (left < 0)).astype(np.int64)
    return wn


def distance_to_boundary(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    best = np.full(len(points), np.inf)
    for a, b in zip(polygon, np.roll(polygon, -1, axis=0)):
        ab = b - a
        s = np.clip(((points - a) @ ab) / float(ab @ ab), 0.0, 1.0)
        d = np.hypot(*(a + s[:, None] * ab - points).T)
        best = np.minimum(best, d)
    return best


def check_coverage(tiles: Sequence[PlacedTile], radius: float, samples: int = 10_000,
                   seed: int | None = None, eps: float = EPS) -> ValidationReport:
    """Every sample point farther than ``eps`` from all edges lies in exactly one tile."""
    report = ValidationReport(None, window={"radius": radius, "samples": samples})
    pts = sample_disk(radius, samples, seed)
    hits = np.zeros(len(pts), dtype=np.int64)
    near = np.zeros(len(pts), dtype=bool)
    for t in tiles:
        v = np.asarray(t.vertices, dtype=float)
        lo, hi = v.min(axis=0) - eps, v.max(axis=0) + eps
        sel = np.nonzero((pts[:, 0] >= lo[0]) & (pts[:, 0] <= hi[0]) & (pts[:, 1] >= lo[1]) & (pts[:, 1] <= hi[1]))[0]
        if not len(sel):
            continue
        sub = pts[sel]
        near[sel] |= distance_to_boundary(sub, v) <= eps
        hits[sel] += winding_numbers(sub, v) != 0
    live = ~near
    gaps = np.nonzero(live & (hits == 0))[0]
    overlaps = np.nonzero(live & (hits > 1))[0]
    problems = []
    if len(gaps):
        problems.append(f"uncovered sample at {_pt(pts[gaps[0]])}")
    if len(overlaps):
        problems.append(f"sample at {_pt(pts[overlaps[0]])} covered {hits[overlaps[0]]} times")
    report.add("point coverage", not problems, "; ".join(problems),
               samples=len(pts), skipped_near_edge=int(near.sum()), gaps=len(gaps), overlaps=len(overlaps))
    return report


def check_geometry(tiles: Sequence[PlacedTile], radius: float, samples: int = 10_000,
                   seed: int | None = None) -> ValidationReport:
    report = ValidationReport(None, window={"radius": radius, "samples": samples})
    return report.merge(
        check_vertex_separation(tiles, radius),
        check_edge_matching(tiles, radius),
        check_vertex_angles(tiles, radius),
        check_coverage(tiles, radius, samples, seed),
    )


def check_encoding_consistency(params: Params, tiles: Iterable[PlacedTile], tol: float = EPS) -> ValidationReport:
    """Stored vertices agree with the rotated, translated prototile."""
    report = ValidationReport(params)
    worst, count, bad = 0.0, 0, None
    for t in tiles:
        expected = PlacedTile.place(params, t.motion.rotation_index, t.row, t.col, t.motion).vertices
        stored = np.asarray(t.vertices, dtype=float)
        err = float(np.abs(expected - stored).max()) if expected.shape == stored.shape else math.inf
        count += 1
        if err > worst:
            worst = err
            if err > tol and bad is None:
                bad = _tile_label(t)
    report.add("vertices match motions", worst <= tol, f"first mismatch {bad}" if bad else "",
               tiles=count, max_error=float(f"{worst:.3g}"))
    return report


def validate(params: Params, radius: float = 6.0, samples: int = 10_000, horizon: int | None = None,
             rows: int | None = None, seed: int | None = None) -> ValidationReport:
    """Full suite for freshly constructed parameters."""
    rows = rows_for_radius(params, radius) if rows is None else rows
    tiling = build_tiling(params, max(rows, 3))
    tiles = tiles_in_window(tiling, radius, rows)
    report = ValidationReport(params, window={"radius": radius, "rows": rows, "samples": samples,
                                              "tiles": len(tiles)})
    report.merge(
        check_sequence_identities(params, horizon, tiling.fronts, tiling.base),
        check_prototile(params),
        check_lattice_alignment(tiling),
        check_geometry(tiles, radius, samples, seed),
    )
    return report
