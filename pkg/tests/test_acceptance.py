"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line, printed again in the terminal
summary under "acceptance criteria".  Runtime budgets are measured from a
cold cache.
"""

import json
import math
import subprocess
import sys
import warnings
import xml.etree.ElementTree as ET
from collections import defaultdict
from pathlib import Path

import numpy as np

from oracles import condition_c_oracle, level_oracle, parameter_grid

from krinkle.assembly import CoverageWarning, _rotated_vertices, build_tiling
from krinkle.cli import main
from krinkle.geometry import unit_vector
from krinkle.prototile import build_prototile, collinear_vertices, simplicity_violation
from krinkle.sequences import Params, lower_boundary, shifted_period
from krinkle.validator import check_lattice_alignment, check_prototile, check_sequence_identities, validate

GRID = [Params.from_mkt(*g) for g in parameter_grid()]
FIXTURES = [(3, 7, 14), (3, 7, 22), (2, 5, 10), (1, 4, 14), (3, 8, 24), (2, 9, 32), (7, 17, 34), (5, 16, 54)]
GOLDEN = Path(__file__).parent / "golden"
SVG = "{http://www.w3.org/2000/svg}"


def cold():
    build_prototile.cache_clear()
    _rotated_vertices.cache_clear()


def test_grid_size():
    assert len(GRID) == 270
    assert len({(p.m, p.k, p.n, p.offset) for p in GRID}) == 270


def test_criterion_1_sequence_identities(criterion):
    cold()
    with criterion(1, f"sequence identities on {len(GRID)} parameter sets, horizon 10k", budget=5.0) as c:
        for p in GRID:
            m, k, n, w = p.m, p.k, p.n, p.w
            H = 10 * k
            tiling = build_tiling(p, 1)
            for i in range(w + 1):
                c.check(condition_c_oracle(shifted_period(m, k, i).take(H), i, m, k), f"{p}: C({i}) for s^{i}")
                c.check(condition_c_oracle(lower_boundary(m, k, i).take(H), i, m, k), f"{p}: C({i}) for l^{i}")
            for i, front in enumerate(tiling.fronts):
                c.check(front.take(H) == level_oracle(m, k, i + 1, H), f"{p}: front {i} != s^{i + 1}")
            last, b = tiling.fronts[-1].take(H), tiling.base.take(H + 1)
            if p.offset:
                c.check(last == [b[j + 1] + n // 2 for j in range(H)], f"{p}: offset closure")
            else:
                c.check(last == [b[j] + k for j in range(H)], f"{p}: rotational closure")
            rep = check_sequence_identities(p, H, tiling.fronts, tiling.base)
            c.check(rep.passed, f"{p}: validator {[f.name for f in rep.failures()]}")
        c.note("C(i), fronts = s^{i+1} and closure identities hold exactly")


def test_criterion_2_lattice_alignment(criterion):
    cold()
    with criterion(2, f"lattice alignment on {len(GRID)} parameter sets over >= 3k edges", budget=5.0) as c:
        for p in GRID:
            m, k = p.m, p.k
            rep = check_lattice_alignment(build_tiling(p, 3))
            c.check(rep.passed, f"{p}: {[f.detail for f in rep.failures()]}")
            c.check(rep["wedge lower boundary follows previous front"].counts["edges"] >= 3 * k, f"{p}: span")
            inv = pow(m, -1, k)
            for i in range(1, p.w + 1):
                scan = level_oracle(m, k, i, k).index(i)
                c.check(i * inv % k == scan, f"{p}: j* for i={i}")
        c.note("coeff-space equality with the previous front from j*; j* formula = scan")


def test_criterion_3_prototile_geometry(criterion):
    cold()
    with criterion(3, f"prototile geometry on {len(GRID)} parameter sets, tol 1e-9", budget=5.0) as c:
        straight = 0
        for p in GRID:
            tile = build_prototile(p)
            verts = tile.vertices()
            c.check(tile.lower_vertices[-1] == tile.upper_vertices[-1], f"{p}: endpoints differ")
            c.check(simplicity_violation(verts, 1e-9) is None, f"{p}: not simple")
            # interior steps of the lower path have positive component along the tile axis
            axis = (math.cos(math.pi * p.k / p.n), math.sin(math.pi * p.k / p.n))
            dots = [unit_vector(d, p.n)[0] * axis[0] + unit_vector(d, p.n)[1] * axis[1] for d in tile.lower_dirs[1:-1]]
            c.check(min(dots, default=1.0) > 1e-9, f"{p}: interior inner products")
            coll = collinear_vertices(verts, 1e-9)
            c.check(len(coll) == (2 if p.n == 2 * p.k else 0), f"{p}: {len(coll)} straight vertices")
            straight += p.n == 2 * p.k
            c.check(check_prototile(p).passed, f"{p}: validator")
        c.check(straight > 0, "grid contains no n = 2k case")
        c.note(f"{straight} sets with n = 2k show exactly two straight vertices")


def test_criterion_4_windowed_validity(criterion):
    cold()
    with criterion(4, "8 fixtures at radius 6, 1e4 samples: edges, angle sums, coverage", budget=30.0) as c:
        summary = []
        for triple in FIXTURES:
            p = Params.from_triple(*triple)
            with warnings.catch_warnings():
                warnings.simplefilter("error", CoverageWarning)
                rep = validate(p, radius=6.0, samples=10_000)
            c.check(rep.passed, f"{p}: {[f.name + ' ' + f.detail for f in rep.failures()]}")
            edges = rep["edge matching"].counts["interior_edges"]
            verts = rep["vertex angle sums"].counts["interior_vertices"]
            c.check(edges > 0 and verts > 0, f"{p}: empty window")
            c.check(rep.tolerance <= 1e-9, f"{p}: tolerance")
            summary.append(f"{p} {edges}e/{verts}v")
        c.note(", ".join(summary))


def _export(tmp_path, capsys, triple):
    m, k, n = triple
    path = tmp_path / f"{m}_{k}_{n}.json"
    assert main(["generate", "--m", str(m), "--k", str(k), "--n", str(n), "--rows", "4",
                 "--format", "json", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


def _verify(path, capsys):
    code = main(["verify", "--in", str(path), "--samples", "10000"])
    return code, capsys.readouterr().out


def test_criterion_5_negative_controls(criterion, tmp_path, capsys):
    with criterion(5, "corrupted front, deleted tile, duplicated tile fail with nonzero exit") as c:
        for triple in [(3, 7, 14), (3, 7, 22)]:
            path = _export(tmp_path, capsys, triple)
            code, out = _verify(path, capsys)
            c.check(code == 0, f"{triple}: clean export fails verification")
            clean = json.loads(path.read_text())
            centre = int(np.argmin([np.hypot(*np.mean(t["vertices"], axis=0)) for t in clean["tiles"]]))

            doc = json.loads(json.dumps(clean))
            doc["sequences"]["fronts"][1]["period"][0] += 1
            path.write_text(json.dumps(doc))
            code, out = _verify(path, capsys)
            c.check(code != 0 and "[FAIL] front i" in out, f"{triple}: corrupted front not caught")

            doc = json.loads(json.dumps(clean))
            del doc["tiles"][centre]
            path.write_text(json.dumps(doc))
            code, out = _verify(path, capsys)
            c.check(code != 0 and "[FAIL] point coverage" in out, f"{triple}: deleted tile not caught")

            doc = json.loads(json.dumps(clean))
            doc["tiles"].append(doc["tiles"][centre])
            path.write_text(json.dumps(doc))
            code, out = _verify(path, capsys)
            c.check(code != 0 and "[FAIL] edge matching" in out, f"{triple}: duplicated tile not caught")
        c.note("all three corruptions exit nonzero on both triples")


def _generate_svg(triple, capsys):
    m, k, n = triple
    assert main(["generate", "--m", str(m), "--k", str(k), "--n", str(n), "--rows", "8", "--out", "-"]) == 0
    return capsys.readouterr().out


def test_criterion_6_figure_reproduction(criterion, capsys):
    with criterion(6, "SVG tile and wedge counts, per-wedge translation congruence, golden bytes") as c:
        rows = 8
        for triple in [(3, 7, 14), (3, 7, 22)]:
            p = Params.from_triple(*triple)
            text = _generate_svg(triple, capsys)
            root = ET.fromstring(text)
            polys = root.findall(f".//{SVG}polygon")
            per_wedge = rows * (rows + 1) // 2
            c.check(len(polys) == p.n * per_wedge, f"{p}: {len(polys)} tiles, expected {p.n * per_wedge}")
            wedges = defaultdict(list)
            for poly in polys:
                pts = np.array([[float(v) for v in xy.split(",")] for xy in poly.get("points").split()])
                wedges[(poly.get("data-closure"), poly.get("data-wedge"))].append(pts)
                c.check(poly.get("data-rotation") == poly.get("data-wedge"), f"{p}: rotation tag")
            c.check(len(wedges) == p.n, f"{p}: {len(wedges)} wedges, expected {p.n}")
            c.check(len({w for _, w in wedges}) == p.n, f"{p}: wedge indices not distinct")
            copies = len({cl for cl, _ in wedges})
            c.check(copies * p.w == p.n, f"{p}: {copies} closure copies x w={p.w} != n")
            for key, shapes in wedges.items():
                c.check(len(shapes) == per_wedge, f"{p}: wedge {key} has {len(shapes)} tiles")
                ref = shapes[0] - shapes[0][0]
                for s in shapes[1:]:
                    # SVG coordinates are rounded to 1e-3 of a scaled unit
                    c.check(np.abs((s - s[0]) - ref).max() < 0.01, f"{p}: wedge {key} not translation-congruent")
            golden = (GOLDEN / f"{p.m}_{p.k}_{p.n}.svg").read_text()
            c.check(text == golden, f"{p}: differs from golden snapshot")
            c.check(_generate_svg(triple, capsys) == text, f"{p}: second run differs")
        c.note("504 and 792 tiles, n wedges each, golden snapshots byte-identical")


def test_criterion_7_json_determinism(criterion, tmp_path):
    with criterion(7, "generate --format json is byte-identical across two runs, all fixtures") as c:
        for m, k, n in FIXTURES:
            outs = []
            for run in range(2):
                path = tmp_path / f"{m}_{k}_{n}_{run}.json"
                proc = subprocess.run([sys.executable, "-m", "krinkle", "generate", "--m", str(m), "--k", str(k),
                                       "--n", str(n), "--format", "json", "--out", str(path)],
                                      capture_output=True, text=True)
                c.check(proc.returncode == 0, f"({m}, {k}, {n}): exit {proc.returncode} {proc.stderr.strip()}")
                outs.append(path.read_bytes() if path.exists() else b"")
            c.check(outs[0] == outs[1] and outs[0], f"({m}, {k}, {n}): runs differ")
        c.note("8 fixtures, separate processes")
