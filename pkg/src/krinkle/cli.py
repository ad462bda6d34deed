"""``krinkle`` command line: generate, verify, seq, prototile.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .assembly import CoverageWarning, build_tiling, tiles_in_window
from .export import RenderStyle, export_json, export_prototile_svg, export_svg, load_json
from .prototile import build_prototile
from .sequences import (
    ParameterError,
    Params,
    alignment_index,
    lower_sequence,
    modular_progression,
    shifted_progression,
    upper_sequence,
)
from .validator import (
    ValidationReport,
    check_encoding_consistency,
    check_geometry,
    check_prototile,
    check_sequence_identities,
    validate,
)


def _add_params(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("tiling parameters")
    g.add_argument("--m", type=int, required=required, help="progression step, coprime to k")
    g.add_argument("--k", type=int, required=required, help="modulus, k > m")
    g.add_argument("--n", type=int, help="number of directions; t and offset are inferred")
    g.add_argument("--t", type=int, help="multiplier t >= 2 (use with --offset/--no-offset)")
    g.add_argument("--offset", action=argparse.BooleanOptionalAction, default=None,
                   help="n = 2(tk - m) instead of n = tk; with --n, forces that reading")


def resolve_params(args: argparse.Namespace) -> Params:
    if args.m is None or args.k is None:
        raise ParameterError("--m and --k are required")
    if args.n is None and args.t is None:
        raise ParameterError("n-resolution failed: give either --n or --t")
    if args.n is not None:
        params = Params.from_triple(args.m, args.k, args.n, args.offset)
        if args.t is not None and args.t != params.t:
            raise ParameterError(f"n-resolution failed: --t {args.t} disagrees with n={args.n} (t={params.t})")
        return params
    return Params.from_mkt(args.m, args.k, args.t, bool(args.offset))


def _style(args: argparse.Namespace) -> RenderStyle:
    return RenderStyle(color=args.color, stroke_width=args.stroke_width, scale=args.scale,
                       background=args.background, label_edges=args.label_edges)


def _add_style(p: argparse.ArgumentParser, labels: bool = False) -> None:
    g = p.add_argument_group("style")
    g.add_argument("--color", choices=["wedge", "uniform", "closure"], default="wedge")
    g.add_argument("--stroke-width", type=float, default=1.0)
    g.add_argument("--scale", type=float, default=20.0, help="pixels per edge length")
    g.add_argument("--background", default="#ffffff")
    g.add_argument("--label-edges", action=argparse.BooleanOptionalAction, default=labels)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _stem(out: str | None, params: Params) -> str:
    if out is None:
        return f"krinkle_{params.m}_{params.k}_{params.n}"
    p = Path(out)
    return str(p.with_suffix("")) if p.suffix in (".svg", ".json") else out


def cmd_generate(args: argparse.Namespace) -> int:
    params = resolve_params(args)
    style = _style(args)
    tiling = build_tiling(params, args.rows)
    tiles = tiles_in_window(tiling, args.radius or None)
    if args.format == "both":
        stem = _stem(args.out, params)
        Path(stem + ".svg").write_text(export_svg(tiling, tiles, style, args.radius or None))
        Path(stem + ".json").write_text(export_json(tiling, tiles, args.radius or None))
        print(f"wrote {stem}.svg and {stem}.json ({len(tiles)} tiles)", file=sys.stderr)
    elif args.format == "svg":
        _write(args.out, export_svg(tiling, tiles, style, args.radius or None))
    else:
        _write(args.out, export_json(tiling, tiles, args.radius or None))
    return 0


def _verify_file(args: argparse.Namespace) -> ValidationReport:
    data = load_json(Path(args.input).read_text())
    params = data.params
    radius = args.radius
    if radius is None:
        # rows beyond the budget can touch the covered disk's boundary
        radius = data.radius or build_tiling(params, max(data.rows, 1)).covered_radius() - 1e-6
    horizon = args.horizon or 10 * params.k
    report = ValidationReport(params, window={"radius": radius, "rows": data.rows, "samples": args.samples,
                                              "tiles": len(data.tiles), "source": str(args.input)})
    if data.fronts is not None and data.base is not None:
        report.merge(check_sequence_identities(params, horizon, data.fronts, data.base))
    else:
        report.add("stored sequences present", False, "document has no sequences section")
    report.merge(
        check_prototile(params),
        check_encoding_consistency(params, data.tiles),
        check_geometry(data.tiles, radius, args.samples, args.seed),
    )
    return report


def cmd_verify(args: argparse.Namespace) -> int:
    if args.input:
        report = _verify_file(args)
    else:
        params = resolve_params(args)
        with warnings.catch_warnings():
            warnings.simplefilter("error", CoverageWarning)
            report = validate(params, args.radius if args.radius is not None else 6.0, args.samples,
                              args.horizon, args.rows, args.seed)
    text = report.to_text()
    sys.stdout.write(text)
    if args.report:
        stem = args.report.rsplit(".", 1)[0] if args.report.endswith((".txt", ".json")) else args.report
        Path(stem + ".txt").write_text(text)
        Path(stem + ".json").write_text(report.to_json())
    return 0 if report.passed else 1


def cmd_seq(args: argparse.Namespace) -> int:
    params = resolve_params(args)
    m, k = params.m, params.k
    count = args.count or 2 * k
    out = [f"params m={m} k={k} t={params.t} n={params.n} offset={str(params.offset).lower()} w={params.w}"]
    if args.kind in ("all", "progression"):
        out.append(f"progression: {modular_progression(m, k, count)}")
    if args.kind in ("all", "lower"):
        out.append(f"lower: {lower_sequence(m, k)}")
    if args.kind in ("all", "upper"):
        out.append(f"upper: {upper_sequence(m, k)}")
    if args.kind == "shifted":
        out.append(f"shifted[{args.level}]: {shifted_progression(m, k, args.level, count)}")
    if args.kind in ("all", "fronts"):
        tiling = build_tiling(params, 1)
        out.append(f"base: {tiling.base.take(count)}")
        for i, f in enumerate(tiling.fronts):
            j = alignment_index(i, m, k)
            out.append(f"front[{i}] (wedge {i} at j*={j}): {f.take(count)}")
    print("\n".join(out))
    return 0


def cmd_prototile(args: argparse.Namespace) -> int:
    params = resolve_params(args)
    _write(args.out, export_prototile_svg(build_prototile(params), _style(args)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="krinkle", description="Modulo Krinkle tilings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a tiling and write SVG and/or JSON")
    _add_params(p)
    p.add_argument("--rows", type=int, default=8, help="row budget per wedge")
    p.add_argument("--radius", type=float, default=0.0, help="window radius; 0 keeps every tile in the budget")
    p.add_argument("--out", help="output path ('-' for stdout); a stem when --format both")
    p.add_argument("--format", choices=["svg", "json", "both"], default="svg")
    _add_style(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="run the validation suite")
    _add_params(p, required=False)
    p.add_argument("--in", dest="input", help="verify an exported tiling JSON instead")
    p.add_argument("--radius", type=float, default=None, help="window radius (default 6, or the file's window)")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--horizon", type=int, default=None, help="sequence horizon (default 10k)")
    p.add_argument("--rows", type=int, default=None, help="row budget (default: enough for the radius)")
    p.add_argument("--seed", type=int, default=None, help="coverage sampler seed (or KRINKLE_SEED)")
    p.add_argument("--report", help="write STEM.txt and STEM.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("seq", help="print direction sequences")
    _add_params(p)
    p.add_argument("--kind", choices=["all", "progression", "lower", "upper", "shifted", "fronts"], default="all")
    p.add_argument("--level", type=int, default=0, help="level for --kind shifted")
    p.add_argument("--count", type=int, default=None, help="terms to print (default 2k)")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("prototile", help="render the prototile as SVG")
    _add_params(p)
    p.add_argument("--out", help="output path (default stdout)")
    _add_style(p, labels=True)
    p.set_defaults(func=cmd_prototile)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CoverageWarning as exc:
        print(f"krinkle: error: {exc}; raise --rows", file=sys.stderr)
        return 2
    except (ParameterError, ValueError, OSError) as exc:
        print(f"krinkle: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
