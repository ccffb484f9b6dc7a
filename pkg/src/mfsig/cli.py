"""Command-line interface for mfsig.

Numbers are printed with Python's ``repr`` for floats: the shortest decimal
string that reads back to the identical double.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from .blanket import DEFAULT_DELTA_MAX, AreaVariant, area_curve
from .classifier import (
    ModelConfig,
    class_stats_table,
    classify_tile,
    evaluate,
    load_model,
    save_model,
    train_model,
)
from .errors import EmptyClass, MFSError, TileSizeMismatch
from .gray_image import TileSpec, extract_tiles, load_image, save_image, tile_offsets
from .signature import fd_curve
from .synth import FbmSpec, checkerboard, constant_image, fbm_surface, noisy_constant

log = logging.getLogger("mfsig")

NUMBER_NOTE = (
    "Floats are written in full precision (shortest round-tripping decimal)."
)


def fmt(x: float) -> str:
    return repr(float(x))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def load_corpus(root: str | Path) -> list[tuple[str, list]]:
    """Read a class-per-directory corpus of PGM tiles.

    Class labels are subdirectory names; classes and files are taken in
    sorted order.
    """
    root = Path(root)
    if not root.is_dir():
        raise MFSError(f"corpus directory not found: {root}")
    classes = []
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        files = sorted(p for p in sub.iterdir() if p.is_file() and p.suffix.lower() == ".pgm")
        if not files:
            raise EmptyClass(f"class directory {sub.name!r} contains no .pgm tiles")
        classes.append((sub.name, [load_image(f) for f in files]))
    if not classes:
        raise MFSError(f"corpus {root} has no class subdirectories")
    sizes = {(t.width, t.height) for _, tiles in classes for t in tiles}
    if len(sizes) > 1:
        raise TileSizeMismatch(f"corpus {root} mixes tile sizes {sorted(sizes)}")
    return classes


def cmd_signature(args) -> int:
    if args.delta_max < 2:
        raise MFSError(f"--delta-max must be >= 2 for a signature, got {args.delta_max}")
    img = load_image(args.image)
    area = area_curve(img, args.delta_max, args.variant)
    fd = fd_curve(area)
    rows = [("delta", "area", "fd"), (1, fmt(area.values[0]), "")]
    rows += [(d, fmt(a), fmt(f)) for d, a, f in zip(fd.deltas, area.values[1:], fd.values)]
    _emit(_csv(rows), args.out)
    return 0


def cmd_train(args) -> int:
    config = ModelConfig(args.delta_max, args.variant, args.tile_size)
    model = train_model(load_corpus(args.corpus), config)
    save_model(model, args.out)
    rows = [("label", "mean_of_means", "mean_of_stds")]
    rows += [(lbl, fmt(m), fmt(s)) for lbl, m, s in class_stats_table(model)]
    sys.stdout.write(_csv(rows))
    return 0


def cmd_classify(args) -> int:
    model = load_model(args.model)
    lines = []
    if args.format == "csv":
        lines.append(("tile", "predicted", "tie", "rank", "label", "distance"))
    for path in args.tiles:
        res = classify_tile(load_image(path), model)
        ranked = res.ranked()
        if args.format == "csv":
            for k, (lbl, d) in enumerate(ranked, 1):
                lines.append((path, res.predicted, int(res.tie), k, lbl, fmt(d)))
        else:
            tie = " (tie)" if res.tie else ""
            lines.append(f"{path}: {res.predicted}{tie}")
            lines.extend(f"  {lbl}\t{fmt(d)}" for lbl, d in ranked)
    text = _csv(lines) if args.format == "csv" else "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    cm, accuracy = evaluate(model, load_corpus(args.corpus))
    width = max(len(s) for s in cm.rows + cm.cols + ["train\\test"]) + 2
    out = ["train\\test".ljust(width) + "".join(c.rjust(24) for c in cm.cols)]
    for r, row in zip(cm.rows, cm.cells):
        out.append(r.ljust(width) + "".join(fmt(v).rjust(24) for v in row))
    out.append("")
    out.extend(f"{c} -> {cm.assignments[c]}" for c in cm.cols)
    out.append(f"accuracy {fmt(accuracy)}")
    sys.stdout.write("\n".join(out) + "\n")
    if args.csv:
        rows = [["train\\test", *cm.cols]]
        rows += [[r, *(fmt(v) for v in row)] for r, row in zip(cm.rows, cm.cells)]
        Path(args.csv).write_text(_csv(rows), encoding="utf-8")
    return 0


def cmd_synth(args) -> int:
    kind = args.kind
    if kind == "constant":
        img = constant_image(args.width, args.height, args.level)
    elif kind == "checkerboard":
        img = checkerboard(args.width, args.height, args.period, args.lo, args.hi)
    elif kind == "noisy":
        img = noisy_constant(args.width, args.height, args.level, args.amplitude, args.seed)
    else:
        img = fbm_surface(FbmSpec(args.size, args.hurst, args.seed))
    save_image(img, args.out, binary=not args.ascii)
    return 0


def cmd_tiles(args) -> int:
    img = load_image(args.image)
    spec = TileSpec(args.tile_size, args.stride)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for (x, y), tile in zip(tile_offsets(img.width, img.height, spec), extract_tiles(img, spec)):
        name = outdir / f"tile_y{y:05d}_x{x:05d}.pgm"
        save_image(tile, name)
        print(name)
    return 0


def _add_curve_opts(p, delta_max_default=DEFAULT_DELTA_MAX):
    p.add_argument("--delta-max", type=int, default=delta_max_default,
                   help="number of blanket iterations (default %(default)s)")
    p.add_argument("--variant", type=AreaVariant.parse, default=AreaVariant.DIFFERENCE,
                   choices=list(AreaVariant), metavar="{quotient,difference}",
                   help="fractal area formula (default difference)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfsig",
        description="Blanket-method fractal signatures and minimum-distance texture classification.",
        epilog=NUMBER_NOTE,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("signature", help="area and signature curves of one image as CSV",
                       epilog="Columns: delta,area,fd (fd empty at delta=1). " + NUMBER_NOTE)
    p.add_argument("image")
    _add_curve_opts(p)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("train", help="train a model from a class-per-directory corpus",
                       epilog="Prints label,mean_of_means,mean_of_stds per class. " + NUMBER_NOTE)
    p.add_argument("corpus")
    _add_curve_opts(p)
    p.add_argument("--tile-size", type=int, default=128)
    p.add_argument("--out", required=True, help="model JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify tiles against a model", epilog=NUMBER_NOTE)
    p.add_argument("model")
    p.add_argument("tiles", nargs="+")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="confusion matrix on a labelled corpus", epilog=NUMBER_NOTE)
    p.add_argument("model")
    p.add_argument("corpus")
    p.add_argument("--csv", help="also write the matrix as CSV")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="write a synthetic texture as PGM")
    p.add_argument("kind", choices=("constant", "checkerboard", "noisy", "fbm"))
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--height", type=int, default=128)
    p.add_argument("--size", type=int, default=257, help="fbm side, 2**k + 1")
    p.add_argument("--level", type=int, default=128)
    p.add_argument("--amplitude", type=int, default=2)
    p.add_argument("--period", type=int, default=4)
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, default=255)
    p.add_argument("--hurst", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("tiles", help="cut an image into square PGM tiles")
    p.add_argument("image")
    p.add_argument("--tile-size", type=int, default=128)
    p.add_argument("--stride", type=int, default=None, help="default: tile size")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_tiles)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (MFSError, OSError) as exc:
        print(f"mfsig {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
