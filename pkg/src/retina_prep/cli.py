"""Command line interface.

    retina-prep process  --variant NAME --input DIR|MANIFEST --out DIR ...
    retina-prep kernel   --variant NAME --depth D
    retina-prep eval     --pred DIR --gt DIR --classes K [--ignore 255]

Exit codes: 0 on success, 1 when any batch entry or evaluation pair
failed, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, RetinaPrepError
from .metrics import ConfusionMatrix, LabelMap, accumulate, finalize
from .pipeline import (
    DEFAULT_DEPTH,
    DatasetManifest,
    OutputFormat,
    PreprocessConfig,
    process_dataset,
)
from .blur import BorderPolicy
from .contrast import build_fused_kernel
from .png import decode_png
from .reparam import VARIANT_NAMES, ReparamVariant, matrix_for

_VIS_HELP = (
    "png-vis renders signed contrast v as an 8-bit value round((v*-0.5+0.5)*255): "
    "v=0 maps to 128, v=-1 to 255, v=+1 to 0."
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retina-prep",
        description=(
            "Contrast-enhancing image preprocessing (color reparameterization + "
            "progressive box-blur difference-of-Gaussians) and segmentation scoring."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "process",
        help="preprocess a directory or manifest of images",
        epilog=_VIS_HELP,
    )
    p.add_argument("--variant", choices=VARIANT_NAMES, help="color reparameterization")
    p.add_argument("--depth", type=int, help=f"number of progressive blurs (default {DEFAULT_DEPTH})")
    p.add_argument("--border", choices=["replicate", "zero"], help="out-of-frame sample policy")
    p.add_argument("--output", choices=["raw", "pfm", "png-vis", "all"], help="artifact format(s)")
    p.add_argument("--channels", type=int, choices=[1, 3],
                   help="output channels for grayscale variants (default 3)")
    p.add_argument("--expand", action="store_true", default=None,
                   help="duplicate a 1-channel result into 3 identical channels")
    p.add_argument("--config", type=Path, help="key=value config file; flags override it")
    p.add_argument("--input", type=Path, required=True, help="input directory or manifest file")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")

    k = sub.add_parser("kernel", help="print the fused pointwise kernel as a text matrix")
    k.add_argument("--variant", choices=VARIANT_NAMES, required=True)
    k.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    k.add_argument("--channels", type=int, choices=[1, 3], default=3)

    e = sub.add_parser("eval", help="score predicted label maps against ground truth")
    e.add_argument("--pred", type=Path, required=True, help="directory of predicted label PNGs")
    e.add_argument("--gt", type=Path, required=True, help="directory of ground-truth label PNGs")
    e.add_argument("--classes", type=int, required=True, help="number of classes K")
    e.add_argument("--ignore", type=int, default=255, help="ignored ground-truth id (default 255)")
    return parser


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> PreprocessConfig:
    if args.config is not None:
        try:
            cfg = PreprocessConfig.parse(args.config.read_text())
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
    else:
        if args.variant is None:
            parser.error("--variant is required when no --config file is given")
        cfg = PreprocessConfig(ReparamVariant.from_name(args.variant))
    variant = cfg.variant
    if args.variant is not None or args.channels is not None:
        variant = ReparamVariant.from_name(
            args.variant or cfg.variant.kind.value,
            args.channels or cfg.variant.grayscale_channels,
        )
    return PreprocessConfig(
        variant=variant,
        depth=cfg.depth if args.depth is None else args.depth,
        border=cfg.border if args.border is None else BorderPolicy.from_name(args.border),
        output=cfg.output if args.output is None else OutputFormat.from_name(args.output),
        expand_to_three=cfg.expand_to_three if args.expand is None else args.expand,
    )


def _cmd_process(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        cfg = _merge_config(args, parser)
    except (ConfigError, ValueError) as exc:
        parser.error(str(exc))
    if not args.input.exists():
        parser.error(f"input path does not exist: {args.input}")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        if args.input.is_dir():
            manifest = DatasetManifest.from_directory(args.input)
        else:
            manifest = DatasetManifest.from_file(args.input)
    except ConfigError as exc:
        parser.error(str(exc))
    report = process_dataset(manifest, cfg, args.out, parallelism=args.jobs)
    for stem, reason in report.failures:
        print(f"FAILED {stem}: {reason}", file=sys.stderr)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_kernel(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.depth < 0:
        parser.error("--depth must be >= 0")
    variant = ReparamVariant.from_name(args.variant, args.channels)
    kernel = build_fused_kernel(matrix_for(variant), args.depth)
    print(f"# variant={variant.kind.value} depth={args.depth} "
          f"rows={kernel.out_channels} cols={kernel.weights.shape[1]}")
    for row in kernel.weights:
        print(" ".join(f"{w:.17g}" for w in row))
    return 0


def _load_label_png(path: Path) -> np.ndarray:
    samples = decode_png(path.read_bytes())
    if samples.dtype != np.uint8 or samples.shape[2] != 1:
        raise RetinaPrepError(
            f"{path}: label maps must be 8-bit single-channel PNGs, "
            f"got {samples.dtype} with {samples.shape[2]} channel(s)"
        )
    return samples[:, :, 0]


def _cmd_eval(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.classes < 1:
        parser.error("--classes must be >= 1")
    for name, d in (("--pred", args.pred), ("--gt", args.gt)):
        if not d.is_dir():
            parser.error(f"{name} is not a directory: {d}")
    gt_files = sorted(p for p in args.gt.rglob("*.png") if p.is_file())
    if not gt_files:
        print(f"no ground-truth PNGs under {args.gt}", file=sys.stderr)
        return 1
    cm = ConfusionMatrix(args.classes)
    failures = 0
    for gt_path in gt_files:
        rel = gt_path.relative_to(args.gt)
        pred_path = args.pred / rel
        try:
            if not pred_path.is_file():
                raise RetinaPrepError(f"missing prediction for {rel}")
            gt = LabelMap(_load_label_png(gt_path), ignore_id=args.ignore)
            pred = LabelMap(_load_label_png(pred_path), ignore_id=args.ignore)
            accumulate(cm, pred, gt)
        except RetinaPrepError as exc:
            failures += 1
            print(f"FAILED {rel}: {exc}", file=sys.stderr)
    if cm.total == 0:
        print("no evaluable pixels", file=sys.stderr)
        return 1
    print(finalize(cm).to_text(), end="")
    return 0 if failures == 0 else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "process":
        return _cmd_process(args, parser)
    if args.command == "kernel":
        return _cmd_kernel(args, parser)
    return _cmd_eval(args, parser)


if __name__ == "__main__":
    sys.exit(main())
