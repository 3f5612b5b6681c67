#!/usr/bin/env python3
"""Time the full preprocess on a synthetic 2048x1024 RGB image.

Reports per-variant wall times across depths, best of N runs, after a
warm-up pass that settles JIT compilation and buffer recycling.

    python scripts/benchmark_throughput.py [--depths 0 1 5 10] [--runs 5]
"""

import argparse
import time

import numpy as np

from retina_prep import (
    ImagePlanar,
    PreprocessConfig,
    ReparamVariant,
    ValueDomain,
    VariantKind,
    preprocess,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--width", type=int, default=2048)
    parser.add_argument("--height", type=int, default=1024)
    parser.add_argument("--depths", type=int, nargs="+", default=[0, 1, 5, 10])
    parser.add_argument("--runs", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    img = ImagePlanar(
        rng.random((3, args.height, args.width)), ValueDomain.UNIT_INTERVAL
    )
    pixels = args.width * args.height

    print(f"image {args.width}x{args.height}x3, best of {args.runs} runs")
    for kind in VariantKind:
        for depth in args.depths:
            cfg = PreprocessConfig(ReparamVariant(kind), depth=depth)
            preprocess(img, cfg)  # warm-up
            best = min(_timed(img, cfg) for _ in range(args.runs))
            rate = pixels / best / 1e6
            print(f"{kind.value:>22s}  d={depth:<2d}  {best * 1e3:7.1f} ms  {rate:8.1f} Mpx/s")


def _timed(img, cfg) -> float:
    started = time.perf_counter()
    preprocess(img, cfg)
    return time.perf_counter() - started


if __name__ == "__main__":
    main()
