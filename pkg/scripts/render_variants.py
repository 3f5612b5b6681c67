#!/usr/bin/env python3
"""Render every preprocessing variant of one image side by side.

Given an input image (PNG/PPM/PFM), writes one visualization PNG per
variant at the chosen depth into the output directory. Without an input,
a synthetic scene of gradient bars and disks is generated, which makes
the center-surround response easy to inspect by eye.

    python scripts/render_variants.py --out /tmp/variants [--image photo.png] [--depth 5]
"""

import argparse
from pathlib import Path

import numpy as np

from retina_prep import (
    ImagePlanar,
    PreprocessConfig,
    ReparamVariant,
    ValueDomain,
    VariantKind,
    decode_image,
    encode_visualization,
    preprocess,
)
from retina_prep.png import encode_png


def synthetic_scene(height=256, width=384) -> ImagePlanar:
    yy, xx = np.mgrid[0:height, 0:width]
    r = 0.5 + 0.5 * np.sin(xx / 17.0)
    g = (xx // 32 % 2) * 0.8 + 0.1
    b = np.clip(1.2 - np.hypot(yy - height / 2, xx - width / 2) / 120.0, 0, 1)
    planes = np.stack([r, g, b]) * (0.4 + 0.6 * (yy / height))[None]
    return ImagePlanar(np.clip(planes, 0, 1), ValueDomain.UNIT_INTERVAL)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--image", type=Path, help="input image; synthetic scene if omitted")
    parser.add_argument("--depth", type=int, default=5)
    parser.add_argument("--out", type=Path, required=True)
    args = parser.parse_args()

    if args.image is not None:
        img = decode_image(args.image.read_bytes())
    else:
        img = synthetic_scene()
    args.out.mkdir(parents=True, exist_ok=True)

    for kind in VariantKind:
        cfg = PreprocessConfig(ReparamVariant(kind), depth=args.depth)
        result = preprocess(img, cfg)
        target = args.out / f"{kind.value}-d{args.depth}.vis.png"
        if result.value_domain is ValueDomain.SIGNED:
            target.write_bytes(encode_visualization(result))
        else:
            # depth-0 unit-interval results render as plain 8-bit images
            plain = np.clip(result.to_interleaved() * 255.0 + 0.5, 0, 255)
            target.write_bytes(encode_png(plain.astype(np.uint8)))
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
