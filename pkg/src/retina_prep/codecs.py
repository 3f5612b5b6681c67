"""Image decoding to planar floats, plus the signed-contrast visualization.

Integer formats are scaled by their maximum sample value, so an 8-bit 255
and a 16-bit 65535 both land on exactly 1.0. PFM floats are taken as-is;
their domain is inferred from the sample signs.
"""

from __future__ import annotations

import numpy as np

from .errors import DecodeError, DomainError
from .image import ImagePlanar, ValueDomain
from .png import decode_png, encode_png
from .pnm import decode_pfm, decode_pnm

FORMATS = ("png", "ppm", "pfm")

# Mapping used when rendering signed contrast as 8-bit gray/RGB:
# value v -> round((v * -0.5 + 0.5) * 255), so 0 -> 128, -1 -> 255, +1 -> 0.
VIS_SCALE = -0.5
VIS_OFFSET = 0.5


def detect_format(data: bytes) -> str:
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return "png"
    if data[:2] in (b"P5", b"P6"):
        return "ppm"
    if data[:2] in (b"PF", b"Pf"):
        return "pfm"
    raise DecodeError(f"unrecognized image magic {data[:8]!r}")


def decode_image(data: bytes, fmt: str | None = None) -> ImagePlanar:
    """Decode PNG / binary PPM-PGM / PFM bytes into a planar float image."""
    if fmt is None:
        fmt = detect_format(data)
    fmt = fmt.lower()
    if fmt == "png":
        samples = decode_png(data)
        maxval = 255 if samples.dtype == np.uint8 else 65535
    elif fmt in ("ppm", "pgm", "pnm"):
        samples, maxval = decode_pnm(data)
    elif fmt == "pfm":
        floats = decode_pfm(data).astype(np.float64)
        lo = floats.min()
        if lo < -1.0 or floats.max() > 1.0:
            raise DecodeError("PFM: samples outside [-1, 1] cannot enter the pipeline")
        domain = ValueDomain.SIGNED if lo < 0 else ValueDomain.UNIT_INTERVAL
        return ImagePlanar.from_interleaved(floats, domain)
    else:
        raise DecodeError(f"unknown format name {fmt!r} (want one of {FORMATS})")
    scaled = samples.astype(np.float64) / float(maxval)
    return ImagePlanar.from_interleaved(scaled, ValueDomain.UNIT_INTERVAL)


def encode_visualization(img: ImagePlanar) -> bytes:
    """Render a signed contrast image as an 8-bit PNG (zero maps to 128)."""
    if img.value_domain is not ValueDomain.SIGNED:
        raise DomainError("visualization expects a signed contrast image")
    mapped = (img.to_interleaved() * VIS_SCALE + VIS_OFFSET) * 255.0
    quantized = np.clip(np.floor(mapped + 0.5), 0.0, 255.0).astype(np.uint8)
    if quantized.shape[2] == 1:
        quantized = quantized[:, :, 0]
    return encode_png(quantized)
