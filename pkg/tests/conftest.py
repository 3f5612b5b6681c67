"""Shared fixtures and independent reference implementations.

The reference routines here (hand-built PNG/PPM writers, direct 2-D
convolution, set-based metrics) deliberately avoid the package's own code
paths so tests compare two independent computations.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np
import pytest

from retina_prep import ImagePlanar, ValueDomain


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def unit_image(rng, channels=3, height=8, width=10):
    return ImagePlanar(rng.random((channels, height, width)), ValueDomain.UNIT_INTERVAL)


# ---------------------------------------------------------------------------
# Reference PNG writer supporting all five scanline filters.

def _png_chunk(ctype: bytes, body: bytes) -> bytes:
    return (
        struct.pack(">I", len(body))
        + ctype
        + body
        + struct.pack(">I", zlib.crc32(ctype + body) & 0xFFFFFFFF)
    )


def _filter_row(ftype: int, row: np.ndarray, prev: np.ndarray, bpp: int) -> bytes:
    row = row.astype(np.int64)
    prev = prev.astype(np.int64)
    out = np.empty_like(row)
    for x in range(row.size):
        a = row[x - bpp] if x >= bpp else 0
        b = prev[x]
        c = prev[x - bpp] if x >= bpp else 0
        if ftype == 0:
            pred = 0
        elif ftype == 1:
            pred = a
        elif ftype == 2:
            pred = b
        elif ftype == 3:
            pred = (a + b) // 2
        else:
            p = a + b - c
            pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
            pred = a if (pa <= pb and pa <= pc) else (b if pb <= pc else c)
        out[x] = (row[x] - pred) & 0xFF
    return out.astype(np.uint8).tobytes()


def build_png(samples: np.ndarray, bit_depth: int = 8, filters=None) -> bytes:
    """Write a PNG from (H, W) or (H, W, C) integer samples, gray or RGB."""
    arr = np.asarray(samples)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    height, width, channels = arr.shape
    color_type = 0 if channels == 1 else 2
    if filters is None:
        filters = [0] * height
    if bit_depth == 8:
        rows = arr.astype(np.uint8).reshape(height, -1)
    else:
        rows = arr.astype(">u2").view(np.uint8).reshape(height, -1)
    bpp = channels * (bit_depth // 8)
    raw = bytearray()
    prev = np.zeros(rows.shape[1], dtype=np.uint8)
    for y in range(height):
        raw.append(filters[y])
        raw += _filter_row(filters[y], rows[y], prev, bpp)
        prev = rows[y]
    ihdr = struct.pack(">IIBBBBB", width, height, bit_depth, color_type, 0, 0, 0)
    return (
        b"\x89PNG\r\n\x1a\n"
        + _png_chunk(b"IHDR", ihdr)
        + _png_chunk(b"IDAT", zlib.compress(bytes(raw)))
        + _png_chunk(b"IEND", b"")
    )


def build_ppm(samples: np.ndarray, maxval: int = 255) -> bytes:
    arr = np.asarray(samples)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    height, width, channels = arr.shape
    magic = b"P6" if channels == 3 else b"P5"
    header = magic + b"\n%d %d\n%d\n" % (width, height, maxval)
    payload = arr.astype(np.uint8).tobytes() if maxval < 256 else arr.astype(">u2").tobytes()
    return header + payload


# ---------------------------------------------------------------------------
# Direct 2-D 9-tap convolution, the oracle for the separable blur.

def direct_blur3(planes: np.ndarray, zero_border: bool) -> np.ndarray:
    channels, height, width = planes.shape
    out = np.zeros_like(planes)
    for c in range(channels):
        for y in range(height):
            for x in range(width):
                s = 0.0
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        yy, xx = y + dy, x + dx
                        if zero_border:
                            if 0 <= yy < height and 0 <= xx < width:
                                s += planes[c, yy, xx]
                        else:
                            yy = min(max(yy, 0), height - 1)
                            xx = min(max(xx, 0), width - 1)
                            s += planes[c, yy, xx]
                out[c, y, x] = s / 9.0
    return out


# ---------------------------------------------------------------------------
# Set-based segmentation metrics, the oracle for the confusion-matrix path.

def brute_force_metrics(pred: np.ndarray, gt: np.ndarray, k: int, ignore_id: int):
    mask = gt != ignore_id
    ious, accs = [], []
    for c in range(k):
        inter = int(((pred == c) & (gt == c) & mask).sum())
        union = int((((pred == c) | (gt == c)) & mask).sum())
        gt_c = int(((gt == c) & mask).sum())
        ious.append(inter / union if union > 0 else None)
        accs.append(inter / gt_c if gt_c > 0 else None)
    correct = int(((pred == gt) & mask).sum())
    total = int(mask.sum())
    present_iou = [v for v in ious if v is not None]
    present_acc = [v for v in accs if v is not None]
    return {
        "per_class_iou": ious,
        "per_class_acc": accs,
        "miou": sum(present_iou) / len(present_iou) if present_iou else None,
        "macc": sum(present_acc) / len(present_acc) if present_acc else None,
        "aacc": correct / total if total else None,
    }
