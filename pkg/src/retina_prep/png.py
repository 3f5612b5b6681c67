"""Minimal PNG codec for the formats the pipeline actually consumes.

Reads non-interlaced 8/16-bit grayscale and RGB images; anything carrying
an alpha channel or a palette is rejected outright rather than silently
converted. Writes 8-bit grayscale/RGB with unfiltered scanlines. Decode
errors name the byte offset of the structure that failed to parse.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import DecodeError, UnsupportedFormatError
from .kernels import unfilter_scanlines

SIGNATURE = b"\x89PNG\r\n\x1a\n"

_CHANNELS = {0: 1, 2: 3}
_REJECTED_COLOR_TYPES = {
    3: "palette-indexed color",
    4: "grayscale with alpha channel",
    6: "RGBA (alpha channel)",
}


def decode_png(data: bytes) -> np.ndarray:
    """Decode to (height, width, channels) uint8 or uint16 samples."""
    if len(data) < 8 or data[:8] != SIGNATURE:
        raise DecodeError("PNG: bad signature at offset 0")
    pos = 8
    header = None
    idat = bytearray()
    saw_end = False
    while pos < len(data):
        if pos + 8 > len(data):
            raise DecodeError(f"PNG: truncated chunk header at offset {pos}")
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        ctype = data[pos + 4 : pos + 8]
        body_end = pos + 8 + length
        if body_end + 4 > len(data):
            raise DecodeError(f"PNG: truncated {ctype.decode('latin1')} chunk at offset {pos}")
        body = data[pos + 8 : body_end]
        (crc,) = struct.unpack(">I", data[body_end : body_end + 4])
        if crc != (zlib.crc32(ctype + body) & 0xFFFFFFFF):
            raise DecodeError(f"PNG: bad CRC for {ctype.decode('latin1')} chunk at offset {pos}")
        if ctype == b"IHDR":
            if header is not None:
                raise DecodeError(f"PNG: duplicate IHDR at offset {pos}")
            if length != 13:
                raise DecodeError(f"PNG: IHDR length {length} at offset {pos}, expected 13")
            header = struct.unpack(">IIBBBBB", body)
        elif ctype == b"IDAT":
            if header is None:
                raise DecodeError(f"PNG: IDAT before IHDR at offset {pos}")
            idat += body
        elif ctype == b"IEND":
            saw_end = True
            break
        pos = body_end + 4
    if header is None:
        raise DecodeError("PNG: missing IHDR chunk")
    if not saw_end:
        raise DecodeError(f"PNG: missing IEND chunk (stream ends at offset {len(data)})")

    width, height, depth, color_type, compression, filter_method, interlace = header
    if width < 1 or height < 1 or width * height > 2**31:
        raise DecodeError(f"PNG: implausible dimensions {width}x{height}")
    if compression != 0 or filter_method != 0:
        raise DecodeError(f"PNG: unknown compression/filter method {compression}/{filter_method}")
    if interlace != 0:
        raise UnsupportedFormatError("PNG: interlaced images are not supported")
    if color_type in _REJECTED_COLOR_TYPES:
        raise UnsupportedFormatError(f"PNG: {_REJECTED_COLOR_TYPES[color_type]} is not supported")
    if color_type not in _CHANNELS:
        raise DecodeError(f"PNG: unknown color type {color_type}")
    if depth not in (8, 16):
        raise UnsupportedFormatError(f"PNG: bit depth {depth} not supported (want 8 or 16)")
    if not idat:
        raise DecodeError("PNG: no IDAT pixel data")

    channels = _CHANNELS[color_type]
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise DecodeError(f"PNG: corrupt compressed pixel data ({exc})") from None
    stride = width * channels * (depth // 8)
    expected = height * (stride + 1)
    if len(raw) != expected:
        raise DecodeError(
            f"PNG: pixel payload is {len(raw)} bytes, header implies {expected}"
        )
    try:
        flat = unfilter_scanlines(
            np.frombuffer(raw, dtype=np.uint8), height, stride, channels * (depth // 8)
        )
    except ValueError as exc:
        raise DecodeError(f"PNG: {exc}") from None
    if depth == 8:
        samples = flat.reshape(height, width, channels)
    else:
        samples = (
            flat.reshape(height, stride)
            .view(">u2")
            .astype(np.uint16)
            .reshape(height, width, channels)
        )
    return samples


def encode_png(samples: np.ndarray) -> bytes:
    """Encode (height, width) or (height, width, {1,3}) uint8 samples."""
    arr = np.asarray(samples)
    if arr.dtype != np.uint8:
        raise ValueError(f"PNG encoder wants uint8 samples, got {arr.dtype}")
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] not in (1, 3):
        raise ValueError(f"PNG encoder wants 1 or 3 channels, got shape {arr.shape}")
    height, width, channels = arr.shape
    color_type = 0 if channels == 1 else 2
    ihdr = struct.pack(">IIBBBBB", width, height, 8, color_type, 0, 0, 0)
    rows = np.empty((height, 1 + width * channels), dtype=np.uint8)
    rows[:, 0] = 0
    rows[:, 1:] = arr.reshape(height, width * channels)
    out = bytearray(SIGNATURE)
    for ctype, body in ((b"IHDR", ihdr), (b"IDAT", zlib.compress(rows.tobytes(), 6)), (b"IEND", b"")):
        out += struct.pack(">I", len(body)) + ctype + body
        out += struct.pack(">I", zlib.crc32(ctype + body) & 0xFFFFFFFF)
    return bytes(out)
