"""Binary PPM/PGM (P6/P5) and PFM readers/writers.

PNM integer samples are scaled by the file's stated maxval; PFM carries raw
float32 samples with rows stored bottom-to-top and endianness encoded in
the sign of the scale line.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import DecodeError, DomainError, UnsupportedFormatError
from .image import ImagePlanar, ValueDomain


def _read_pnm_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and '#' comments between header fields
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise DecodeError(f"PNM: missing header field at offset {start}")
    return data[start:pos], pos


def decode_pnm(data: bytes) -> tuple[np.ndarray, int]:
    """Decode P5/P6 to ((height, width, channels) uint samples, maxval)."""
    magic = data[:2]
    if magic == b"P6":
        channels = 3
    elif magic == b"P5":
        channels = 1
    elif magic in (b"P1", b"P2", b"P3"):
        raise UnsupportedFormatError(f"PNM: ASCII variant {magic.decode('latin1')} not supported")
    else:
        raise DecodeError("PNM: bad magic at offset 0")
    pos = 2
    fields = []
    for _ in range(3):
        token, pos = _read_pnm_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise DecodeError(f"PNM: non-numeric header field {token!r} near offset {pos}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise DecodeError(f"PNM: implausible dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise DecodeError(f"PNM: maxval {maxval} out of range")
    pos += 1  # single whitespace byte after maxval
    nbytes = 1 if maxval < 256 else 2
    count = width * height * channels
    payload = data[pos : pos + count * nbytes]
    if len(payload) != count * nbytes:
        raise DecodeError(
            f"PNM: payload is {len(payload)} bytes at offset {pos}, expected {count * nbytes}"
        )
    dtype = np.uint8 if nbytes == 1 else np.dtype(">u2")
    samples = np.frombuffer(payload, dtype=dtype).astype(np.uint16 if nbytes == 2 else np.uint8)
    if (samples > maxval).any():
        raise DecodeError(f"PNM: sample exceeds stated maxval {maxval}")
    return samples.reshape(height, width, channels), maxval


def encode_pnm(img: ImagePlanar, maxval: int = 255) -> bytes:
    """Write P6 (3 channels) or P5 (1 channel) from a unit-interval image."""
    if img.value_domain is not ValueDomain.UNIT_INTERVAL:
        raise DomainError("PNM holds unsigned samples; image must be unit-interval")
    if not 0 < maxval < 65536:
        raise ValueError(f"maxval {maxval} out of range")
    magic = b"P6" if img.channels == 3 else b"P5"
    header = magic + b"\n%d %d\n%d\n" % (img.width, img.height, maxval)
    quantized = np.floor(img.to_interleaved() * maxval + 0.5)
    if maxval < 256:
        payload = quantized.astype(np.uint8).tobytes()
    else:
        payload = quantized.astype(np.uint16).astype(">u2").tobytes()
    return header + payload


def decode_pfm(data: bytes) -> np.ndarray:
    """Decode PF/Pf to (height, width, channels) float32, top-down rows."""
    magic = data[:2]
    if magic == b"PF":
        channels = 3
    elif magic == b"Pf":
        channels = 1
    else:
        raise DecodeError("PFM: bad magic at offset 0")
    pos = 2
    token_w, pos = _read_pnm_token(data, pos)
    token_h, pos = _read_pnm_token(data, pos)
    token_scale, pos = _read_pnm_token(data, pos)
    try:
        width, height = int(token_w), int(token_h)
        scale = float(token_scale)
    except ValueError:
        raise DecodeError(f"PFM: unparseable header field near offset {pos}") from None
    if width < 1 or height < 1:
        raise DecodeError(f"PFM: implausible dimensions {width}x{height}")
    if scale == 0.0:
        raise DecodeError("PFM: zero scale factor")
    pos += 1
    count = width * height * channels
    payload = data[pos : pos + count * 4]
    if len(payload) != count * 4:
        raise DecodeError(
            f"PFM: payload is {len(payload)} bytes at offset {pos}, expected {count * 4}"
        )
    dtype = np.dtype("<f4") if scale < 0 else np.dtype(">f4")
    samples = np.frombuffer(payload, dtype=dtype).astype(np.float32)
    samples = samples.reshape(height, width, channels)
    return samples[::-1].copy()  # rows are stored bottom-up


def encode_pfm(img: ImagePlanar) -> bytes:
    """Write little-endian PF/Pf (scale -1.0), rows bottom-up, float32."""
    magic = b"PF" if img.channels == 3 else b"Pf"
    header = magic + b"\n%d %d\n-1.0\n" % (img.width, img.height)
    interleaved = img.to_interleaved().astype(np.float32)
    return header + interleaved[::-1].astype("<f4").tobytes()
