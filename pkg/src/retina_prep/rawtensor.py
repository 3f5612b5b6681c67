"""Raw tensor file: a fixed-layout float32 dump for lossless interchange.

Layout (all little-endian, byte-exact across platforms):

    bytes 0..3    magic ``RPT1``
    bytes 4..7    width   (uint32)
    bytes 8..11   height  (uint32)
    bytes 12..15  channels (uint32)
    bytes 16..    width*height*channels float32 samples, channel-major

The value domain is not stored; on read it is inferred from the samples
(any negative sample means signed, otherwise unit-interval).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .image import ImagePlanar, ValueDomain

MAGIC = b"RPT1"
_HEADER = struct.Struct("<4sIII")


def encode_raw_tensor(img: ImagePlanar) -> bytes:
    header = _HEADER.pack(MAGIC, img.width, img.height, img.channels)
    return header + img.data.astype("<f4").tobytes()


def decode_raw_tensor(data: bytes) -> ImagePlanar:
    if len(data) < _HEADER.size:
        raise FormatError(f"raw tensor: {len(data)} bytes is shorter than the header")
    magic, width, height, channels = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"raw tensor: bad magic {magic!r}, expected {MAGIC!r}")
    expected = width * height * channels * 4
    payload = data[_HEADER.size :]
    if len(payload) != expected:
        raise FormatError(
            f"raw tensor: header implies {expected} payload bytes, found {len(payload)}"
        )
    samples = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    planes = samples.reshape(channels, height, width)
    domain = ValueDomain.SIGNED if (planes < 0).any() else ValueDomain.UNIT_INTERVAL
    return ImagePlanar(planes, domain)


def write_raw(img: ImagePlanar, path: str | Path) -> None:
    Path(path).write_bytes(encode_raw_tensor(img))


def read_raw(path: str | Path) -> ImagePlanar:
    return decode_raw_tensor(Path(path).read_bytes())
