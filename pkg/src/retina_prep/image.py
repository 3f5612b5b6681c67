"""Planar float image container used by every pipeline stage.

Pixels live in channel-major float64 planes. Inputs carry values in [0, 1]
(``UNIT_INTERVAL``); contrast outputs carry values in [-1, 1] (``SIGNED``).
Both bounds are enforced at construction, and the backing array is frozen,
so instances are safe to share across threads.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DomainError, ShapeError


class ValueDomain(Enum):
    UNIT_INTERVAL = "unit"
    SIGNED = "signed"


class ImagePlanar:
    """Immutable (channels, height, width) float64 image."""

    __slots__ = ("data", "value_domain")

    def __init__(self, data: np.ndarray, value_domain: ValueDomain) -> None:
        arr = np.array(data, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 3:
            raise ShapeError(f"expected (channels, height, width) data, got shape {arr.shape}")
        channels, height, width = arr.shape
        if channels not in (1, 3):
            raise ShapeError(f"channel count must be 1 or 3, got {channels}")
        if height < 1 or width < 1:
            raise ShapeError(f"image must be at least 1x1, got {width}x{height}")
        lo = 0.0 if value_domain is ValueDomain.UNIT_INTERVAL else -1.0
        if not ((arr >= lo).all() and (arr <= 1.0).all()):
            raise DomainError(
                f"samples outside [{lo}, 1] for {value_domain.name} image "
                f"(range [{arr.min()}, {arr.max()}])"
            )
        arr.flags.writeable = False
        self.data = arr
        self.value_domain = value_domain

    @classmethod
    def _wrap(cls, data: np.ndarray, value_domain: ValueDomain) -> "ImagePlanar":
        """Adopt an array known to satisfy the invariants (no copy, no checks)."""
        self = object.__new__(cls)
        if data.flags.writeable:
            data.flags.writeable = False
        self.data = data
        self.value_domain = value_domain
        return self

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    def plane(self, c: int) -> np.ndarray:
        return self.data[c]

    def to_interleaved(self) -> np.ndarray:
        """Copy out as (height, width, channels)."""
        return np.ascontiguousarray(self.data.transpose(1, 2, 0))

    @classmethod
    def from_interleaved(cls, arr: np.ndarray, value_domain: ValueDomain) -> "ImagePlanar":
        arr = np.asarray(arr)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise ShapeError(f"expected (height, width, channels) data, got shape {arr.shape}")
        return cls(arr.transpose(2, 0, 1), value_domain)

    def __repr__(self) -> str:
        return (
            f"ImagePlanar({self.width}x{self.height}x{self.channels}, "
            f"{self.value_domain.name})"
        )
