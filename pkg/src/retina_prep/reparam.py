"""Color reparameterization: fixed linear recodings of the RGB channels.

Four variants are supported:

* ``grayscale`` - every coefficient 1/3 (flat luminance average);
* ``grayscale-green-bias`` - the 0.299/0.587/0.114 perceptual weighting;
* ``color-opponency`` - black-white, red-green and blue-yellow axes,
  mirroring retinal double-opponent cells;
* ``single-color`` - the identity, leaving R, G, B untouched.

The grayscale variants may produce one row (single channel) or three
identical rows. All coefficient constants live here, in one place, so the
direct per-image path and the fused-kernel path use bit-identical values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ShapeError
from .image import ImagePlanar, ValueDomain

THIRD = 1.0 / 3.0
HALF = 0.5
SIXTH = 1.0 / 6.0
GREEN_BIAS_ROW = (0.299, 0.587, 0.114)

OPPONENCY_ROWS = (
    (THIRD, THIRD, THIRD),   # black-white
    (HALF, -HALF, 0.0),      # red-green
    (-SIXTH, -SIXTH, THIRD), # blue-yellow
)


class VariantKind(Enum):
    GRAYSCALE = "grayscale"
    GRAYSCALE_GREEN_BIAS = "grayscale-green-bias"
    COLOR_OPPONENCY = "color-opponency"
    SINGLE_COLOR = "single-color"


VARIANT_NAMES = tuple(k.value for k in VariantKind)


@dataclass(frozen=True)
class ReparamVariant:
    kind: VariantKind
    grayscale_channels: int = 3

    def __post_init__(self) -> None:
        if self.grayscale_channels not in (1, 3):
            raise ValueError(f"grayscale_channels must be 1 or 3, got {self.grayscale_channels}")
        if self.grayscale_channels == 1 and self.kind in (
            VariantKind.COLOR_OPPONENCY,
            VariantKind.SINGLE_COLOR,
        ):
            raise ValueError(f"{self.kind.value} always produces 3 channels")

    @classmethod
    def from_name(cls, name: str, channels: int = 3) -> "ReparamVariant":
        try:
            kind = VariantKind(name)
        except ValueError:
            raise ValueError(f"unknown variant {name!r} (want one of {VARIANT_NAMES})") from None
        if kind in (VariantKind.COLOR_OPPONENCY, VariantKind.SINGLE_COLOR):
            channels = 3
        return cls(kind, channels)


@dataclass(frozen=True)
class ReparamMatrix:
    """rows x 3 coefficient table applied to the RGB vector of each pixel."""

    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.coefficients, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] not in (1, 3) or arr.shape[1] != 3:
            raise ShapeError(f"reparameterization matrix must be 1x3 or 3x3, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("reparameterization matrix has non-finite coefficients")
        arr.flags.writeable = False
        object.__setattr__(self, "coefficients", arr)

    @property
    def rows(self) -> int:
        return self.coefficients.shape[0]

    def preserves_unit_interval(self) -> bool:
        """True when outputs of unit-interval inputs stay in [0, 1]."""
        c = self.coefficients
        return bool((c >= 0.0).all() and (c.sum(axis=1) <= 1.0).all())


def matrix_for(variant: ReparamVariant) -> ReparamMatrix:
    kind = variant.kind
    if kind is VariantKind.GRAYSCALE:
        row = (THIRD, THIRD, THIRD)
        return ReparamMatrix([row] * variant.grayscale_channels)
    if kind is VariantKind.GRAYSCALE_GREEN_BIAS:
        return ReparamMatrix([GREEN_BIAS_ROW] * variant.grayscale_channels)
    if kind is VariantKind.COLOR_OPPONENCY:
        return ReparamMatrix(OPPONENCY_ROWS)
    return ReparamMatrix(np.eye(3))


def apply_reparam(img: ImagePlanar, m: ReparamMatrix) -> ImagePlanar:
    """Per-pixel matrix product; output channel c is sum_k m[c,k] * input_k."""
    if img.channels != 3:
        raise ShapeError(f"reparameterization needs a 3-channel image, got {img.channels}")
    c = m.coefficients
    r, g, b = img.data
    out = np.empty((m.rows, img.height, img.width))
    for i in range(m.rows):
        out[i] = (c[i, 0] * r + c[i, 1] * g) + c[i, 2] * b
    domain = ValueDomain.UNIT_INTERVAL if m.preserves_unit_interval() else ValueDomain.SIGNED
    if np.abs(c).sum(axis=1).max() <= 1.0:
        # row coefficient mass <= 1 bounds every output by 1 in magnitude
        return ImagePlanar._wrap(out, domain)
    return ImagePlanar(out, domain)
