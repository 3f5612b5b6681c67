"""Progressive 3x3 box blurring.

Repeated box blurring converges on a Gaussian (central limit theorem);
the stack of progressively blurred copies is what the contrast stage
subtracts from the original. The blur is separable: two 3-tap mean passes
whose summation order is fixed, so results are reproducible at any thread
count. Out-of-frame samples are either clamped to the nearest edge pixel
(the default, which keeps constant images constant) or treated as zero.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from . import bufferpool
from .errors import ShapeError
from .image import ImagePlanar, ValueDomain
from .kernels import blur3


class BorderPolicy(Enum):
    REPLICATE = "replicate"
    ZERO = "zero"

    @classmethod
    def from_name(cls, name: str) -> "BorderPolicy":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown border policy {name!r} (want replicate or zero)") from None


def box_blur3(img: ImagePlanar, border: BorderPolicy = BorderPolicy.REPLICATE) -> ImagePlanar:
    """Mean of each pixel's 3x3 neighborhood; dimensions are preserved."""
    dst = np.empty_like(img.data)
    blur3(img.data, dst, border is BorderPolicy.ZERO)
    # averaging values in [lo, 1] cannot leave [lo, 1] (zero border can only
    # pull toward 0, which stays inside either domain)
    return ImagePlanar._wrap(dst, img.value_domain)


class BlurStack:
    """Original image plus d progressively blurred copies.

    Entry 0 is the original; entry i is entry i-1 blurred once. All entries
    share one contiguous backing block so the fused contrast reduction can
    view them as a single (3*(d+1), height, width) tensor.
    """

    __slots__ = ("images", "border", "_flat", "_chain_verified")

    def __init__(self, images: list[ImagePlanar], border: BorderPolicy,
                 flat: np.ndarray | None = None) -> None:
        if not images:
            raise ShapeError("a blur stack holds at least the original image")
        first = images[0]
        for im in images[1:]:
            if (im.width, im.height, im.channels) != (first.width, first.height, first.channels):
                raise ShapeError("all blur stack entries must share dimensions and channels")
        self.images = images
        self.border = border
        self._flat = flat
        # only stacks produced by build_blur_stack are known to satisfy
        # images[i] = blur(images[i-1]); value-range shortcuts depend on it
        self._chain_verified = flat is not None

    @property
    def depth(self) -> int:
        return len(self.images) - 1

    def flat_channels(self) -> np.ndarray:
        """All entries as one ((d+1)*channels, height, width) array."""
        if self._flat is None:
            self._flat = np.concatenate([im.data for im in self.images], axis=0)
            self._flat.flags.writeable = False
        return self._flat


def build_blur_stack(img: ImagePlanar, d: int,
                     border: BorderPolicy = BorderPolicy.REPLICATE) -> BlurStack:
    """Blur ``img`` d times, keeping every intermediate."""
    if d < 0:
        raise ValueError(f"blur depth must be >= 0, got {d}")
    channels, height, width = img.data.shape
    backing = bufferpool.take((d + 1, channels, height, width))
    backing[0] = img.data
    zero = border is BorderPolicy.ZERO
    for i in range(1, d + 1):
        blur3(backing[i - 1], backing[i], zero)
    backing.flags.writeable = False
    images = [ImagePlanar._wrap(backing[i], img.value_domain) for i in range(d + 1)]
    flat = backing.reshape((d + 1) * channels, height, width)
    return BlurStack(images, border, flat)
