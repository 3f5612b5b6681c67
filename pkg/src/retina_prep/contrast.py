"""Difference-of-Gaussians contrast extraction.

The contrast image is the reparameterized original minus the average of
the reparameterized blurred copies:

    contrast = M*img_0 - (1/d) * sum_{i=1..d} M*img_i

Because the weights sum to zero across the stack, constant inputs map to
zero and any uniform offset is discarded; only local contrast survives.
Two equivalent routes are provided: the direct formulation above, and a
fused kernel that performs reparameterization and subtraction as a single
pointwise reduction over the stacked (3*(d+1))-channel tensor. The fused
route is what the pipeline runs; the direct route is its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bufferpool
from .blur import BlurStack
from .errors import ShapeError
from .image import ImagePlanar, ValueDomain
from .kernels import pointwise_reduce
from .reparam import ReparamMatrix, apply_reparam


@dataclass(frozen=True)
class FusedKernel:
    """out_channels x 3(d+1) weights for the one-shot pointwise reduction.

    Input index layout: columns 0-2 are the original RGB; columns
    3i..3i+2 are the i-fold blurred RGB. Row c holds M[c] on the original
    block and -(1/d)*M[c] on every blurred block, so each row sums to zero
    whenever d >= 1.
    """

    depth: int
    weights: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.weights, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] not in (1, 3):
            raise ShapeError(f"fused kernel must have 1 or 3 output rows, got {arr.shape}")
        if arr.shape[1] != 3 * (self.depth + 1):
            raise ShapeError(
                f"fused kernel for depth {self.depth} needs {3 * (self.depth + 1)} columns, "
                f"got {arr.shape[1]}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "weights", arr)

    @property
    def out_channels(self) -> int:
        return self.weights.shape[0]


def build_fused_kernel(m: ReparamMatrix, d: int) -> FusedKernel:
    if d < 0:
        raise ValueError(f"depth must be >= 0, got {d}")
    rows = m.coefficients
    weights = np.empty((m.rows, 3 * (d + 1)))
    weights[:, :3] = rows
    if d >= 1:
        blurred_block = -(rows / d) + 0.0  # + 0.0 turns -0.0 into 0.0
        for i in range(1, d + 1):
            weights[:, 3 * i : 3 * i + 3] = blurred_block
    return FusedKernel(d, weights)


def _signed_wrap(planes: np.ndarray, stack: BlurStack) -> ImagePlanar:
    if stack._chain_verified:
        # subtracting an average of blurs of the same [0,1] image from its
        # own reparameterization bounds every sample by 1
        return ImagePlanar._wrap(planes, ValueDomain.SIGNED)
    return ImagePlanar(planes, ValueDomain.SIGNED)


def extract_contrast_direct(stack: BlurStack, m: ReparamMatrix) -> ImagePlanar:
    """Reference route: reparameterize every stack entry, then subtract."""
    d = stack.depth
    base = apply_reparam(stack.images[0], m)
    if d == 0:
        return base
    acc = np.array(apply_reparam(stack.images[1], m).data)
    for i in range(2, d + 1):
        acc += apply_reparam(stack.images[i], m).data
    out = base.data - acc / d
    return _signed_wrap(out, stack)


def extract_contrast_fused(stack: BlurStack, k: FusedKernel) -> ImagePlanar:
    """Fast route: one pointwise reduction over the stacked channels."""
    if stack.depth != k.depth:
        raise ShapeError(f"stack depth {stack.depth} != kernel depth {k.depth}")
    if stack.images[0].channels != 3:
        raise ShapeError("the fused reduction consumes 3-channel stacks")
    first = stack.images[0]
    out = bufferpool.take((k.out_channels, first.height, first.width))
    pointwise_reduce(stack.flat_channels(), k.weights, out)
    if k.depth >= 1:
        return _signed_wrap(out, stack)
    # depth 0 reduces to the reparameterization matrix itself
    m = ReparamMatrix(k.weights)
    domain = ValueDomain.UNIT_INTERVAL if m.preserves_unit_interval() else ValueDomain.SIGNED
    if np.abs(k.weights).sum(axis=1).max() <= 1.0:
        return ImagePlanar._wrap(out, domain)
    return ImagePlanar(out, domain)


def expand_channels(img: ImagePlanar) -> ImagePlanar:
    """Duplicate a single plane into three identical planes."""
    if img.channels != 1:
        raise ShapeError(f"channel expansion takes a 1-channel image, got {img.channels}")
    out = np.empty((3, img.height, img.width))
    out[0] = img.data[0]
    out[1] = img.data[0]
    out[2] = img.data[0]
    return ImagePlanar._wrap(out, img.value_domain)
