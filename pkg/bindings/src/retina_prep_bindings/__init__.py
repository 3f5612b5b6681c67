"""Array-level bindings for the retina-prep preprocessing core.

Two entry points, meant to slot into ML data pipelines that move
contiguous float32 buffers around:

* :func:`preprocess_array` runs color reparameterization plus
  difference-of-Gaussians contrast on one image array and returns a new
  array in the same memory layout;
* :func:`fused_kernel_array` returns the pointwise reduction weights so a
  framework can instantiate the whole transform as a frozen 1x1
  convolution over the stacked blur tensor.

Inputs are (height, width, 3) or (3, height, width) float32 in [0, 1];
the layout is detected from the shape (``layout=`` overrides the
ambiguous 3x3x3 case, which defaults to channel-first). Outputs are
freshly allocated, never views of the input. Calls are reentrant and
stateless; heavy compute runs outside the interpreter lock.
"""

from __future__ import annotations

import numpy as np

import retina_prep as _core

__version__ = _core.__version__

_LAYOUTS = ("auto", "chw", "hwc")


def _resolve_layout(shape: tuple[int, ...], layout: str) -> str:
    if layout not in _LAYOUTS:
        raise ValueError(f"layout must be one of {_LAYOUTS}, got {layout!r}")
    if len(shape) != 3:
        raise ValueError(f"expected a 3-d array, got shape {shape}")
    if layout != "auto":
        expected_axis = 0 if layout == "chw" else 2
        if shape[expected_axis] != 3:
            raise ValueError(f"shape {shape} does not match layout {layout!r}")
        return layout
    if shape[0] == 3:
        return "chw"  # (3, 3, 3) is read as channel-first
    if shape[2] == 3:
        return "hwc"
    raise ValueError(f"shape {shape} has no 3-channel axis")


def preprocess_array(
    arr: np.ndarray,
    variant: str,
    depth: int,
    border: str = "replicate",
    layout: str = "auto",
) -> np.ndarray:
    """Preprocess one float32 RGB array; returns a new array, same layout."""
    arr = np.asarray(arr)
    if arr.dtype != np.float32:
        raise TypeError(f"expected float32 samples, got {arr.dtype}")
    resolved = _resolve_layout(arr.shape, layout)
    planes = np.ascontiguousarray(arr if resolved == "chw" else arr.transpose(2, 0, 1))
    if planes.min() < 0.0 or planes.max() > 1.0:
        raise ValueError("input samples must lie in [0, 1]")

    cfg = _core.PreprocessConfig(
        variant=_core.ReparamVariant.from_name(variant),
        depth=int(depth),
        border=_core.BorderPolicy.from_name(border),
    )
    img = _core.ImagePlanar(planes.astype(np.float64), _core.ValueDomain.UNIT_INTERVAL)
    result = _core.preprocess(img, cfg).data.astype(np.float32)
    if resolved == "hwc":
        result = np.ascontiguousarray(result.transpose(1, 2, 0))
    return result


def fused_kernel_array(variant: str, depth: int) -> np.ndarray:
    """The out_channels x 3(depth+1) reduction weights, full precision."""
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    matrix = _core.matrix_for(_core.ReparamVariant.from_name(variant))
    kernel = _core.build_fused_kernel(matrix, int(depth))
    return np.array(kernel.weights, copy=True)


__all__ = ["preprocess_array", "fused_kernel_array", "__version__"]
