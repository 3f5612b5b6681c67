"""Low-level compute kernels.

Every kernel exists twice: a numba-compiled fast path and a plain numpy
fallback. Both evaluate floating-point expressions in the same order, so
their outputs are bit-identical; the test suite asserts this. The fallback
is selected when numba is unavailable or RETINA_PREP_NO_NUMBA is set.

Summation orders are fixed (left-to-right along the window, ascending
input-channel index in reductions) so results do not depend on thread
count.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

INV9 = 1.0 / 9.0

_HAVE_NUMBA = False
if not os.environ.get("RETINA_PREP_NO_NUMBA"):
    try:
        from numba import njit, prange
        # TBB version probing warns on some hosts at first parallel launch;
        # numba falls back to another threading layer on its own.
        warnings.filterwarnings(
            "ignore", message="The TBB threading layer requires TBB version"
        )
        _HAVE_NUMBA = True
    except ImportError:
        pass

if not _HAVE_NUMBA:
    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# 3x3 box blur, separable: per output row, three horizontal 3-tap sums are
# combined vertically and scaled once by 1/9.

@njit(parallel=True, cache=True)
def _blur3_replicate_nb(src, dst):
    channels, height, width = src.shape
    for job in prange(channels * height):
        c = job // height
        y = job % height
        y0 = y - 1 if y > 0 else 0
        y2 = y + 1 if y < height - 1 else height - 1
        r0 = src[c, y0]
        r1 = src[c, y]
        r2 = src[c, y2]
        out = dst[c, y]
        if width == 1:
            h0 = (r0[0] + r0[0]) + r0[0]
            h1 = (r1[0] + r1[0]) + r1[0]
            h2 = (r2[0] + r2[0]) + r2[0]
            out[0] = ((h0 + h1) + h2) * INV9
        else:
            h0 = (r0[0] + r0[0]) + r0[1]
            h1 = (r1[0] + r1[0]) + r1[1]
            h2 = (r2[0] + r2[0]) + r2[1]
            out[0] = ((h0 + h1) + h2) * INV9
            for x in range(1, width - 1):
                h0 = (r0[x - 1] + r0[x]) + r0[x + 1]
                h1 = (r1[x - 1] + r1[x]) + r1[x + 1]
                h2 = (r2[x - 1] + r2[x]) + r2[x + 1]
                out[x] = ((h0 + h1) + h2) * INV9
            h0 = (r0[width - 2] + r0[width - 1]) + r0[width - 1]
            h1 = (r1[width - 2] + r1[width - 1]) + r1[width - 1]
            h2 = (r2[width - 2] + r2[width - 1]) + r2[width - 1]
            out[width - 1] = ((h0 + h1) + h2) * INV9


@njit(parallel=True, cache=True)
def _blur3_zero_nb(src, dst):
    channels, height, width = src.shape
    for job in prange(channels * height):
        c = job // height
        y = job % height
        has0 = y > 0
        has2 = y < height - 1
        r0 = src[c, y - 1] if has0 else src[c, y]
        r1 = src[c, y]
        r2 = src[c, y + 1] if has2 else src[c, y]
        out = dst[c, y]
        for x in range(width):
            left = x - 1
            right = x + 1
            if has0:
                h0 = r0[x]
                if left >= 0:
                    h0 = r0[left] + r0[x]
                if right < width:
                    h0 = h0 + r0[right]
                if left < 0:
                    h0 = 0.0 + h0
            else:
                h0 = 0.0
            h1 = r1[x]
            if left >= 0:
                h1 = r1[left] + r1[x]
            if right < width:
                h1 = h1 + r1[right]
            if left < 0:
                h1 = 0.0 + h1
            if has2:
                h2 = r2[x]
                if left >= 0:
                    h2 = r2[left] + r2[x]
                if right < width:
                    h2 = h2 + r2[right]
                if left < 0:
                    h2 = 0.0 + h2
            else:
                h2 = 0.0
            out[x] = ((h0 + h1) + h2) * INV9


def _blur3_np(src, dst, zero_border):
    mode = "constant" if zero_border else "edge"
    padded = np.pad(src, ((0, 0), (0, 0), (1, 1)), mode=mode)
    hsum = (padded[:, :, :-2] + padded[:, :, 1:-1]) + padded[:, :, 2:]
    padded = np.pad(hsum, ((0, 0), (1, 1), (0, 0)), mode=mode)
    vsum = (padded[:, :-2, :] + padded[:, 1:-1, :]) + padded[:, 2:, :]
    np.multiply(vsum, INV9, out=dst)


def blur3(src: np.ndarray, dst: np.ndarray, zero_border: bool) -> None:
    """3x3 mean of ``src`` into ``dst``, both (channels, height, width)."""
    if _HAVE_NUMBA:
        if zero_border:
            _blur3_zero_nb(src, dst)
        else:
            _blur3_replicate_nb(src, dst)
    else:
        _blur3_np(src, dst, zero_border)


# ---------------------------------------------------------------------------
# Pointwise channel reduction: out[k] = sum_j weights[k, j] * stacked[j],
# accumulated in ascending j so the result is reproducible.

@njit(parallel=True, cache=True)
def _reduce_nb(stacked, weights, out):
    nin, height, width = stacked.shape
    nout = weights.shape[0]
    for y in prange(height):
        acc = np.zeros((nout, width))
        for j in range(nin):
            row = stacked[j, y]
            for k in range(nout):
                w = weights[k, j]
                for x in range(width):
                    acc[k, x] += w * row[x]
        for k in range(nout):
            for x in range(width):
                out[k, y, x] = acc[k, x]


def _reduce_np(stacked, weights, out):
    nin = stacked.shape[0]
    nout = weights.shape[0]
    out[...] = 0.0
    for j in range(nin):
        for k in range(nout):
            out[k] += weights[k, j] * stacked[j]


def pointwise_reduce(stacked: np.ndarray, weights: np.ndarray, out: np.ndarray) -> None:
    """Fixed 1x1 convolution over stacked channel planes."""
    if _HAVE_NUMBA:
        _reduce_nb(stacked, weights, out)
    else:
        _reduce_np(stacked, weights, out)


# ---------------------------------------------------------------------------
# PNG scanline unfiltering (filters 0..4), byte arithmetic mod 256. Rows
# depend on previous rows, so this is inherently sequential.

@njit(cache=True)
def _unfilter_nb(raw, out, height, stride, bpp):
    for y in range(height):
        ftype = raw[y * (stride + 1)]
        off = y * (stride + 1) + 1
        if ftype > 4:
            return y
        for x in range(stride):
            cur = np.int64(raw[off + x])
            a = np.int64(out[y, x - bpp]) if x >= bpp else np.int64(0)
            b = np.int64(out[y - 1, x]) if y > 0 else np.int64(0)
            if ftype == 0:
                val = cur
            elif ftype == 1:
                val = cur + a
            elif ftype == 2:
                val = cur + b
            elif ftype == 3:
                val = cur + (a + b) // 2
            else:
                cc = np.int64(out[y - 1, x - bpp]) if (x >= bpp and y > 0) else np.int64(0)
                p = a + b - cc
                pa = abs(p - a)
                pb = abs(p - b)
                pc = abs(p - cc)
                if pa <= pb and pa <= pc:
                    val = cur + a
                elif pb <= pc:
                    val = cur + b
                else:
                    val = cur + cc
            out[y, x] = np.uint8(val & 0xFF)
    return -1


def _unfilter_py(raw, out, height, stride, bpp):
    for y in range(height):
        ftype = int(raw[y * (stride + 1)])
        off = y * (stride + 1) + 1
        if ftype > 4:
            return y
        row = out[y]
        prev = out[y - 1] if y > 0 else None
        for x in range(stride):
            cur = int(raw[off + x])
            a = int(row[x - bpp]) if x >= bpp else 0
            b = int(prev[x]) if prev is not None else 0
            if ftype == 0:
                val = cur
            elif ftype == 1:
                val = cur + a
            elif ftype == 2:
                val = cur + b
            elif ftype == 3:
                val = cur + (a + b) // 2
            else:
                cc = int(prev[x - bpp]) if (x >= bpp and prev is not None) else 0
                p = a + b - cc
                pa = abs(p - a)
                pb = abs(p - b)
                pc = abs(p - cc)
                if pa <= pb and pa <= pc:
                    val = cur + a
                elif pb <= pc:
                    val = cur + b
                else:
                    val = cur + cc
            row[x] = val & 0xFF
    return -1


def unfilter_scanlines(raw: np.ndarray, height: int, stride: int, bpp: int) -> np.ndarray:
    """Undo per-row PNG filtering; returns (height, stride) uint8 samples.

    Raises ValueError naming the offending row on an unknown filter type.
    """
    out = np.empty((height, stride), dtype=np.uint8)
    if _HAVE_NUMBA:
        bad = _unfilter_nb(raw, out, height, stride, bpp)
    else:
        bad = _unfilter_py(raw, out, height, stride, bpp)
    if bad >= 0:
        raise ValueError(f"unknown scanline filter type in row {bad}")
    return out
