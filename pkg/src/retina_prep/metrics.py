"""Semantic segmentation scoring: mIoU, mAcc and aAcc over label maps.

Counts are gathered into a K x K confusion matrix (rows = ground truth,
columns = prediction) as 64-bit integers; division happens only when a
report is finalized. Pixels whose ground-truth label equals the ignore id
(255 in the Cityscapes convention) never enter the statistics. Classes
that appear in neither ground truth nor prediction are excluded from the
means instead of contributing 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyEvaluationError, LabelError, ShapeError

DEFAULT_IGNORE_ID = 255


class LabelMap:
    """Per-pixel class ids with an ignore sentinel."""

    __slots__ = ("labels", "ignore_id")

    def __init__(self, labels: np.ndarray, ignore_id: int = DEFAULT_IGNORE_ID) -> None:
        arr = np.asarray(labels)
        if arr.ndim != 2:
            raise ShapeError(f"label map must be 2-D, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"label map wants integer class ids, got {arr.dtype}")
        self.labels = arr
        self.ignore_id = ignore_id

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


class ConfusionMatrix:
    """Accumulating K x K count table; merging is plain elementwise addition."""

    __slots__ = ("num_classes", "counts")

    def __init__(self, num_classes: int) -> None:
        if num_classes < 1:
            raise ValueError(f"need at least one class, got {num_classes}")
        self.num_classes = num_classes
        self.counts = np.zeros((num_classes, num_classes), dtype=np.int64)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def merge(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if other.num_classes != self.num_classes:
            raise ShapeError("cannot merge confusion matrices of different sizes")
        self.counts += other.counts
        return self


def _first_bad_pixel(bad: np.ndarray) -> tuple[int, int]:
    y, x = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return int(x), int(y)


def accumulate(cm: ConfusionMatrix, pred: LabelMap, gt: LabelMap) -> ConfusionMatrix:
    """Count each non-ignored pixel into cm[gt_label][pred_label]."""
    if pred.labels.shape != gt.labels.shape:
        raise ShapeError(
            f"prediction {pred.labels.shape} and ground truth {gt.labels.shape} differ"
        )
    k = cm.num_classes
    counted = gt.labels != gt.ignore_id
    g = gt.labels[counted].astype(np.int64)
    p = pred.labels[counted].astype(np.int64)
    bad_gt = (g < 0) | (g >= k)
    if bad_gt.any():
        full = counted & ((gt.labels < 0) | (gt.labels >= k))
        x, y = _first_bad_pixel(full)
        raise LabelError(
            f"ground-truth label {gt.labels[y, x]} at pixel (x={x}, y={y}) outside [0, {k - 1}]"
        )
    bad_pred = (p < 0) | (p >= k)
    if bad_pred.any():
        full = counted & ((pred.labels < 0) | (pred.labels >= k))
        x, y = _first_bad_pixel(full)
        raise LabelError(
            f"predicted label {pred.labels[y, x]} at pixel (x={x}, y={y}) outside [0, {k - 1}]"
        )
    flat = np.bincount(g * k + p, minlength=k * k)
    cm.counts += flat.reshape(k, k)
    return cm


@dataclass(frozen=True)
class MetricsReport:
    per_class_iou: tuple
    per_class_acc: tuple
    miou: float
    macc: float
    aacc: float

    def to_text(self) -> str:
        lines = [
            f"miou {self.miou:.4f}",
            f"macc {self.macc:.4f}",
            f"aacc {self.aacc:.4f}",
        ]
        for c, (iou, acc) in enumerate(zip(self.per_class_iou, self.per_class_acc)):
            lines.append(f"iou_{c} {'nan' if iou is None else f'{iou:.4f}'}")
            lines.append(f"acc_{c} {'nan' if acc is None else f'{acc:.4f}'}")
        return "\n".join(lines) + "\n"


def finalize(cm: ConfusionMatrix) -> MetricsReport:
    """Derive per-class IoU/accuracy and the three aggregate scores."""
    total = cm.total
    if total == 0:
        raise EmptyEvaluationError("no pixels accumulated; nothing to evaluate")
    counts = cm.counts
    tp = np.diag(counts)
    gt_count = counts.sum(axis=1)
    pred_count = counts.sum(axis=0)
    union = gt_count + pred_count - tp

    ious: list[float | None] = []
    accs: list[float | None] = []
    for c in range(cm.num_classes):
        ious.append(int(tp[c]) / int(union[c]) if union[c] > 0 else None)
        accs.append(int(tp[c]) / int(gt_count[c]) if gt_count[c] > 0 else None)
    present_iou = [v for v in ious if v is not None]
    present_acc = [v for v in accs if v is not None]
    return MetricsReport(
        per_class_iou=tuple(ious),
        per_class_acc=tuple(accs),
        miou=sum(present_iou) / len(present_iou),
        macc=sum(present_acc) / len(present_acc),
        aacc=int(tp.sum()) / total,
    )
