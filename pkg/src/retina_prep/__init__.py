"""Retina-inspired image preprocessing and segmentation scoring.

The pipeline recodes RGB into a chosen color representation (grayscale,
green-biased grayscale, opponent channels, or untouched RGB), then
extracts local contrast by subtracting a stack of progressively box-blurred
copies from the original with zero-sum weights, approximating a
difference-of-Gaussians / center-surround filter. A confusion-matrix
scorer (mIoU, mAcc, aAcc) covers downstream evaluation.
"""

from .blur import BlurStack, BorderPolicy, box_blur3, build_blur_stack
from .codecs import decode_image, detect_format, encode_visualization
from .contrast import (
    FusedKernel,
    build_fused_kernel,
    expand_channels,
    extract_contrast_direct,
    extract_contrast_fused,
)
from .errors import (
    ConfigError,
    DecodeError,
    DomainError,
    EmptyEvaluationError,
    FormatError,
    LabelError,
    RetinaPrepError,
    ShapeError,
    UnsupportedFormatError,
)
from .image import ImagePlanar, ValueDomain
from .metrics import (
    ConfusionMatrix,
    LabelMap,
    MetricsReport,
    accumulate,
    finalize,
)
from .pipeline import (
    BatchReport,
    DatasetManifest,
    OutputFormat,
    PreprocessConfig,
    preprocess,
    process_dataset,
)
from .rawtensor import decode_raw_tensor, encode_raw_tensor, read_raw, write_raw
from .reparam import (
    ReparamMatrix,
    ReparamVariant,
    VariantKind,
    apply_reparam,
    matrix_for,
)

__version__ = "0.1.0"

__all__ = [
    "BatchReport",
    "BlurStack",
    "BorderPolicy",
    "ConfigError",
    "ConfusionMatrix",
    "DatasetManifest",
    "DecodeError",
    "DomainError",
    "EmptyEvaluationError",
    "FormatError",
    "FusedKernel",
    "ImagePlanar",
    "LabelError",
    "LabelMap",
    "MetricsReport",
    "OutputFormat",
    "PreprocessConfig",
    "ReparamMatrix",
    "ReparamVariant",
    "RetinaPrepError",
    "ShapeError",
    "UnsupportedFormatError",
    "ValueDomain",
    "VariantKind",
    "accumulate",
    "apply_reparam",
    "box_blur3",
    "build_blur_stack",
    "build_fused_kernel",
    "decode_image",
    "decode_raw_tensor",
    "detect_format",
    "encode_raw_tensor",
    "encode_visualization",
    "expand_channels",
    "extract_contrast_direct",
    "extract_contrast_fused",
    "finalize",
    "matrix_for",
    "preprocess",
    "process_dataset",
    "read_raw",
    "write_raw",
]
