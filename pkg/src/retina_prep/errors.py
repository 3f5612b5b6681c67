"""Exception hierarchy shared across the package."""


class RetinaPrepError(Exception):
    """Base class for all errors raised by this package."""


class DecodeError(RetinaPrepError, ValueError):
    """Malformed image bytes; the message names the byte offset when known."""


class UnsupportedFormatError(DecodeError):
    """Well-formed file using a feature we deliberately do not handle."""


class FormatError(RetinaPrepError, ValueError):
    """Raw tensor file with a bad magic tag or a header/payload size mismatch."""


class ShapeError(RetinaPrepError, ValueError):
    """Operand dimensions or channel counts do not match the operation."""


class DomainError(RetinaPrepError, ValueError):
    """Image value domain (unit-interval vs signed) does not fit the operation."""


class ConfigError(RetinaPrepError, ValueError):
    """Unparseable or inconsistent preprocessing configuration."""


class LabelError(RetinaPrepError, ValueError):
    """Out-of-range class id in a label map; the message names the pixel."""


class EmptyEvaluationError(RetinaPrepError, ValueError):
    """Metrics requested from a confusion matrix with no accumulated pixels."""
