"""End-to-end preprocessing: configuration, single images, and batch runs.

A run is fully described by a small flat config (variant, depth, border,
output formats, channel handling) that serializes to ``key=value`` text.
Batch processing walks a manifest of input files, preprocesses each image
independently (optionally in parallel) and writes one artifact per
configured output format. Failures are collected per entry rather than
aborting the batch, and output bytes do not depend on the level of
parallelism.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .blur import BorderPolicy, build_blur_stack
from .codecs import decode_image, encode_visualization
from .contrast import build_fused_kernel, expand_channels, extract_contrast_fused
from .errors import ConfigError, RetinaPrepError
from .image import ImagePlanar
from .pnm import encode_pfm
from .rawtensor import encode_raw_tensor
from .reparam import ReparamVariant, matrix_for

DEFAULT_DEPTH = 5


class OutputFormat(Enum):
    RAW = "raw"
    PFM = "pfm"
    PNG_VIS = "png-vis"
    ALL = "all"

    @classmethod
    def from_name(cls, name: str) -> "OutputFormat":
        try:
            return cls(name)
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise ConfigError(f"unknown output format {name!r} (want one of: {names})") from None


_EXTENSIONS = {
    OutputFormat.RAW: ".rtens",
    OutputFormat.PFM: ".pfm",
    OutputFormat.PNG_VIS: ".vis.png",
}


@dataclass(frozen=True)
class PreprocessConfig:
    variant: ReparamVariant
    depth: int = DEFAULT_DEPTH
    border: BorderPolicy = BorderPolicy.REPLICATE
    output: OutputFormat = OutputFormat.RAW
    expand_to_three: bool = False

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ConfigError(f"depth must be >= 0, got {self.depth}")

    def serialize(self) -> str:
        lines = [
            f"variant={self.variant.kind.value}",
            f"channels={self.variant.grayscale_channels}",
            f"depth={self.depth}",
            f"border={self.border.value}",
            f"output={self.output.value}",
        ]
        if self.expand_to_three:
            lines.append("expand=true")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "PreprocessConfig":
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
        unknown = set(values) - {"variant", "channels", "depth", "border", "output", "expand"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "variant" not in values:
            raise ConfigError("config is missing the 'variant' key")
        try:
            variant = ReparamVariant.from_name(
                values["variant"], int(values.get("channels", "3"))
            )
            depth = int(values.get("depth", str(DEFAULT_DEPTH)))
            border = BorderPolicy.from_name(values.get("border", "replicate"))
            output = OutputFormat.from_name(values.get("output", "raw"))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        expand = values.get("expand", "false").lower() in ("true", "1", "yes")
        return cls(variant, depth, border, output, expand)


def preprocess(img: ImagePlanar, cfg: PreprocessConfig) -> ImagePlanar:
    """Blur stack + fused contrast reduction (+ optional channel expansion)."""
    stack = build_blur_stack(img, cfg.depth, cfg.border)
    kernel = build_fused_kernel(matrix_for(cfg.variant), cfg.depth)
    out = extract_contrast_fused(stack, kernel)
    if out.channels == 1 and cfg.expand_to_three:
        out = expand_channels(out)
    return out


class DatasetManifest:
    """Input files paired with relative output stems (no duplicates)."""

    __slots__ = ("entries",)

    IMAGE_SUFFIXES = (".png", ".ppm", ".pgm", ".pfm")

    def __init__(self, entries: list[tuple[Path, str]]) -> None:
        stems = [stem for _, stem in entries]
        if len(set(stems)) != len(stems):
            dupes = sorted({s for s in stems if stems.count(s) > 1})
            raise ConfigError(f"duplicate output stems in manifest: {dupes}")
        for stem in stems:
            parts = Path(stem).parts
            if not stem or Path(stem).is_absolute() or ".." in parts:
                raise ConfigError(f"output stem {stem!r} would escape the output directory")
        self.entries = list(entries)

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_directory(cls, root: str | Path) -> "DatasetManifest":
        root = Path(root)
        entries = []
        for path in sorted(root.rglob("*")):
            if path.is_file() and path.suffix.lower() in cls.IMAGE_SUFFIXES:
                stem = path.relative_to(root).with_suffix("").as_posix()
                entries.append((path, stem))
        return cls(entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "DatasetManifest":
        """One entry per line: ``input_path<TAB>output_stem`` (stem optional)."""
        path = Path(path)
        base = path.parent
        entries = []
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) > 2:
                raise ConfigError(f"manifest line {lineno}: expected at most 2 tab-separated fields")
            src = Path(parts[0])
            if not src.is_absolute():
                src = base / src
            stem = parts[1] if len(parts) == 2 else Path(parts[0]).stem
            entries.append((src, stem))
        return cls(entries)


@dataclass
class BatchReport:
    successes: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (stem, reason)
    wall_time_s: float = 0.0
    pixels_per_second: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        return (
            f"{len(self.successes)} succeeded, {len(self.failures)} failed, "
            f"{self.wall_time_s:.2f}s wall, {self.pixels_per_second:,.0f} px/s"
        )


def _formats(cfg: PreprocessConfig) -> list[OutputFormat]:
    if cfg.output is OutputFormat.ALL:
        return [OutputFormat.RAW, OutputFormat.PFM, OutputFormat.PNG_VIS]
    return [cfg.output]


def _process_entry(src: Path, stem: str, cfg: PreprocessConfig, out_dir: Path) -> int:
    img = decode_image(src.read_bytes())
    result = preprocess(img, cfg)
    for fmt in _formats(cfg):
        if fmt is OutputFormat.RAW:
            payload = encode_raw_tensor(result)
        elif fmt is OutputFormat.PFM:
            payload = encode_pfm(result)
        else:
            payload = encode_visualization(result)
        target = out_dir / (stem + _EXTENSIONS[fmt])
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(payload)
    return img.width * img.height


def process_dataset(
    manifest: DatasetManifest,
    cfg: PreprocessConfig,
    out_dir: str | Path,
    parallelism: int = 1,
) -> BatchReport:
    """Preprocess every manifest entry; collect failures instead of raising."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = BatchReport()
    started = time.perf_counter()
    pixels = 0

    def run(entry: tuple[Path, str]):
        src, stem = entry
        try:
            return stem, _process_entry(src, stem, cfg, out_dir), None
        except (RetinaPrepError, OSError, ValueError) as exc:
            return stem, 0, f"{type(exc).__name__}: {exc}"

    if parallelism <= 1:
        results = [run(e) for e in manifest.entries]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run, manifest.entries))

    for stem, npix, error in sorted(results, key=lambda r: r[0]):
        if error is None:
            report.successes.append(stem)
            pixels += npix
        else:
            report.failures.append((stem, error))
    report.wall_time_s = time.perf_counter() - started
    report.pixels_per_second = pixels / report.wall_time_s if report.wall_time_s > 0 else 0.0
    return report
