"""Luma decoding and dataset manifests.

Images are decoded with Pillow and converted to a float64 luma plane using
BT.601 weights, without rounding back to integers. Manifests come in two
flavours: TID-style ``<mos> <filename>`` lines and a generic CSV.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

LUMA_WEIGHTS = (0.299, 0.587, 0.114)
MANIFEST_FORMATS = ("tid-mos-names", "generic-csv")
_SUPPORTED_FORMATS = {"BMP", "PNG"}


class ImageDecodeError(ValueError):
    """An image file could not be turned into a luma plane."""


class ManifestError(ValueError):
    """A manifest file is malformed; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class LumaImage:
    """Single-channel image plane with samples in [0, 255].

    ``data`` is a read-only float64 array of shape (height, width).
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"luma plane must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("luma plane has a zero dimension")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 255.0:
            raise ValueError("luma samples must lie in [0, 255]")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, LumaImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None


def rgb_to_luma(rgb) -> np.ndarray:
    """BT.601 luma of an (H, W, 3) array, kept as float64."""
    rgb = np.asarray(rgb, dtype=np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    return wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2]


def load_image(path) -> LumaImage:
    """Decode a BMP or PNG file into a :class:`LumaImage`.

    Grayscale files pass through unchanged; RGB (and palette) files are
    converted with BT.601 weights. An alpha channel is ignored.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in _SUPPORTED_FORMATS:
                raise ImageDecodeError(f"{path}: unsupported format {fmt!r}")
            im.load()
            mode = im.mode
            if mode in ("L", "LA", "1"):
                arr = np.asarray(im.convert("L"), dtype=np.float64)
            elif mode in ("RGB", "RGBA", "P", "PA"):
                arr = rgb_to_luma(np.asarray(im.convert("RGB")))
            else:
                raise ImageDecodeError(f"{path}: unsupported pixel mode {mode!r}")
    except (OSError, UnidentifiedImageError) as exc:
        if isinstance(exc, ImageDecodeError):
            raise
        raise ImageDecodeError(f"{path}: cannot read image ({exc})") from exc
    if arr.ndim != 2 or arr.size == 0:
        raise ImageDecodeError(f"{path}: zero-dimension image")
    return LumaImage(arr)


@dataclass(frozen=True)
class DatasetRecord:
    reference_id: str
    distorted_id: str
    mos: float
    mos_scale_max: float
    distortion_tag: Optional[str] = None

    def __post_init__(self):
        if not self.reference_id or not self.distorted_id:
            raise ValueError("reference_id and distorted_id must be nonempty")
        if not (0.0 <= self.mos <= self.mos_scale_max):
            raise ValueError(
                f"mos {self.mos} outside [0, {self.mos_scale_max}] for {self.distorted_id}")


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple
    mos_scale_max: float
    root_path: Optional[Path] = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        records = tuple(self.records)
        index = {}
        for rec in records:
            if rec.mos_scale_max != self.mos_scale_max:
                raise ValueError(f"{rec.distorted_id}: mos_scale_max differs from manifest")
            if rec.distorted_id in index:
                raise ValueError(f"duplicate distorted_id {rec.distorted_id!r}")
            index[rec.distorted_id] = rec
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def get(self, distorted_id):
        return self._index.get(distorted_id)

    def subset(self, distorted_ids: Iterable[str]) -> "DatasetManifest":
        keep = set(distorted_ids)
        return DatasetManifest(tuple(r for r in self.records if r.distorted_id in keep),
                               self.mos_scale_max, self.root_path)


def tid_reference_id(filename: str) -> str:
    """``i03_08_1.bmp`` -> ``i03``: everything before the first underscore."""
    if "_" in filename:
        return filename.split("_", 1)[0]
    return os.path.splitext(filename)[0]


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    return text.lstrip("﻿")


def _check_mos(value: str, scale: float, line: int) -> float:
    try:
        mos = float(value)
    except ValueError:
        raise ManifestError(f"MOS {value!r} is not a number", line) from None
    if not np.isfinite(mos) or not (0.0 <= mos <= scale):
        raise ManifestError(f"MOS {mos} outside [0, {scale}]", line)
    return mos


def _build(records, scale, root, lines):
    seen = {}
    for rec, line in zip(records, lines):
        if rec.distorted_id in seen:
            raise ManifestError(
                f"duplicate distorted_id {rec.distorted_id!r} (first on line {seen[rec.distorted_id]})",
                line)
        seen[rec.distorted_id] = line
    return DatasetManifest(tuple(records), scale, root)


def _parse_tid(text, scale, root):
    records, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2 or not parts[1].strip():
            raise ManifestError("expected '<mos> <filename>'", lineno)
        mos = _check_mos(parts[0], scale, lineno)
        name = parts[1].strip()
        records.append(DatasetRecord(tid_reference_id(name), name, mos, scale))
        lines.append(lineno)
    return _build(records, scale, root, lines)


def _parse_csv(text, scale, root):
    rows = list(csv.reader(io.StringIO(text)))
    rows_with_lines = [(i, r) for i, r in enumerate(rows, start=1) if any(c.strip() for c in r)]
    if not rows_with_lines:
        return DatasetManifest((), scale, root)
    header_line, header = rows_with_lines[0]
    header = [h.strip() for h in header]
    if header[:3] != ["reference_id", "distorted_id", "mos"] or len(header) > 4 or (
            len(header) == 4 and header[3] != "distortion_tag"):
        raise ManifestError(
            "header must be reference_id,distorted_id,mos[,distortion_tag]", header_line)
    records, lines = [], []
    for lineno, row in rows_with_lines[1:]:
        if len(row) != len(header):
            raise ManifestError(f"expected {len(header)} fields, got {len(row)}", lineno)
        ref, dist = row[0].strip(), row[1].strip()
        if not ref or not dist:
            raise ManifestError("empty reference_id or distorted_id", lineno)
        mos = _check_mos(row[2].strip(), scale, lineno)
        tag = (row[3].strip() or None) if len(row) == 4 else None
        records.append(DatasetRecord(ref, dist, mos, scale, tag))
        lines.append(lineno)
    return _build(records, scale, root, lines)


def parse_manifest(path, format: str = "tid-mos-names", mos_scale_max: float = 8.0,
                   root_path=None) -> DatasetManifest:
    """Read a manifest file.

    ``root_path`` defaults to the manifest's directory and is only used to
    locate image files later.
    """
    if format not in MANIFEST_FORMATS:
        raise ValueError(f"unknown manifest format {format!r}")
    if not mos_scale_max > 0:
        raise ValueError("mos_scale_max must be positive")
    path = Path(path)
    text = _read_text(path)
    root = Path(root_path) if root_path is not None else path.parent
    if format == "tid-mos-names":
        return _parse_tid(text, float(mos_scale_max), root)
    return _parse_csv(text, float(mos_scale_max), root)


def serialize_manifest(manifest: DatasetManifest, format: str = "generic-csv") -> str:
    if format == "tid-mos-names":
        return "".join(f"{rec.mos!r} {rec.distorted_id}\n" for rec in manifest.records)
    if format != "generic-csv":
        raise ValueError(f"unknown manifest format {format!r}")
    with_tag = any(rec.distortion_tag is not None for rec in manifest.records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["reference_id", "distorted_id", "mos"] + (["distortion_tag"] if with_tag else [])
    writer.writerow(header)
    for rec in manifest.records:
        row = [rec.reference_id, rec.distorted_id, repr(rec.mos)]
        if with_tag:
            row.append(rec.distortion_tag or "")
        writer.writerow(row)
    return buf.getvalue()


def write_manifest(manifest: DatasetManifest, path, format: str = "generic-csv") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(serialize_manifest(manifest, format))


_IMAGE_EXTS = (".bmp", ".png")


def _listing(directory: Path, cache: dict):
    if directory not in cache:
        try:
            cache[directory] = {p.name.lower(): p for p in directory.iterdir() if p.is_file()}
        except OSError:
            cache[directory] = {}
    return cache[directory]


def resolve_image(root, name: str, subdirs: Sequence[str] = (), _cache=None) -> Optional[Path]:
    """Find ``name`` under ``root`` (or one of ``subdirs``), case-insensitively.

    ``name`` may be a bare stem such as ``i01``; ``.bmp`` and ``.png`` are
    then tried.
    """
    cache = {} if _cache is None else _cache
    root = Path(root)
    wanted = [name.lower()]
    if not name.lower().endswith(_IMAGE_EXTS):
        wanted += [name.lower() + ext for ext in _IMAGE_EXTS]
    for directory in [root / s for s in subdirs] + [root]:
        listing = _listing(directory, cache)
        for w in wanted:
            if w in listing:
                return listing[w]
    return None
