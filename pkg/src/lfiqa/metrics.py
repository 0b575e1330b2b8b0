"""Full-reference metrics, score ingestion and direction normalisation.

SSIM, MS-SSIM and GMSD are computed natively on luma planes. Any other
metric (FSIM, VSI, VMAF, ...) enters as a precomputed :class:`ScoreSet`.
Everything is finally normalised to a :class:`SimilarityScore` in [0, 1],
where 1 means "identical".
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

import numpy as np

from . import kernels
from .imageio import LumaImage


MS_SSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
GMSD_C = 170.0


class Direction(str, enum.Enum):
    SIMILARITY = "similarity-higher-better"
    DISTORTION = "distortion-lower-better"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        key = text.strip().lower()
        aliases = {
            "similarity": cls.SIMILARITY, "higher": cls.SIMILARITY,
            "higher-better": cls.SIMILARITY, cls.SIMILARITY.value: cls.SIMILARITY,
            "distortion": cls.DISTORTION, "lower": cls.DISTORTION,
            "lower-better": cls.DISTORTION, cls.DISTORTION.value: cls.DISTORTION,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown score direction {text!r}") from None


class DimensionError(ValueError):
    """Image pair has mismatched or too-small dimensions."""


class ScoreRangeError(ValueError):
    """An ingested score lies outside the declared native range."""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ScaleFallbackWarning(UserWarning):
    """MS-SSIM ran with fewer than five scales because the image is small."""


@dataclass(frozen=True)
class MetricKind:
    name: str
    direction: Direction
    native_range: Tuple[float, float]

    def __post_init__(self):
        lo, hi = (float(v) for v in self.native_range)
        if not lo <= hi or not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"empty native range {self.native_range}")
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "native_range", (lo, hi))

    @classmethod
    def ingested(cls, label: str, direction, native_range) -> "MetricKind":
        if label in NATIVE_KINDS:
            raise ValueError(f"{label!r} names a native metric")
        if not isinstance(direction, Direction):
            direction = Direction.parse(direction)
        return cls(label, direction, native_range)


SSIM = MetricKind("ssim", Direction.SIMILARITY, (-1.0, 1.0))
MS_SSIM = MetricKind("ms_ssim", Direction.SIMILARITY, (0.0, 1.0))
GMSD = MetricKind("gmsd", Direction.DISTORTION, (0.0, 1.0))
NATIVE_KINDS = {k.name: k for k in (SSIM, MS_SSIM, GMSD)}


@dataclass(frozen=True)
class MetricScore:
    kind: MetricKind
    value: float
    pair: Tuple[str, str] = ("", "")


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    source_kind: MetricKind

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"similarity {self.value} outside [0, 1]")


@dataclass(frozen=True)
class SsimParams:
    window_size: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 255.0
    auto_downsample: bool = True

    def __post_init__(self):
        if self.window_size < 1 or self.window_size % 2 == 0:
            raise ValueError("window_size must be a positive odd integer")
        if not (self.sigma > 0 and self.k1 > 0 and self.k2 > 0 and self.dynamic_range > 0):
            raise ValueError("sigma, k1, k2 and dynamic_range must be positive")

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2


def gaussian_taps(size: int, sigma: float) -> np.ndarray:
    """Normalised 1-D Gaussian taps; their outer product is the 2-D window."""
    r = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-(r * r) / (2.0 * sigma * sigma))
    return g / g.sum()


def _planes(ref, dist):
    x = ref.data if isinstance(ref, LumaImage) else np.asarray(ref, dtype=np.float64)
    y = dist.data if isinstance(dist, LumaImage) else np.asarray(dist, dtype=np.float64)
    if x.ndim != 2 or y.ndim != 2:
        raise DimensionError("expected 2-D luma planes")
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x, y


def downsample_factor(height: int, width: int) -> int:
    """max(1, round(min(H, W) / 256)), rounding halves up."""
    return max(1, int(math.floor(min(height, width) / 256.0 + 0.5)))


def ssim(ref, dist, params: SsimParams = SsimParams(), pair=("", "")):
    """Mean SSIM over all fully-contained Gaussian windows.

    Returns ``(MetricScore, window_map)`` where ``window_map`` is the 2-D
    array of per-window SSIM values; the score is its arithmetic mean.
    """
    x, y = _planes(ref, dist)
    if params.auto_downsample:
        f = downsample_factor(*x.shape)
        if f > 1:
            x = kernels.block_mean(x, f)
            y = kernels.block_mean(y, f)
    k = params.window_size
    if min(x.shape) < k:
        raise DimensionError(f"image {x.shape} smaller than the {k}x{k} window")
    g = gaussian_taps(k, params.sigma)
    smap, _ = kernels.ssim_maps(x, y, g, params.c1, params.c2)
    return MetricScore(SSIM, float(smap.mean()), tuple(pair)), smap


def ms_ssim_scales(height: int, width: int, window_size: int = 11, max_scales: int = 5) -> int:
    """Largest scale count (at most ``max_scales``) the image size supports."""
    n = 0
    h, w = height, width
    while n < max_scales and min(h, w) >= window_size:
        n += 1
        h, w = h // 2, w // 2
    return n


def ms_ssim(ref, dist, params: SsimParams = SsimParams(), pair=("", "")) -> MetricScore:
    """Five-scale SSIM on a 2x2 mean pyramid.

    Contrast-structure means at the finer scales and the full SSIM mean at
    the coarsest scale are raised to the standard exponents and multiplied.
    Negative pooled terms are clipped to zero before exponentiation.

    The pyramid replaces the single-scale auto-downsampling, so
    ``params.auto_downsample`` is ignored here. Images too small for five
    scales fall back to fewer scales with the leading exponents
    renormalised to sum to one; a :class:`ScaleFallbackWarning` is issued.
    """
    x, y = _planes(ref, dist)
    k = params.window_size
    n = ms_ssim_scales(*x.shape, window_size=k)
    if n == 0:
        raise DimensionError(f"image {x.shape} smaller than the {k}x{k} window")
    weights = np.asarray(MS_SSIM_WEIGHTS, dtype=np.float64)
    if n < len(weights):
        weights = weights[:n] / weights[:n].sum()
        msg = f"ms_ssim: image {x.shape} supports only {n} scale(s); exponents renormalised"
        warnings.warn(msg, ScaleFallbackWarning, stacklevel=2)
    g = gaussian_taps(k, params.sigma)
    value = 1.0
    for level in range(n):
        if level > 0:
            x = kernels.block_mean(x, 2)
            y = kernels.block_mean(y, 2)
        smap, cs = kernels.ssim_maps(x, y, g, params.c1, params.c2)
        term = smap.mean() if level == n - 1 else cs.mean()
        value *= max(float(term), 0.0) ** weights[level]
    return MetricScore(MS_SSIM, float(value), tuple(pair))


def gmsd(ref, dist, pair=("", "")) -> MetricScore:
    """Population standard deviation of the gradient-magnitude similarity map.

    Both images are 2x2 mean pooled first; gradients use 3x3 Prewitt
    kernels (scaled by 1/3) over the valid region, with c = 170.
    """
    x, y = _planes(ref, dist)
    if min(x.shape) < 6:
        raise DimensionError(f"image {x.shape} too small for gmsd (need at least 6x6)")
    x = kernels.block_mean(x, 2)
    y = kernels.block_mean(y, 2)
    gms = kernels.gms_map(x, y, GMSD_C)
    return MetricScore(GMSD, float(gms.std()), tuple(pair))


def gms_map(ref, dist) -> np.ndarray:
    """The similarity map that :func:`gmsd` summarises."""
    x, y = _planes(ref, dist)
    return kernels.gms_map(kernels.block_mean(x, 2), kernels.block_mean(y, 2), GMSD_C)


@dataclass(frozen=True)
class ScoreSet:
    kind: MetricKind
    entries: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.kind.native_range
        for key, value in self.entries.items():
            if not lo <= value <= hi:
                raise ScoreRangeError(f"{key}: score {value} outside [{lo}, {hi}]")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    @property
    def metric_label(self) -> str:
        return self.kind.name

    @property
    def direction(self) -> Direction:
        return self.kind.direction

    @property
    def native_range(self):
        return self.kind.native_range

    def __len__(self):
        return len(self.entries)

    def __contains__(self, distorted_id):
        return distorted_id in self.entries

    def score(self, distorted_id: str) -> Optional[MetricScore]:
        value = self.entries.get(distorted_id)
        if value is None:
            return None
        return MetricScore(self.kind, value, ("", distorted_id))


def ingest_scores(path, metric_label: str, direction, native_range) -> ScoreSet:
    """Load a ``distorted_id,score`` CSV into a :class:`ScoreSet`.

    Rows are numbered from 1 at the header line, so the first data row is
    row 2.
    """
    kind = MetricKind.ingested(metric_label, direction, native_range)
    lo, hi = kind.native_range
    entries = {}
    with open(path, "r", encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return ScoreSet(kind, {})
        if [h.strip() for h in header] != ["distorted_id", "score"]:
            raise ScoreRangeError("header must be 'distorted_id,score'", 1)
        for row_no, row in enumerate(reader, start=2):
            if not any(c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ScoreRangeError(f"expected 2 fields, got {len(row)}", row_no)
            key = row[0].strip()
            try:
                value = float(row[1])
            except ValueError:
                raise ScoreRangeError(f"score {row[1]!r} is not a number", row_no) from None
            if not key:
                raise ScoreRangeError("empty distorted_id", row_no)
            if not (math.isfinite(value) and lo <= value <= hi):
                raise ScoreRangeError(f"score {value} outside [{lo}, {hi}]", row_no)
            if key in entries:
                raise ScoreRangeError(f"duplicate distorted_id {key!r}", row_no)
            entries[key] = value
    return ScoreSet(kind, entries)


def to_similarity(value: float, kind: MetricKind) -> float:
    """Map a raw score onto [0, 1] with 1 = identical.

    The raw value is divided by the upper bound of the native range and
    clipped to [0, 1]; distortion scores are then flipped. This makes a
    [0, 1] similarity the identity, a [0, 100] score (VMAF) ``v / 100``,
    SSIM's negative tail 0, and GMSD ``1 - v``.
    """
    hi = kind.native_range[1]
    if hi <= 0:
        raise ValueError(f"{kind.name}: native range upper bound must be positive")
    s = min(max(value / hi, 0.0), 1.0)
    if kind.direction is Direction.DISTORTION:
        s = 1.0 - s
    return s


def normalize_direction(score: MetricScore) -> SimilarityScore:
    return SimilarityScore(to_similarity(score.value, score.kind), score.kind)


def score_pair(metric: str, ref, dist, params: SsimParams = SsimParams(), pair=("", "")):
    """Run a native metric by name; returns ``(MetricScore, window_map or None)``."""
    if metric == "ssim":
        return ssim(ref, dist, params, pair)
    if metric == "ms_ssim":
        return ms_ssim(ref, dist, params, pair), None
    if metric == "gmsd":
        return gmsd(ref, dist, pair), None
    raise ValueError(f"unknown native metric {metric!r}")
