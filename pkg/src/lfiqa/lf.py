"""The fixed logistic remapping of similarity scores.

Three variants are provided::

    eq1: 1 - (1 - s) ** (1/2)      (default)
    eq2: 1 - (1 - s**2) ** (1/2)
    eq3: 1 - (1 - s**2) ** (1/3)

Each is evaluated in a cancellation-free form (``1 - r**p`` rewritten as
``(1 - r) / (1 + r**p + ...)``) so that tiny and near-one inputs stay
strictly ordered in floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .metrics import SimilarityScore


class LfVariant(str, enum.Enum):
    EQ1 = "eq1"
    EQ2 = "eq2"
    EQ3 = "eq3"


class LfMode(str, enum.Enum):
    FINAL = "final"
    PER_WINDOW = "per-window"


DEFAULT_VARIANT = LfVariant.EQ1


def lf_values(s, variant=DEFAULT_VARIANT):
    """Vectorised remapping of similarity values already in [0, 1]."""
    variant = LfVariant(variant)
    s = np.asarray(s, dtype=np.float64)
    if np.any(~((s >= 0.0) & (s <= 1.0))):
        raise ValueError("LF input must lie in [0, 1]")
    if variant is LfVariant.EQ1:
        return s / (1.0 + np.sqrt(1.0 - s))
    s2 = s * s
    if variant is LfVariant.EQ2:
        return s2 / (1.0 + np.sqrt((1.0 - s) * (1.0 + s)))
    c = np.cbrt((1.0 - s) * (1.0 + s))
    return s2 / (1.0 + c + c * c)


@dataclass(frozen=True)
class LfScore:
    value: float
    variant: LfVariant
    mode: LfMode
    source: Optional[SimilarityScore] = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"LF value {self.value} outside [0, 1]")


def lf_map(s: SimilarityScore, variant=DEFAULT_VARIANT) -> LfScore:
    value = float(lf_values(s.value, variant))
    return LfScore(value, LfVariant(variant), LfMode.FINAL, s)


def lf_per_window(window_map, variant=DEFAULT_VARIANT, source=None) -> LfScore:
    """Clip each window's SSIM to [0, 1], remap it, then mean-pool."""
    w = np.asarray(window_map, dtype=np.float64).ravel()
    if w.size == 0:
        raise ValueError("empty window map")
    mapped = lf_values(np.clip(w, 0.0, 1.0), variant)
    value = min(max(float(mapped.mean()), 0.0), 1.0)
    return LfScore(value, LfVariant(variant), LfMode.PER_WINDOW, source)
