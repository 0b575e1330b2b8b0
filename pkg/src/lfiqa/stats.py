"""Correlation with MOS, quality grouping and discrimination resolution."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .imageio import DatasetManifest, DatasetRecord
from .lf import DEFAULT_VARIANT, LfMode, LfScore, LfVariant, lf_values
from .metrics import SimilarityScore

log = logging.getLogger(__name__)

GROUP_LABELS = ("bad", "middle", "good")
DEFAULT_BOUNDS = (0.242, 3.94, 5.25)
DEFAULT_TARGETS = {"good": 6.0, "middle": 4.0, "bad": 2.0}
PROBE_PAIRS = (("good", "middle"), ("middle", "bad"))


class CorrelationError(ValueError):
    """Pearson correlation is undefined for the given series."""


def plcc(xs, ys) -> float:
    """Pearson linear correlation coefficient."""
    x = np.asarray(xs, dtype=np.float64).ravel()
    y = np.asarray(ys, dtype=np.float64).ravel()
    if x.size != y.size:
        raise CorrelationError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise CorrelationError("need at least two pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise CorrelationError("constant series")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class QualityGroup:
    label: str
    mos_bounds: Tuple[float, float]
    members: Tuple[DatasetRecord, ...]
    # records pulled in from below the lowest bound (bad group only)
    below_range: int = 0

    def __len__(self):
        return len(self.members)


def group_by_quality(manifest: DatasetManifest, bounds: Optional[Sequence[float]] = None
                     ) -> Dict[str, QualityGroup]:
    """Split a manifest into bad / middle / good groups.

    ``bounds`` is ``(low, bad_upper, middle_upper)``; intervals are
    half-open with the upper edge inclusive: bad = (low, bad_upper],
    middle = (bad_upper, middle_upper], good = (middle_upper, max].
    Records at or below ``low`` are counted into bad with a warning.
    """
    low, b1, b2 = DEFAULT_BOUNDS if bounds is None else tuple(float(b) for b in bounds)
    if not low < b1 < b2:
        raise ValueError(f"group bounds must increase: {(low, b1, b2)}")
    top = manifest.mos_scale_max
    buckets = {label: [] for label in GROUP_LABELS}
    below = 0
    for rec in manifest:
        if rec.mos <= b1:
            buckets["bad"].append(rec)
            if rec.mos <= low:
                below += 1
        elif rec.mos <= b2:
            buckets["middle"].append(rec)
        else:
            buckets["good"].append(rec)
    if below:
        log.warning("%d record(s) with MOS <= %g assigned to the bad group", below, low)
    return {
        "bad": QualityGroup("bad", (low, b1), tuple(buckets["bad"]), below),
        "middle": QualityGroup("middle", (b1, b2), tuple(buckets["middle"])),
        "good": QualityGroup("good", (b2, top), tuple(buckets["good"])),
    }


@dataclass(frozen=True)
class ProbeSet:
    label: str
    target_mos: float
    members: Tuple[Tuple[DatasetRecord, SimilarityScore, LfScore], ...]

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def averages(self) -> Tuple[float, float, float]:
        """(mean MOS, mean raw similarity, mean LF score)."""
        mos = [m[0].mos for m in self.members]
        raw = [m[1].value for m in self.members]
        lf = [m[2].value for m in self.members]
        return (math.fsum(mos) / len(mos), math.fsum(raw) / len(raw), math.fsum(lf) / len(lf))


class ProbeError(ValueError):
    """Not enough scored records to form a probe set."""


def _probe_member(rec, sim, variant, lf_scores):
    if lf_scores is not None and rec.distorted_id in lf_scores:
        return rec, sim, lf_scores[rec.distorted_id]
    value = float(lf_values(sim.value, variant))
    return rec, sim, LfScore(value, LfVariant(variant), LfMode.FINAL, sim)


def select_probe_set(group: QualityGroup, target_mos: float, n: int,
                     scores: Mapping[str, SimilarityScore], variant=DEFAULT_VARIANT,
                     lf_scores: Optional[Mapping[str, LfScore]] = None) -> ProbeSet:
    """The ``n`` scored members whose MOS is nearest ``target_mos``.

    Ties are broken by ascending ``distorted_id``. ``lf_scores`` overrides
    the final-score LF mapping (e.g. with per-window LF values).
    """
    if n < 1:
        raise ProbeError("probe size must be at least 1")
    scored = [r for r in group.members if r.distorted_id in scores]
    if len(scored) < n:
        raise ProbeError(
            f"{group.label}: {len(scored)} scored record(s), {n} requested")
    scored.sort(key=lambda r: (abs(r.mos - target_mos), r.distorted_id))
    members = tuple(_probe_member(r, scores[r.distorted_id], variant, lf_scores)
                    for r in scored[:n])
    return ProbeSet(group.label, float(target_mos), members)


def probe_set_from_ids(label: str, records: Sequence[DatasetRecord],
                       scores: Mapping[str, SimilarityScore], variant=DEFAULT_VARIANT,
                       target_mos: float = float("nan"),
                       lf_scores: Optional[Mapping[str, LfScore]] = None) -> ProbeSet:
    """Probe set made of exactly the given records (explicit probe lists)."""
    missing = [r.distorted_id for r in records if r.distorted_id not in scores]
    if missing:
        raise ProbeError(f"{label}: no score for {', '.join(missing)}")
    if not records:
        raise ProbeError(f"{label}: empty probe list")
    return ProbeSet(label, target_mos,
                    tuple(_probe_member(r, scores[r.distorted_id], variant, lf_scores)
                          for r in records))


def discrimination_resolution(mean_a: float, mean_b: float, scale_range: float) -> float:
    if not scale_range > 0:
        raise ValueError("scale_range must be positive")
    return abs(mean_a - mean_b) / scale_range


@dataclass(frozen=True)
class ResolutionRow:
    pair: str
    mos_resolution: float
    raw_resolution: float
    lf_resolution: float


@dataclass(frozen=True)
class PrecisionReport:
    rows: Tuple[ResolutionRow, ...]
    probes: Mapping[str, ProbeSet] = field(default_factory=dict)


def build_precision_report(probes: Mapping[str, ProbeSet], mos_scale_max: float) -> PrecisionReport:
    rows = []
    for a, b in PROBE_PAIRS:
        ma, sa, la = probes[a].averages
        mb, sb, lb = probes[b].averages
        rows.append(ResolutionRow(
            f"{a}-{b}",
            discrimination_resolution(ma, mb, mos_scale_max),
            discrimination_resolution(sa, sb, 1.0),
            discrimination_resolution(la, lb, 1.0),
        ))
    return PrecisionReport(tuple(rows), dict(probes))


@dataclass(frozen=True)
class ReportRow:
    metric: str
    plcc_raw: float
    plcc_lf: float
    n_pairs: int
    n_skipped: int = 0
    error: Optional[str] = None


@dataclass(frozen=True)
class EvaluationReport:
    dataset: str
    lf_variant: Optional[LfVariant]
    rows: Tuple[ReportRow, ...]

    def row(self, metric: str) -> ReportRow:
        for r in self.rows:
            if r.metric == metric:
                return r
        raise KeyError(metric)


def paired_series(manifest: DatasetManifest, scores: Mapping[str, float]):
    """(ids, mos, scores) over records that have a score, sorted by id."""
    ids = sorted(r.distorted_id for r in manifest if r.distorted_id in scores)
    mos = np.array([manifest.get(i).mos for i in ids], dtype=np.float64)
    vals = np.array([scores[i] for i in ids], dtype=np.float64)
    return ids, mos, vals


def _as_value(s):
    return s.value if isinstance(s, (SimilarityScore, LfScore)) else float(s)


def build_evaluation_report(manifest: DatasetManifest,
                            metric_scores: Mapping[str, Mapping[str, object]],
                            lf_variant=DEFAULT_VARIANT, dataset: str = "",
                            lf_scores: Optional[Mapping[str, Mapping[str, object]]] = None
                            ) -> EvaluationReport:
    """PLCC against MOS for each metric, before and after the LF mapping.

    ``metric_scores`` maps metric label -> {distorted_id: similarity}.
    ``lf_scores`` optionally supplies precomputed LF values for a metric
    (per-window mode); otherwise LF is applied to the similarity, and
    ``lf_variant=None`` leaves the LF column as NaN. Records
    missing a score are skipped for that metric only. A metric whose
    correlation is undefined gets a row with ``error`` set and NaN values.
    """
    variant = LfVariant(lf_variant) if lf_variant is not None else None
    rows = []
    for label, raw in metric_scores.items():
        sims = {k: _as_value(v) for k, v in raw.items()}
        ids, mos, vals = paired_series(manifest, sims)
        skipped = len(manifest) - len(ids)
        if skipped:
            log.info("%s: %d record(s) without a score skipped", label, skipped)
        try:
            raw_r = plcc(mos, vals)
            if variant is None:
                lf_r = math.nan
            elif lf_scores is not None and label in lf_scores:
                lf_vals = [_as_value(lf_scores[label][i]) for i in ids]
                lf_r = plcc(mos, lf_vals)
            else:
                lf_r = plcc(mos, lf_values(vals, variant))
            rows.append(ReportRow(label, raw_r, lf_r, len(ids), skipped))
        except CorrelationError as exc:
            log.error("%s: %s", label, exc)
            rows.append(ReportRow(label, math.nan, math.nan, len(ids), skipped, str(exc)))
    return EvaluationReport(dataset, variant, tuple(rows))


@dataclass(frozen=True)
class ScatterRow:
    distorted_id: str
    objective_score: float
    mos: float


def scatter_export(manifest: DatasetManifest, scores: Mapping[str, object],
                   lf_variant=None) -> List[ScatterRow]:
    """Rows of (id, objective score, MOS) sorted by id.

    With ``lf_variant=None`` the objective score is the similarity itself;
    otherwise it is the LF-mapped similarity.
    """
    sims = {k: _as_value(v) for k, v in scores.items()}
    ids, mos, vals = paired_series(manifest, sims)
    if lf_variant is not None:
        vals = lf_values(vals, lf_variant)
    return [ScatterRow(i, float(v), float(m)) for i, v, m in zip(ids, vals, mos)]
