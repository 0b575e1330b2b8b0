"""Scoring every record of a manifest with native or ingested metrics."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional

from .imageio import DatasetManifest, ImageDecodeError, load_image, resolve_image
from .lf import LfScore, lf_per_window
from .metrics import (DimensionError, NATIVE_KINDS, ScoreSet, SimilarityScore, SsimParams,
                      normalize_direction, score_pair)

log = logging.getLogger(__name__)

REFERENCE_DIRS = ("reference_images", "references", "ref")
DISTORTED_DIRS = ("distorted_images", "distorted", "dist")


@dataclass
class ScoredColumn:
    """Similarity (and optional per-window LF) scores of one metric."""

    label: str
    similarities: Dict[str, SimilarityScore]
    per_window_lf: Optional[Dict[str, LfScore]] = None
    failures: int = 0


def from_score_set(score_set: ScoreSet) -> ScoredColumn:
    sims = {k: normalize_direction(score_set.score(k)) for k in sorted(score_set.entries)}
    return ScoredColumn(score_set.metric_label, sims)


def score_manifest(manifest: DatasetManifest, metric: str, image_root=None,
                   params: SsimParams = SsimParams(), per_window_variant=None,
                   workers: int = 1) -> ScoredColumn:
    """Compute a native metric for every record whose images can be found.

    Unreadable or missing images and dimension errors are logged and the
    record is left out. ``per_window_variant`` (SSIM only) additionally
    collects the per-window LF score of each pair.
    """
    if metric not in NATIVE_KINDS:
        raise ValueError(f"unknown native metric {metric!r}")
    if per_window_variant is not None and metric != "ssim":
        raise ValueError("per-window LF is only available for ssim")
    root = Path(image_root if image_root is not None else manifest.root_path or ".")
    listing_cache: dict = {}
    by_ref: Dict[str, list] = {}
    for rec in manifest:
        by_ref.setdefault(rec.reference_id, []).append(rec)

    def run_reference(ref_id):
        out = []
        ref_path = resolve_image(root, ref_id, REFERENCE_DIRS, listing_cache)
        if ref_path is None:
            log.warning("%s: reference image %s not found under %s", metric, ref_id, root)
            return out, len(by_ref[ref_id])
        try:
            ref_img = load_image(ref_path)
        except ImageDecodeError as exc:
            log.warning("%s: %s", metric, exc)
            return out, len(by_ref[ref_id])
        failures = 0
        for rec in by_ref[ref_id]:
            dist_path = resolve_image(root, rec.distorted_id, DISTORTED_DIRS, listing_cache)
            if dist_path is None:
                log.warning("%s: distorted image %s not found", metric, rec.distorted_id)
                failures += 1
                continue
            try:
                dist_img = load_image(dist_path)
                score, window_map = score_pair(metric, ref_img, dist_img, params,
                                               (rec.reference_id, rec.distorted_id))
            except (ImageDecodeError, DimensionError) as exc:
                log.warning("%s: %s: %s", metric, rec.distorted_id, exc)
                failures += 1
                continue
            sim = normalize_direction(score)
            lf = None
            if per_window_variant is not None:
                lf = lf_per_window(window_map, per_window_variant, sim)
            out.append((rec.distorted_id, sim, lf))
        return out, failures

    refs = sorted(by_ref)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_reference, refs))
    else:
        results = [run_reference(r) for r in refs]

    sims, lfs, failures = {}, {}, 0
    for items, failed in results:
        failures += failed
        for key, sim, lf in items:
            sims[key] = sim
            if lf is not None:
                lfs[key] = lf
    ordered = dict(sorted(sims.items()))
    per_window = dict(sorted(lfs.items())) if per_window_variant is not None else None
    return ScoredColumn(metric, ordered, per_window, failures)
