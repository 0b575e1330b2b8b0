"""Command-line front end: ``lfiqa {score,evaluate,precision,scatter}``."""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from . import export
from .imageio import MANIFEST_FORMATS, ImageDecodeError, ManifestError, load_image, parse_manifest
from .lf import LfMode, LfVariant, lf_map, lf_per_window
from .metrics import (NATIVE_KINDS, DimensionError, ScoreRangeError, SsimParams, ingest_scores,
                      normalize_direction, score_pair)
from .scoring import ScoredColumn, from_score_set, score_manifest
from .stats import (DEFAULT_TARGETS, ProbeError, build_evaluation_report, build_precision_report,
                    group_by_quality, probe_set_from_ids, scatter_export, select_probe_set)

log = logging.getLogger("lfiqa")


class UsageError(Exception):
    pass


def _lf_choice(text):
    return None if text == "none" else LfVariant(text)


def _params(args):
    return SsimParams(auto_downsample=not args.no_auto_downsample)


def _split_list(values):
    out = []
    for v in values or ():
        out.extend(x.strip() for x in v.split(",") if x.strip())
    return out


def _parse_ingest(text):
    parts = text.split(":", 4)
    if len(parts) != 5:
        raise UsageError(f"--ingest expects label:direction:min:max:path, got {text!r}")
    label, direction, lo, hi, path = parts
    try:
        rng = (float(lo), float(hi))
    except ValueError:
        raise UsageError(f"--ingest range must be numeric in {text!r}") from None
    return label, direction, rng, path


def _add_common(p, single_metric=False):
    p.add_argument("--manifest", required=True, help="MOS manifest file")
    p.add_argument("--format", choices=MANIFEST_FORMATS, default="tid-mos-names")
    p.add_argument("--mos-scale", type=float, default=None,
                   help="maximum of the MOS scale (default 8 for tid-mos-names)")
    p.add_argument("--image-root", default=None,
                   help="directory holding reference/distorted images (default: manifest dir)")
    help_metric = "metric to use" if single_metric else "metric(s), comma separated or repeated"
    p.add_argument("--metric", action="append", default=[],
                   help=f"{help_metric}; native: {', '.join(NATIVE_KINDS)}")
    p.add_argument("--ingest", action="append", default=[], metavar="LABEL:DIR:MIN:MAX:PATH",
                   help="precomputed score CSV (distorted_id,score); DIR is similarity|distortion")
    p.add_argument("--lf", choices=("eq1", "eq2", "eq3", "none"), default="eq1")
    p.add_argument("--lf-mode", choices=("final", "per-window"), default="final")
    p.add_argument("--no-auto-downsample", action="store_true",
                   help="disable SSIM's pre-downsampling of large images")
    p.add_argument("--workers", type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lfiqa",
        description="Full-reference IQA scores, their logistic remapping, and MOS analyses.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score one image pair")
    p.add_argument("ref")
    p.add_argument("dist")
    p.add_argument("--metric", choices=tuple(NATIVE_KINDS), default="ssim")
    p.add_argument("--lf", choices=("eq1", "eq2", "eq3", "none"), default="eq1")
    p.add_argument("--lf-mode", choices=("final", "per-window"), default="final")
    p.add_argument("--no-auto-downsample", action="store_true")

    p = sub.add_parser("evaluate", help="PLCC with MOS, raw and LF-mapped")
    _add_common(p)
    p.add_argument("--output", required=True, help="report CSV path")
    p.add_argument("--dataset-label", default="")

    p = sub.add_parser("precision", help="discrimination resolution between quality groups")
    _add_common(p, single_metric=True)
    p.add_argument("--output", required=True, help="resolution CSV path")
    p.add_argument("--probes-output", default=None,
                   help="probe membership CSV (default: <output stem>_probes.csv)")
    p.add_argument("--targets", default="6,4,2", help="good,middle,bad target MOS")
    p.add_argument("--n", type=int, default=10, help="probe images per group")
    p.add_argument("--probe-list", default=None,
                   help="file of distorted ids to use as probes instead of nearest-MOS selection")
    p.add_argument("--bounds", default=None, help="group bounds low,bad_upper,middle_upper")

    p = sub.add_parser("scatter", help="scatter data of MOS against raw and LF scores")
    _add_common(p)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--svg", action="store_true", help="also write an SVG plot per CSV")
    return parser


def cmd_score(args):
    params = _params(args)
    ref = load_image(args.ref)
    dist = load_image(args.dist)
    score, window_map = score_pair(args.metric, ref, dist, params,
                                   (Path(args.ref).name, Path(args.dist).name))
    sim = normalize_direction(score)
    variant = _lf_choice(args.lf)
    if variant is None:
        lf_text = "none"
    elif args.lf_mode == "per-window":
        if window_map is None:
            raise UsageError("--lf-mode per-window is only available for ssim")
        lf_text = export.fmt(lf_per_window(window_map, variant, sim).value)
    else:
        lf_text = export.fmt(lf_map(sim, variant).value)
    print(f"metric={args.metric} raw={export.fmt(score.value)} "
          f"similarity={export.fmt(sim.value)} lf={lf_text}")
    return 0


def _load_manifest(args):
    scale = args.mos_scale
    if scale is None:
        if args.format == "generic-csv":
            raise UsageError("--mos-scale is required for generic-csv manifests")
        scale = 8.0
    return parse_manifest(args.manifest, args.format, scale)


def _columns(args, manifest, allow_many=True):
    metrics = _split_list(args.metric)
    ingests = [_parse_ingest(s) for s in args.ingest]
    if not metrics and not ingests:
        raise UsageError("no metric selected (use --metric and/or --ingest)")
    unknown = [m for m in metrics if m not in NATIVE_KINDS]
    if unknown:
        raise UsageError(f"unknown native metric(s): {', '.join(unknown)}; use --ingest for others")
    labels = metrics + [i[0] for i in ingests]
    if len(set(labels)) != len(labels):
        raise UsageError("metric labels must be unique")
    if not allow_many and len(labels) != 1:
        raise UsageError("exactly one metric is required for this command")
    variant = _lf_choice(args.lf)
    per_window = args.lf_mode == LfMode.PER_WINDOW.value and variant is not None
    root = args.image_root or Path(args.manifest).parent
    columns = []
    for m in metrics:
        pw = variant if per_window and m == "ssim" else None
        if per_window and m != "ssim":
            log.warning("%s: per-window LF is only defined for ssim; using final-score mode", m)
        col = score_manifest(manifest, m, root, _params(args), pw, max(1, args.workers))
        if col.failures:
            log.warning("%s: %d record(s) could not be scored", m, col.failures)
        columns.append(col)
    for label, direction, rng, path in ingests:
        columns.append(from_score_set(ingest_scores(path, label, direction, rng)))
    return columns


def cmd_evaluate(args):
    manifest = _load_manifest(args)
    columns = _columns(args, manifest)
    report = build_evaluation_report(
        manifest,
        {c.label: c.similarities for c in columns},
        _lf_choice(args.lf),
        args.dataset_label or Path(args.manifest).stem,
        {c.label: c.per_window_lf for c in columns if c.per_window_lf is not None},
    )
    for row in report.rows:
        if row.n_skipped:
            log.info("%s: %d record(s) skipped", row.metric, row.n_skipped)
        if row.error:
            print(f"lfiqa: {row.metric}: {row.error}", file=sys.stderr)
    export.write_evaluation_csv(report, args.output)
    return 0


def _read_probe_list(path):
    ids = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip().strip("'\"").strip()
        if line:
            ids.append(line)
    return ids


def _floats(text, count, flag):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} must be comma-separated numbers") from None
    if len(vals) != count:
        raise UsageError(f"{flag} needs {count} values")
    return vals


def cmd_precision(args):
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    variant = _lf_choice(args.lf)
    if variant is None:
        raise UsageError("precision needs an LF variant (--lf eq1|eq2|eq3)")
    good_t, middle_t, bad_t = _floats(args.targets, 3, "--targets")
    targets = {"good": good_t, "middle": middle_t, "bad": bad_t}
    bounds = _floats(args.bounds, 3, "--bounds") if args.bounds else None
    manifest = _load_manifest(args)

    probe_ids = None
    if args.probe_list:
        probe_ids = _read_probe_list(args.probe_list)
        missing = [i for i in probe_ids if manifest.get(i) is None]
        if missing:
            raise ProbeError(f"probe ids not in manifest: {', '.join(missing)}")
        scored_manifest = manifest.subset(probe_ids)
    else:
        scored_manifest = manifest

    (column,) = _columns(args, scored_manifest, allow_many=False)
    groups = group_by_quality(scored_manifest, bounds)
    probes = {}
    for label in ("good", "middle", "bad"):
        if probe_ids is not None:
            order = {i: k for k, i in enumerate(probe_ids)}
            members = sorted(groups[label].members, key=lambda r: order[r.distorted_id])
            probes[label] = probe_set_from_ids(label, members, column.similarities, variant,
                                               targets[label], column.per_window_lf)
        else:
            probes[label] = select_probe_set(groups[label], targets[label], args.n,
                                             column.similarities, variant, column.per_window_lf)
    report = build_precision_report(probes, manifest.mos_scale_max)

    for label in ("good", "middle", "bad"):
        probe = probes[label]
        log.info("%s probes (target %g):", label, probe.target_mos)
        for rec, sim, lf in probe.members:
            log.info("  %s mos=%s raw=%s lf=%s", rec.distorted_id, export.fmt(rec.mos),
                     export.fmt(sim.value), export.fmt(lf.value))
    out = Path(args.output)
    probes_out = Path(args.probes_output) if args.probes_output else \
        out.with_name(f"{out.stem}_probes.csv")
    export.write_precision_csv(report, out)
    probes_out.write_text(export.probes_csv(report), encoding="utf-8", newline="")
    return 0


def _safe(name):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def cmd_scatter(args):
    manifest = _load_manifest(args)
    columns = _columns(args, manifest)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    variant = _lf_choice(args.lf)
    for col in columns:
        exports = [("raw", None)]
        if variant is not None:
            exports.append((f"lf_{variant.value}", variant))
        for tag, v in exports:
            if v is not None and col.per_window_lf is not None:
                rows = scatter_export(manifest, col.per_window_lf, None)
            else:
                rows = scatter_export(manifest, col.similarities, v)
            if not rows:
                log.warning("%s: no scorable records", col.label)
            stem = outdir / f"{_safe(col.label)}_{tag}"
            export.write_scatter_csv(rows, stem.with_suffix(".csv"))
            if args.svg:
                x_label = col.label if v is None else f"LF-{col.label} ({v.value})"
                svg = export.scatter_svg(rows, f"MOS vs {x_label}", x_label,
                                         manifest.mos_scale_max)
                stem.with_suffix(".svg").write_text(svg, encoding="utf-8", newline="")
    return 0


COMMANDS = {
    "score": cmd_score,
    "evaluate": cmd_evaluate,
    "precision": cmd_precision,
    "scatter": cmd_scatter,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="lfiqa: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ImageDecodeError, ManifestError, DimensionError, ScoreRangeError, ProbeError,
            OSError, ValueError) as exc:
        print(f"lfiqa: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
