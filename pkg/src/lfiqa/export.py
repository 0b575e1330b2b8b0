"""CSV and SVG writers. All numbers are written with six decimals."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .stats import EvaluationReport, PrecisionReport, ScatterRow

EVALUATION_HEADER = ("metric", "plcc_raw", "plcc_lf", "n_pairs")
PRECISION_HEADER = ("pair", "mos_resolution", "raw_resolution", "lf_resolution")
PROBE_HEADER = ("group", "distorted_id", "mos", "raw", "lf")
SCATTER_HEADER = ("distorted_id", "objective_score", "mos")


def fmt(v: float) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "nan"
    return f"{v:.6f}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="")


def evaluation_csv(report: EvaluationReport) -> str:
    return _csv_text(EVALUATION_HEADER, [
        (r.metric, fmt(r.plcc_raw), fmt(r.plcc_lf), r.n_pairs) for r in report.rows])


def precision_csv(report: PrecisionReport) -> str:
    return _csv_text(PRECISION_HEADER, [
        (r.pair, fmt(r.mos_resolution), fmt(r.raw_resolution), fmt(r.lf_resolution))
        for r in report.rows])


def probes_csv(report: PrecisionReport) -> str:
    rows = []
    for label in ("good", "middle", "bad"):
        probe = report.probes.get(label)
        if probe is None:
            continue
        for rec, sim, lf in probe.members:
            rows.append((label, rec.distorted_id, fmt(rec.mos), fmt(sim.value), fmt(lf.value)))
        mos, raw, lfv = probe.averages
        rows.append((label, "avg", fmt(mos), fmt(raw), fmt(lfv)))
    return _csv_text(PROBE_HEADER, rows)


def scatter_csv(rows: Sequence[ScatterRow]) -> str:
    return _csv_text(SCATTER_HEADER, [
        (r.distorted_id, fmt(r.objective_score), fmt(r.mos)) for r in rows])


def write_evaluation_csv(report, path):
    _write(path, evaluation_csv(report))


def write_precision_csv(report, path):
    _write(path, precision_csv(report))


def write_scatter_csv(rows, path):
    _write(path, scatter_csv(rows))


def scatter_svg(rows: Sequence[ScatterRow], title: str, x_label: str, mos_max: float,
                width: int = 480, height: int = 360) -> str:
    """Plain SVG scatter plot: objective score on x in [0, 1], MOS on y."""
    left, right, top, bottom = 56, 16, 32, 48
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + v * pw

    def py(m):
        return top + ph - (m / mos_max) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(6):
        t = i / 5
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 16}" font-size="10" '
                   f'text-anchor="middle">{t:.1f}</text>')
        m = mos_max * t
        out.append(f'<text x="{left - 6}" y="{py(m) + 3:.2f}" font-size="10" '
                   f'text-anchor="end">{m:g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 10}" font-size="12" '
               f'text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="14" y="{top + ph / 2:.2f}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2:.2f})">MOS</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="20" font-size="13" '
               f'text-anchor="middle">{escape(title)}</text>')
    for r in rows:
        out.append(f'<circle cx="{px(r.objective_score):.2f}" cy="{py(r.mos):.2f}" r="1.5" '
                   f'fill="steelblue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
