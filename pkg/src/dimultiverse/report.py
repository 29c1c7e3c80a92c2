"""CSV/JSON serialization of sweep results and the SVG density plot.

Floats are written with ``repr`` so that every file parses back to the
exact in-memory value.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from typing import Optional
from xml.sax.saxutils import escape

from .core import NFMode, ScoreOutcome, Specification, Status, TriCount, WindowMode, WindowSpec
from .errors import IngestError
from .multiverse import CurvePoint, DensityCurve, ScoreMatrix, SpecSummary

SPEC_COLUMNS = ("x", "y", "window_mode", "z_refs", "z_cites", "nf_mode")
SCORES_HEADER = ("fp_id",) + SPEC_COLUMNS + (
    "n_f", "n_b", "n_r", "skipped_unknown_year", "status", "score",
)
SUMMARY_HEADER = SPEC_COLUMNS + (
    "mean", "n_included", "n_undefined", "n_ineligible", "total_skipped_unknown_year",
)
CURVE_HEADER = ("rank",) + SPEC_COLUMNS + ("mean", "n_included")
KDE_HEADER = ("value", "density")


def _fmt_float(v: Optional[float]) -> str:
    return "" if v is None else repr(float(v))


def _fmt_int(v: Optional[int]) -> str:
    return "" if v is None else str(v)


def _parse_float(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def _parse_int(text: str) -> Optional[int]:
    return None if text == "" else int(text)


def format_y(length: Optional[int]) -> str:
    return "inf" if length is None else str(length)


def parse_y(text: str) -> Optional[int]:
    return None if text.strip().lower() in ("inf", "none", "unbounded") else int(text)


def spec_fields(spec: Specification) -> list:
    return [
        str(spec.x),
        format_y(spec.y),
        spec.window_mode.value,
        str(spec.z_refs),
        str(spec.z_cites),
        spec.nf_mode.value,
    ]


def spec_from_fields(row: dict) -> Specification:
    return Specification(
        x=int(row["x"]),
        window=WindowSpec(parse_y(row["y"]), WindowMode(row["window_mode"])),
        z_refs=int(row["z_refs"]),
        z_cites=int(row["z_cites"]),
        nf_mode=NFMode(row["nf_mode"]),
    )


def spec_to_dict(spec: Specification) -> dict:
    return dict(zip(SPEC_COLUMNS, [spec.x, spec.y, spec.window_mode.value, spec.z_refs,
                                   spec.z_cites, spec.nf_mode.value]))


def outcome_fields(outcome: ScoreOutcome) -> list:
    c = outcome.counts
    counts = ["", "", "", ""] if c is None else [c.n_f, c.n_b, c.n_r, c.skipped_unknown_year]
    return [str(v) for v in counts] + [outcome.status.value, _fmt_float(outcome.score)]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def scores_csv(matrix: ScoreMatrix) -> str:
    return _csv_text(
        SCORES_HEADER,
        ([fp] + spec_fields(spec) + outcome_fields(o) for fp, spec, o in matrix),
    )


def summary_csv(summaries) -> str:
    return _csv_text(
        SUMMARY_HEADER,
        (
            spec_fields(s.spec)
            + [_fmt_float(s.mean), s.n_included, s.n_undefined, s.n_ineligible,
               s.total_skipped_unknown_year]
            for s in summaries
        ),
    )


def curve_csv(curve) -> str:
    return _csv_text(
        CURVE_HEADER,
        (
            [_fmt_int(p.rank)] + spec_fields(p.spec) + [_fmt_float(p.mean), p.n_included]
            for p in curve
        ),
    )


def kde_csv(curve: DensityCurve) -> str:
    return _csv_text(KDE_HEADER, ((repr(float(x)), repr(float(d))) for x, d in zip(curve.grid, curve.density)))


def _dict_rows(text: str, header, source=None):
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != tuple(header):
        raise IngestError(f"expected header {','.join(header)!r}", 1, source)
    return list(reader)


def parse_scores_csv(text: str, source=None) -> ScoreMatrix:
    fps, specs, cells = [], [], {}
    for row in _dict_rows(text, SCORES_HEADER, source):
        spec = spec_from_fields(row)
        fp = row["fp_id"]
        if fp not in cells:
            fps.append(fp)
            cells[fp] = []
        if spec not in specs:
            specs.append(spec)
        status = Status(row["status"])
        counts = None
        if row["n_f"] != "":
            counts = TriCount(int(row["n_f"]), int(row["n_b"]), int(row["n_r"]),
                              int(row["skipped_unknown_year"]))
        cells[fp].append(ScoreOutcome(status, _parse_float(row["score"]), counts))
    return ScoreMatrix(tuple(fps), tuple(specs), tuple(tuple(cells[fp]) for fp in fps))


def parse_summary_csv(text: str, source=None) -> list:
    return [
        SpecSummary(
            spec_from_fields(row),
            _parse_float(row["mean"]),
            int(row["n_included"]),
            int(row["n_undefined"]),
            int(row["n_ineligible"]),
            int(row["total_skipped_unknown_year"]),
        )
        for row in _dict_rows(text, SUMMARY_HEADER, source)
    ]


def parse_curve_csv(text: str, source=None) -> list:
    return [
        CurvePoint(_parse_int(row["rank"]), spec_from_fields(row), _parse_float(row["mean"]),
                   int(row["n_included"]))
        for row in _dict_rows(text, CURVE_HEADER, source)
    ]


def parse_kde_csv(text: str, source=None) -> tuple:
    rows = _dict_rows(text, KDE_HEADER, source)
    return [float(r["value"]) for r in rows], [float(r["density"]) for r in rows]


def write_atomic(files: dict) -> None:
    """Write ``{path: text}`` so that either every file appears or none changes.

    Each file goes to a temporary sibling first; renames happen only after
    all temporaries were written successfully.
    """
    staged = []
    try:
        for path, text in files.items():
            directory = os.path.dirname(os.path.abspath(path))
            fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
            staged.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def run_json(config: dict, counters: dict, extremes, version: str, n_fps: int, n_specs: int) -> str:
    ext = None
    if extremes is not None:
        ext = {
            "min": {**spec_to_dict(extremes.min.spec), "mean": extremes.min.mean,
                    "n_included": extremes.min.n_included, "tied": extremes.min_tied},
            "max": {**spec_to_dict(extremes.max.spec), "mean": extremes.max.mean,
                    "n_included": extremes.max.n_included, "tied": extremes.max_tied},
        }
    doc = {
        "tool": "dimultiverse",
        "version": version,
        "config": config,
        "corpus": counters,
        "n_focal_papers": n_fps,
        "n_specifications": n_specs,
        "extremes": ext,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- SVG ------------------------------------------------------------------

WIDTH, HEIGHT = 720, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 95


def _ticks(lo, hi, n=6):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + step * 1e-9:
        out.append(round(t, 12))
        t += step
    return out


def _tick_label(t):
    text = f"{t:.6g}"
    return "0" if text in ("-0", "0") else text


def render_svg(curve: DensityCurve, means) -> str:
    """Line plot of the density with a rug of the per-specification means."""
    xs, ys = curve.grid, curve.density
    x_lo, x_hi = float(xs[0]), float(xs[-1])
    y_hi = float(ys.max()) * 1.08 or 1.0
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def sx(v):
        return LEFT + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return TOP + ph - v / y_hi * ph

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        px = sx(t)
        parts.append(f'<line x1="{px:.2f}" y1="{TOP + ph}" x2="{px:.2f}" y2="{TOP + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{px:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _ticks(0.0, y_hi, 5):
        py = sy(t)
        parts.append(f'<line x1="{LEFT - 5}" y1="{py:.2f}" x2="{LEFT}" y2="{py:.2f}" stroke="black"/>')
        parts.append(f'<text x="{LEFT - 8}" y="{py + 4:.2f}" text-anchor="end">{_tick_label(t)}</text>')

    points = " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline class="density" fill="none" stroke="#1f4e79" stroke-width="2" points="{points}"/>')
    for m in means:
        px = sx(m)
        parts.append(
            f'<line class="rug" x1="{px:.2f}" y1="{TOP + ph - 10}" x2="{px:.2f}" y2="{TOP + ph}" '
            'stroke="#b03a2e" stroke-width="1"/>'
        )

    parts.append(f'<text x="{LEFT + pw / 2:.1f}" y="{TOP + ph + 40}" text-anchor="middle">average disruption score</text>')
    parts.append(
        f'<text x="18" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {TOP + ph / 2:.1f})">density</text>'
    )
    caption = (
        f"Gaussian kernel density of {len(means)} per-specification mean scores; "
        f"bandwidth = {curve.bandwidth:.6g}"
    )
    parts.append(f'<text class="caption" x="{LEFT}" y="{HEIGHT - 15}">{escape(caption)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
