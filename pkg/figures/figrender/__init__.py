"""Line charts from mechanism-comparison CSV files, as standalone SVG.

The input is the experiment CSV (one row per mechanism and item count); the
output is one vector image per metric with one series per mechanism, item
count on the x axis and the metric on a fixed [0, 1] y axis.

The SVG is written by hand so that rendering is a pure function of the CSV
text: every data point carries ``data-m`` and ``data-value`` attributes
holding the exact strings from the file, and rerunning on the same input
produces byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

EXPECTED_HEADER = (
    "mechanism,n,m,gini,subj_gini,envy,util_ratio,egal_ratio,"
    "sd_gini,sd_subj_gini,sd_envy,sd_util,sd_egal,instances,samples,seed"
)

DEFAULT_METRICS = ("gini", "envy", "util_ratio", "egal_ratio")
OPTIONAL_METRIC = "subj_gini"

LABELS = {
    "gini": "Gini index",
    "subj_gini": "subjective Gini index",
    "envy": "envy index",
    "util_ratio": "utilitarian ratio",
    "egal_ratio": "egalitarian ratio",
}

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")

WIDTH, HEIGHT = 640, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 150, 40, 50


class SchemaMismatch(Exception):
    """The CSV lacks a column the figures need."""


class EmptyInput(Exception):
    """The CSV has a header but no data rows."""


def parse_csv(text: str) -> list[dict[str, str]]:
    """Rows as dicts of raw strings, validated against the expected schema."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise SchemaMismatch("no header line")
    header = lines[0].split(",")
    for column in ("mechanism", "m", *DEFAULT_METRICS, OPTIONAL_METRIC):
        if column not in header:
            raise SchemaMismatch(f"missing column {column!r}")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(header):
            raise SchemaMismatch(f"row has {len(parts)} fields, header has {len(header)}")
        rows.append(dict(zip(header, parts)))
    if not rows:
        raise EmptyInput("CSV contains no data rows")
    return rows


def series_by_mechanism(rows, metric):
    """mechanism -> list of (m_string, value_string), ordered by item count.

    Mechanisms appear in file order; points are sorted by the numeric item
    count but keep their original strings.
    """
    out: dict[str, list[tuple[str, str]]] = {}
    for row in rows:
        out.setdefault(row["mechanism"], []).append((row["m"], row[metric]))
    for points in out.values():
        points.sort(key=lambda pair: int(pair[0]))
    return out


def _x_position(m_value: int, m_min: int, m_max: int) -> float:
    span = (m_max - m_min) or 1
    usable = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    return MARGIN_LEFT + usable * (m_value - m_min) / span


def _y_position(value: float) -> float:
    usable = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    clamped = min(max(value, 0.0), 1.0)
    return MARGIN_TOP + usable * (1.0 - clamped)


def render_svg(rows, metric: str) -> str:
    """One chart: series per mechanism, x = item count, y = metric in [0, 1]."""
    series = series_by_mechanism(rows, metric)
    m_values = sorted({int(row["m"]) for row in rows})
    m_min, m_max = m_values[0], m_values[-1]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{LABELS.get(metric, metric)} vs number of items</text>',
    ]
    # y gridlines and labels on the fixed [0, 1] scale
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = _y_position(tick)
        x_end = WIDTH - MARGIN_RIGHT
        parts.append(
            f'<line x1="{MARGIN_LEFT}" y1="{y:.2f}" x2="{x_end}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{tick:g}</text>'
        )
    # x ticks at the item counts present
    axis_y = HEIGHT - MARGIN_BOTTOM
    for m_value in m_values:
        x = _x_position(m_value, m_min, m_max)
        parts.append(
            f'<line x1="{x:.2f}" y1="{axis_y}" x2="{x:.2f}" y2="{axis_y + 5}" '
            f'stroke="#333333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{axis_y + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{m_value}</text>'
        )
    parts.append(
        f'<line x1="{MARGIN_LEFT}" y1="{axis_y}" x2="{WIDTH - MARGIN_RIGHT}" y2="{axis_y}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{axis_y}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{(MARGIN_LEFT + WIDTH - MARGIN_RIGHT) // 2}" y="{HEIGHT - 12}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">items</text>'
    )

    for index, (mechanism, points) in enumerate(series.items()):
        color = PALETTE[index % len(PALETTE)]
        coords = [
            (_x_position(int(m_str), m_min, m_max), _y_position(float(v_str)), m_str, v_str)
            for m_str, v_str in points
        ]
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y, _, _ in coords)
        parts.append(
            f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2" '
            f'class="series" data-mechanism="{mechanism}"/>'
        )
        for x, y, m_str, v_str in coords:
            parts.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="{color}" class="pt" '
                f'data-mechanism="{mechanism}" data-m="{m_str}" data-value="{v_str}"/>'
            )
        legend_y = MARGIN_TOP + 16 + 22 * index
        legend_x = WIDTH - MARGIN_RIGHT + 14
        parts.append(
            f'<line x1="{legend_x}" y1="{legend_y - 4}" x2="{legend_x + 24}" y2="{legend_y - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 30}" y="{legend_y}" font-family="sans-serif" '
            f'font-size="12" class="legend">{mechanism}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_figures(csv_path, out_dir, with_subjgini: bool = False) -> list[Path]:
    """Write one SVG per metric; returns the created paths."""
    text = Path(csv_path).read_text(encoding="utf-8")
    rows = parse_csv(text)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metrics = DEFAULT_METRICS + ((OPTIONAL_METRIC,) if with_subjgini else ())
    written = []
    for metric in metrics:
        path = out / f"{metric}.svg"
        path.write_text(render_svg(rows, metric), encoding="utf-8")
        written.append(path)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figrender",
        description="Render mechanism-comparison SVG figures from an experiment CSV.",
    )
    parser.add_argument("--input", required=True, help="experiment CSV file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument(
        "--with-subjgini",
        action="store_true",
        help="also render the subjective Gini figure",
    )
    args = parser.parse_args(argv)
    try:
        written = render_figures(args.input, args.out, args.with_subjgini)
    except (SchemaMismatch, EmptyInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0
