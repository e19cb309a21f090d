"""Report artifacts for a completed run: grouped-bar CSV/SVG and scatter data.

The SVG is generated directly (no plotting dependency) so the output is a
single self-contained file and byte-stable across reruns.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .errors import IncompleteRun

BAR_COLUMNS = ["system", "mean_d_c", "mean_d_g", "mean_d_r", "mean_d_hm"]
SCATTER_COLUMNS = ["system", "parameters_millions", "mean_d_hm"]

_METRIC_LABELS = [("mean_d_c", "coherence"), ("mean_d_g", "grounding"),
                  ("mean_d_r", "repetition"), ("mean_d_hm", "overall")]
_COLORS = ["#4c78a8", "#f58518", "#54a24b", "#b279a2"]


def render_report(run_dir: str | Path) -> list[Path]:
    """Emit report artifacts for a run directory; returns the written paths."""
    run_dir = Path(run_dir)
    summary_path = run_dir / "summary.json"
    if not summary_path.exists():
        raise IncompleteRun(f"{run_dir} has no summary.json")
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    per_system = summary.get("per_system", {})
    if not per_system:
        raise IncompleteRun(f"{run_dir} scored no systems")

    report_dir = run_dir / "report"
    report_dir.mkdir(exist_ok=True)
    written: list[Path] = []

    systems = sorted(per_system)
    rows = [[name] + [repr(float(per_system[name][k])) for k, _ in _METRIC_LABELS]
            for name in systems]
    bars_csv = report_dir / "bars.csv"
    with open(bars_csv, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BAR_COLUMNS)
        writer.writerows(rows)
    written.append(bars_csv)

    bars_svg = report_dir / "bars.svg"
    bars_svg.write_text(_grouped_bar_svg(systems, per_system), encoding="utf-8")
    written.append(bars_svg)

    model_sizes = summary.get("config", {}).get("model_sizes", {})
    if model_sizes:
        scatter_csv = report_dir / "scatter.csv"
        with open(scatter_csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SCATTER_COLUMNS)
            for name in systems:
                if name in model_sizes:
                    writer.writerow([name, repr(float(model_sizes[name])),
                                     repr(float(per_system[name]["mean_d_hm"]))])
        written.append(scatter_csv)
    return written


def _grouped_bar_svg(systems: list[str], per_system: dict) -> str:
    bar_w, gap, group_gap = 26, 4, 30
    group_w = len(_METRIC_LABELS) * (bar_w + gap) + group_gap
    margin_l, margin_b, margin_t = 50, 50, 30
    plot_h = 220
    width = margin_l + len(systems) * group_w + 140  # room for the legend
    height = margin_t + plot_h + margin_b

    peak = max((per_system[s][k] for s in systems for k, _ in _METRIC_LABELS),
               default=1.0)
    top = max(peak, 1e-9) * 1.15

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin_l}" y1="{margin_t + plot_h}" x2="{width - 120}" '
        f'y2="{margin_t + plot_h}" stroke="black"/>',
        f'<line x1="{margin_l}" y1="{margin_t}" x2="{margin_l}" '
        f'y2="{margin_t + plot_h}" stroke="black"/>',
    ]
    for i in range(5):
        value = top * i / 4
        y = margin_t + plot_h - plot_h * i / 4
        parts.append(f'<text x="{margin_l - 6}" y="{y + 4:.1f}" text-anchor="end">'
                     f'{value:.2f}</text>')
        parts.append(f'<line x1="{margin_l - 3}" y1="{y:.1f}" x2="{margin_l}" '
                     f'y2="{y:.1f}" stroke="black"/>')

    for gi, name in enumerate(systems):
        gx = margin_l + gi * group_w + group_gap / 2
        for mi, (key, _) in enumerate(_METRIC_LABELS):
            value = float(per_system[name][key])
            h = 0.0 if top == 0 else plot_h * max(value, 0.0) / top
            x = gx + mi * (bar_w + gap)
            y = margin_t + plot_h - h
            parts.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w}" '
                         f'height="{h:.1f}" fill="{_COLORS[mi]}"/>')
            parts.append(f'<text x="{x + bar_w / 2:.1f}" y="{y - 3:.1f}" '
                         f'text-anchor="middle" font-size="9">{value:.3f}</text>')
        cx = gx + (len(_METRIC_LABELS) * (bar_w + gap) - gap) / 2
        parts.append(f'<text x="{cx:.1f}" y="{margin_t + plot_h + 16}" '
                     f'text-anchor="middle">{_escape(name)}</text>')

    lx = width - 115
    for mi, (_, label) in enumerate(_METRIC_LABELS):
        ly = margin_t + 10 + mi * 18
        parts.append(f'<rect x="{lx}" y="{ly}" width="12" height="12" '
                     f'fill="{_COLORS[mi]}"/>')
        parts.append(f'<text x="{lx + 17}" y="{ly + 10}">{label} distance</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))
