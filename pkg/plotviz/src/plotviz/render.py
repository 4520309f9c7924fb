"""Render figures from swaprobust CSV outputs.

Two renderers: per-candidate winning-probability curves from an analyze
CSV (``level,candidate,probability``), and mean-threshold sweep curves
from a sweep CSV (``#``-prefixed metadata, then
``rule,reversal_prob,gen_level,mean_threshold,...`` rows). Both are pure
functions of the input files plus style arguments and write a PNG or SVG
chosen by the output extension.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

# Ascending reversal probabilities map onto these styles, so the common
# 0 / 0.3 / 0.5 splits render solid / dotted / dashed.
_SWEEP_STYLES = ("-", ":", "--", "-.")


class PlotDataError(ValueError):
    """Input file is empty or not in the documented CSV format."""


def load_curve_csv(path: str | Path) -> dict[str, list[tuple[float, float]]]:
    """Read an analyze curve CSV into {candidate: [(level, prob), ...]}.

    Candidate order follows first appearance in the file.
    """
    with open(path, encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows or rows[0] != ["level", "candidate", "probability"]:
        raise PlotDataError(f"{path}: expected level,candidate,probability")
    if len(rows) == 1:
        raise PlotDataError(f"{path}: no curve rows")
    curves: dict[str, list[tuple[float, float]]] = {}
    for row in rows[1:]:
        if len(row) != 3:
            raise PlotDataError(f"{path}: bad row {row!r}")
        try:
            level, prob = float(row[0]), float(row[2])
        except ValueError:
            raise PlotDataError(f"{path}: bad number in row {row!r}")
        curves.setdefault(row[1], []).append((level, prob))
    for name, points in curves.items():
        levels = [lv for lv, _ in points]
        if levels != sorted(levels):
            raise PlotDataError(f"{path}: levels not ascending for {name!r}")
    return curves


def load_result_json(path: str | Path) -> dict[str, tuple]:
    """Read an analyze JSON into {candidate: (rule_score, borda_score)}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    names = doc.get("candidates") or []
    rule_scores = doc.get("rule_scores")
    borda = doc.get("borda_scores")
    out = {}
    for i, name in enumerate(names):
        rs = rule_scores[i] if rule_scores is not None else None
        bs = borda[i] if borda is not None else None
        out[name] = (rs, bs)
    return out


def load_sweep_csv(path: str | Path) -> list[dict]:
    """Read a sweep CSV into row dicts, skipping ``#`` metadata lines."""
    with open(path, encoding="utf-8", newline="") as handle:
        lines = [ln for ln in handle if ln.strip() and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows:
        raise PlotDataError(f"{path}: no data")
    header = rows[0]
    required = {"rule", "reversal_prob", "gen_level", "mean_threshold"}
    if not required.issubset(header):
        raise PlotDataError(f"{path}: missing columns {required - set(header)}")
    if len(rows) == 1:
        raise PlotDataError(f"{path}: no sweep rows")
    out = []
    for row in rows[1:]:
        if len(row) != len(header):
            raise PlotDataError(f"{path}: bad row {row!r}")
        rec = dict(zip(header, row))
        try:
            out.append(
                {
                    "rule": rec["rule"],
                    "reversal_prob": float(rec["reversal_prob"]),
                    "gen_level": float(rec["gen_level"]),
                    "mean_threshold": float(rec["mean_threshold"]),
                }
            )
        except ValueError:
            raise PlotDataError(f"{path}: bad number in row {row!r}")
    return out


def _format_score(value) -> str:
    if isinstance(value, float) and value == int(value):
        return str(int(value))
    if isinstance(value, list):
        return "/".join(_format_score(v) for v in value)
    return str(value)


def render_curves(
    csv_path: str | Path,
    out_image: str | Path,
    top_k: int = 4,
    x_max: float = 0.5,
    result_json: str | Path | None = None,
):
    """Plot the top_k candidates' winning-probability curves.

    Candidates are ranked by level-0 probability, ties broken by the
    average over the whole grid. The x-range is clipped to [0, x_max].
    When ``result_json`` (the analyze JSON from the same run) is given,
    the legend carries each candidate's rule score and Borda score.
    Returns the matplotlib figure after saving it to ``out_image``.
    """
    if top_k < 1:
        raise ValueError("top_k must be positive")
    if x_max <= 0:
        raise ValueError("x_max must be positive")
    curves = load_curve_csv(csv_path)
    scores = load_result_json(result_json) if result_json else {}

    def rank_key(item):
        _, points = item
        avg = sum(p for _, p in points) / len(points)
        return (-points[0][1], -avg)

    chosen = sorted(curves.items(), key=rank_key)[:top_k]

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, points in chosen:
        visible = [(lv, p) for lv, p in points if lv <= x_max]
        label = name
        if name in scores and scores[name] != (None, None):
            rs, bs = scores[name]
            label = f"{name} ({_format_score(rs)}, {_format_score(bs)})"
        ax.plot(
            [lv for lv, _ in visible],
            [p for _, p in visible],
            label=label,
        )
    ax.set_xlim(0.0, x_max)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("norm-phi")
    ax.set_ylabel("winning probability")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_image)
    return fig


def render_sweep(csv_path: str | Path, out_image: str | Path):
    """Plot mean thresholds: one line per (rule, reversal probability).

    Rules share a color; the line style encodes the reversal probability
    (ascending probabilities: solid, dotted, dashed, dash-dotted).
    Returns the matplotlib figure after saving it to ``out_image``.
    """
    rows = load_sweep_csv(csv_path)
    rules: list[str] = []
    for row in rows:
        if row["rule"] not in rules:
            rules.append(row["rule"])
    reversals = sorted({row["reversal_prob"] for row in rows})
    styles = {
        rev: _SWEEP_STYLES[i % len(_SWEEP_STYLES)]
        for i, rev in enumerate(reversals)
    }
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]

    fig, ax = plt.subplots(figsize=(6, 4))
    for r_idx, rule in enumerate(rules):
        for rev in reversals:
            points = [
                (row["gen_level"], row["mean_threshold"])
                for row in rows
                if row["rule"] == rule and row["reversal_prob"] == rev
            ]
            if not points:
                continue
            points.sort()
            label = rule if len(reversals) == 1 else f"{rule} (rev {rev:g})"
            ax.plot(
                [g for g, _ in points],
                [t for _, t in points],
                linestyle=styles[rev],
                color=colors[r_idx % len(colors)],
                label=label,
            )
    ax.set_xlabel("generation norm-phi")
    ax.set_ylabel("mean winner threshold")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(out_image)
    return fig
