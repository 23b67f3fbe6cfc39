"""
Trial report writers: CSV (byte-stable across reruns), JSON with timings,
histogram and per-object tables, and an optional rendered histogram.
"""
import csv
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

from src.models.results import TrialReport

TRIAL_HEADER = ["object_id", "trial", "screw_kind", "px", "py", "pz", "lx", "ly", "lz",
                "y_max", "top_k", "top_m", "precision", "spearman", "error"]


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    return f"{float(value):.6f}"


def write_trial_csv(reports: Sequence[TrialReport], path) -> Path:
    """One row per trial; wall time is left out so reruns compare equal."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TRIAL_HEADER)
        for r in reports:
            anchor = r.screw.anchor
            writer.writerow([r.object_id, r.trial_index, r.screw_kind]
                            + [_fmt(v) for v in anchor] + [_fmt(v) for v in r.screw.l]
                            + [_fmt(r.y_max), r.top_k, r.top_m, _fmt(r.precision),
                               _fmt(r.spearman), r.error or ""])
    return path


def write_report_json(reports: Sequence[TrialReport], scored: Dict[str, Any], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(scored)
    payload["trials"] = [r.as_dict() for r in reports]
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def write_histogram_csv(hist: List[Dict[str, Any]], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bin_lo", "bin_hi", "count"])
        for row in hist:
            writer.writerow([f"{row['bin_lo']:.2f}", f"{row['bin_hi']:.2f}", row["count"]])
    return path


def write_object_table_csv(table: List[Dict[str, Any]], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["object_id", "trials", "mean_y_max", "median_y_max"])
        for row in table:
            writer.writerow([row["object_id"], row["trials"],
                             _fmt(row["mean_y_max"]), _fmt(row["median_y_max"])])
    return path


def plot_histogram(hist: List[Dict[str, Any]], path, title: str = "final grasp evaluation") -> Path:
    """Bar chart of the y_max histogram, rendered off-screen."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lo = [row["bin_lo"] for row in hist]
    counts = [row["count"] for row in hist]
    width = hist[0]["bin_hi"] - hist[0]["bin_lo"] if hist else 0.05
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(lo, counts, width=width, align="edge", edgecolor="k", facecolor="tab:blue")
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("$y_{max}$")
    ax.set_ylabel("trials")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
