"""
Trial Scorer

Aggregates final-grasp-evaluation trial reports into the y_max histogram,
a summary, a per-object table and recommendations.
"""
from collections import defaultdict
from typing import Any, Dict, List, Optional

import numpy as np

from src.models.results import TrialReport

BIN_WIDTH = 0.05
GOOD_Y_MAX = 0.9


def histogram(values, bin_width: float = BIN_WIDTH) -> List[Dict[str, Any]]:
    """
    Counts of values over [0, 1] in bins of `bin_width`. Bins are closed on
    the left; 1.0 falls in the last bin.
    """
    n_bins = int(round(1.0 / bin_width))
    counts = np.zeros(n_bins, dtype=int)
    for v in values:
        idx = int(np.floor(np.round(float(v) / bin_width, 9)))
        counts[min(max(idx, 0), n_bins - 1)] += 1
    return [
        {"bin_lo": round(i * bin_width, 10), "bin_hi": round((i + 1) * bin_width, 10),
         "count": int(counts[i])}
        for i in range(n_bins)
    ]


def _mean(values) -> Optional[float]:
    return float(np.mean(values)) if len(values) else None


class TrialScorer:
    """
    Scores a batch of trials.

    Failed trials are counted but excluded from every statistic. Undefined
    precision or rank correlation values are excluded from their means.
    """

    def __init__(self, bin_width: float = BIN_WIDTH, good_threshold: float = GOOD_Y_MAX):
        self.bin_width = bin_width
        self.good_threshold = good_threshold

    def score(self, reports: List[TrialReport]) -> Dict[str, Any]:
        """
        Returns:
            Dict containing:
                - summary: counts, median / mean y_max, fraction >= threshold
                - histogram: list of {bin_lo, bin_hi, count}
                - per_object: list of {object_id, trials, mean_y_max, median_y_max}
                - recommendations: list of {category, severity, message}
        """
        ok = [r for r in reports if not r.failed]
        y_max = [r.y_max for r in ok]
        summary = {
            "total_trials": len(reports),
            "failed_trials": len(reports) - len(ok),
            "median_y_max": float(np.median(y_max)) if y_max else None,
            "mean_y_max": _mean(y_max),
            "fraction_good": (float(np.mean(np.asarray(y_max) >= self.good_threshold))
                              if y_max else None),
            "good_threshold": self.good_threshold,
            "mean_precision": _mean([r.precision for r in ok if r.precision is not None]),
            "mean_spearman": _mean([r.spearman for r in ok if r.spearman is not None]),
        }
        per_object = self._per_object(ok)
        return {
            "summary": summary,
            "histogram": histogram(y_max, self.bin_width),
            "per_object": per_object,
            "recommendations": self._generate_recommendations(summary, per_object),
        }

    def _per_object(self, reports: List[TrialReport]) -> List[Dict[str, Any]]:
        by_object = defaultdict(list)
        for r in reports:
            by_object[r.object_id].append(r.y_max)
        return [
            {"object_id": obj, "trials": len(vals),
             "mean_y_max": float(np.mean(vals)), "median_y_max": float(np.median(vals))}
            for obj, vals in sorted(by_object.items())
        ]

    def _generate_recommendations(self, summary: Dict[str, Any],
                                  per_object: List[Dict[str, Any]]) -> List[Dict[str, str]]:
        recommendations = []
        if summary["failed_trials"]:
            recommendations.append({
                "category": "failures",
                "severity": "warning",
                "message": f"{summary['failed_trials']} trial(s) failed; rerun with -v for details",
            })
        if summary["median_y_max"] is not None and summary["median_y_max"] < self.good_threshold:
            recommendations.append({
                "category": "surrogate",
                "severity": "warning",
                "message": "median y_max is below the good threshold; "
                           "train on the full dataset or more epochs",
            })
        weak = [row["object_id"] for row in per_object if row["mean_y_max"] < 0.7]
        if weak:
            recommendations.append({
                "category": "objects",
                "severity": "info",
                "message": "low mean y_max on: " + ", ".join(weak),
            })
        return recommendations
