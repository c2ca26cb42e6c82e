"""Render benchmark result tables as figures, next to the delimited output.

Kept separate from the experiment runner: evaluation emits machine-readable
rows, and this module turns those rows into files on explicit request.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import ExperimentRow


def _variant(row: ExperimentRow) -> str:
    if row.filter_params:
        return f"{row.filter_name} ({row.filter_params})"
    return row.filter_name


def _variant_order(rows: list[ExperimentRow]) -> list[str]:
    seen: dict[str, None] = {}
    for row in rows:
        seen.setdefault(_variant(row), None)
    return list(seen)


def _series(rows: list[ExperimentRow], variant: str, attr: str):
    points = sorted(
        (row.noise_level, getattr(row, attr), getattr(row, attr.replace("mean", "std")))
        for row in rows
        if _variant(row) == variant
    )
    x = np.array([p[0] for p in points]) * 100.0
    y = np.array([p[1] for p in points])
    err = np.array([p[2] for p in points])
    return x, y, err


def plot_accuracy(rows: list[ExperimentRow], path, classifier: str) -> None:
    """Test accuracy against noise level, one line per filter variant."""
    subset = [r for r in rows if r.classifier == classifier]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for variant in _variant_order(subset):
        x, y, err = _series(subset, variant, "accuracy_mean")
        style = {"linestyle": "--", "color": "black"} if variant == "original" else {}
        ax.errorbar(x, y * 100.0, yerr=err * 100.0, marker="o", capsize=3, label=variant, **style)
    ax.set_xlabel("noise level (%)")
    ax.set_ylabel("test accuracy (%)")
    ax.set_title(f"{subset[0].dataset if subset else ''}: {classifier} accuracy")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_instances_kept(rows: list[ExperimentRow], path) -> None:
    """Instances surviving each filter per noise level (classifier independent)."""
    first_clf = rows[0].classifier
    subset = [r for r in rows if r.classifier == first_clf]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for variant in _variant_order(subset):
        x, y, err = _series(subset, variant, "instances_kept_mean")
        style = {"linestyle": "--", "color": "black"} if variant == "original" else {}
        ax.errorbar(x, y, yerr=err, marker="o", capsize=3, label=variant, **style)
    ax.set_xlabel("noise level (%)")
    ax.set_ylabel("instances kept")
    ax.set_title(f"{subset[0].dataset}: training instances after filtering")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_filter_times(rows: list[ExperimentRow], path) -> None:
    """Mean filter wall time per variant, averaged over levels and repetitions."""
    first_clf = rows[0].classifier
    subset = [r for r in rows if r.classifier == first_clf and r.filter_name != "original"]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    variants = _variant_order(subset)
    means = []
    for variant in variants:
        times = [r.filter_time_s_mean for r in subset if _variant(r) == variant]
        means.append(float(np.mean(times)) if times else 0.0)
    ax.bar(range(len(variants)), means, color="tab:blue")
    ax.set_xticks(range(len(variants)))
    ax.set_xticklabels(variants, rotation=15, ha="right")
    ax.set_ylabel("filter wall time (s)")
    ax.set_title(f"{subset[0].dataset if subset else ''}: filter cost")
    ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_figures(rows: list[ExperimentRow], out_dir) -> list[Path]:
    """Write the standard figure set for a result table; returns the paths."""
    if not rows:
        return []
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    classifiers: dict[str, None] = {}
    for row in rows:
        classifiers.setdefault(row.classifier, None)
    for classifier in classifiers:
        path = out_dir / f"accuracy_{classifier}.png"
        plot_accuracy(rows, path, classifier)
        written.append(path)
    kept_path = out_dir / "instances_kept.png"
    plot_instances_kept(rows, kept_path)
    written.append(kept_path)
    if any(r.filter_name != "original" for r in rows):
        times_path = out_dir / "filter_times.png"
        plot_filter_times(rows, times_path)
        written.append(times_path)
    return written
