"""Aggregate per-seed results into tables and figures."""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .metrics import mean_sem


def collect_results(outdir) -> list[dict]:
    results = []
    for path in sorted(Path(outdir).glob("*/result.json")):
        results.append(json.loads(path.read_text()))
    return results


def aggregate(results: list[dict]) -> list[dict]:
    """Mean ± SEM of the final metric per (dataset, latent kind)."""
    groups: dict[tuple[str, str], list[float]] = defaultdict(list)
    for res in results:
        if res.get("status") == "ok":
            groups[(res["dataset"], res["latent_kind"])].append(res["final_metric"])
    rows = []
    for (dataset, latent), values in sorted(groups.items()):
        mean, sem = mean_sem(values)
        rows.append({"dataset": dataset, "latent": latent, "seeds": len(values),
                     "mean": mean, "sem": sem})
    return rows


def render_table(rows: list[dict]) -> str:
    lines = [f"{'dataset':<16} {'latent':<10} {'seeds':>5} {'mean':>10} {'sem':>10}"]
    for row in rows:
        sem = "" if row["sem"] is None else f"{row['sem']:.4f}"
        lines.append(f"{row['dataset']:<16} {row['latent']:<10} {row['seeds']:>5} "
                     f"{row['mean']:>10.4f} {sem:>10}")
    return "\n".join(lines)


def write_summary(outdir, rows: list[dict]) -> Path:
    out = Path(outdir) / "summary.csv"
    lines = ["dataset,latent,seeds,mean,sem"]
    for row in rows:
        sem = "" if row["sem"] is None else repr(row["sem"])
        lines.append(f"{row['dataset']},{row['latent']},{row['seeds']},"
                     f"{row['mean']!r},{sem}")
    out.write_text("\n".join(lines) + "\n")
    return out


def plot_curves(outdir) -> Path | None:
    """Metric-vs-iteration curves for every run found under ``outdir``."""
    outdir = Path(outdir)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    seen = False
    for csv in sorted(outdir.glob("*/metrics.csv")):
        rows = np.loadtxt(csv, delimiter=",", skiprows=1, ndmin=2)
        if rows.size == 0:
            continue
        ax.plot(rows[:, 0], rows[:, 1], alpha=0.6, label=csv.parent.name)
        seen = True
    if not seen:
        plt.close(fig)
        return None
    ax.set_xlabel("iteration")
    ax.set_ylabel("metric")
    ax.legend(fontsize=6)
    fig.tight_layout()
    path = outdir / "curves.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_generated_2d(outdir, centers: np.ndarray) -> list[Path]:
    """Scatter plots of the saved 2D generator outputs."""
    outdir = Path(outdir)
    paths = []
    for npy in sorted(outdir.glob("*/generated.npy")):
        samples = np.load(npy)
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        ax.scatter(samples[:, 0], samples[:, 1], s=2, alpha=0.25)
        ax.scatter(centers[:, 0], centers[:, 1], marker="x", color="red")
        ax.set_title(npy.parent.name, fontsize=8)
        ax.set_aspect("equal")
        fig.tight_layout()
        path = npy.parent / "generated.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths
