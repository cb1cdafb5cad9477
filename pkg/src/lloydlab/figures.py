"""Figure rendering for the experiment report path.

Figures are written as PNG files next to the CSV records.  They are a
reporting aid only: nothing downstream reads them, and the determinism
contract covers the CSV outputs, not the image bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def _a_s_histogram(rows, out_dir: Path) -> None:
    vals = [r["mis_rate"] for r in rows if r.get("mis_rate") is not None]
    if not vals:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(vals, bins=30, color="steelblue", edgecolor="white")
    bound = rows[0].get("bound")
    if bound is not None:
        ax.axvline(bound, color="crimson", linestyle="--", label=f"bound = {bound:.3g}")
        ax.legend()
    ax.set_xlabel("terminal misclustering rate")
    ax.set_ylabel("replicates")
    _save(fig, out_dir / "a_s_histogram.png")


def _trajectory_plot(traj, out_dir: Path, name: str = "trajectory.png") -> None:
    m = traj.metric_array()
    iters = np.arange(m.shape[0])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(iters, m[:, 0], marker="o", label="misclustering rate")
    ax.plot(iters, m[:, 1], marker="s", label="cluster-wise rate")
    if not np.all(np.isnan(m[:, 2])):
        ax.plot(iters, m[:, 2], marker="^", label="scaled center error")
    ax.set_xlabel("iteration")
    ax.set_ylabel("metric")
    ax.legend()
    _save(fig, out_dir / name)


def _figure1_scatter(sample, adv_traj, oracle_traj, out_dir: Path) -> None:
    from .experiments import figure1_geometry

    centers, adversarial = figure1_geometry()
    fig, axes = plt.subplots(1, 2, figsize=(11, 5), sharex=True, sharey=True)
    for ax, traj, init, title in (
        (axes[0], adv_traj, adversarial, "adversarial initialization"),
        (axes[1], oracle_traj, centers, "oracle initialization"),
    ):
        term = traj.terminal
        ax.scatter(
            sample.observed[:, 0], sample.observed[:, 1],
            c=term.assignments, cmap="tab10", s=12, alpha=0.7,
        )
        ax.scatter(centers[:, 0], centers[:, 1], marker="x", c="black", s=90,
                   label="true centers")
        ax.scatter(init[:, 0], init[:, 1], marker="^", c="crimson", s=70,
                   label="initial centers")
        ax.scatter(term.centers[:, 0], term.centers[:, 1], marker="*", c="gold",
                   edgecolors="black", s=160, label="final centers")
        ax.set_title(f"{title}: terminal rate {term.mis_rate:.3f}")
        ax.set_ylim(-4.5, 4.5)
    axes[0].legend(loc="lower left", fontsize=8)
    _save(fig, out_dir / "figure1_scenario.png")


def _sigclust_plot(report, out_dir: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(report.null_cis, bins=25, color="gray", edgecolor="white",
            label="null cluster indices")
    ax.axvline(report.ci_observed, color="crimson", linestyle="--",
               label=f"observed CI = {report.ci_observed:.3f}")
    ax.set_xlabel("cluster index")
    ax.set_ylabel("null replicates")
    ax.set_title(f"p = {report.p_value:.3f}")
    ax.legend()
    _save(fig, out_dir / "sigclust_null.png")


def _p_value_histogram(rows, out_dir: Path) -> None:
    vals = [r["p_value"] for r in rows if r.get("p_value") is not None]
    if not vals:
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(vals, bins=20, range=(0, 1), color="steelblue", edgecolor="white")
    ax.set_xlabel("p-value")
    ax.set_ylabel("replicates")
    _save(fig, out_dir / "p_values.png")


def _rate_bar(rows, key: str, label: str, out_dir: Path, name: str) -> None:
    vals = [bool(r[key]) for r in rows if r.get(key) is not None]
    if not vals:
        return
    freq = sum(vals) / len(vals)
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar([label], [freq], color="steelblue")
    ax.set_ylim(0, 1)
    ax.set_ylabel("frequency")
    ax.bar_label(ax.containers[0], fmt="%.3f")
    _save(fig, out_dir / name)


def _embedding_scatter(points, assignments, out_dir: Path) -> None:
    if points.shape[1] < 2:
        points = np.column_stack([points[:, 0], np.zeros(points.shape[0])])
    fig, ax = plt.subplots(figsize=(5, 5))
    if assignments is not None:
        ax.scatter(points[:, 0], points[:, 1], s=12, alpha=0.7,
                   c=np.asarray(assignments), cmap="tab10")
    else:
        ax.scatter(points[:, 0], points[:, 1], s=12, alpha=0.7, color="steelblue")
    ax.set_xlabel("embedding dim 1")
    ax.set_ylabel("embedding dim 2")
    _save(fig, out_dir / "embedding.png")


def render_run_figures(config, rows, artifacts, out_dir: Path) -> None:
    """Render the per-kind report figures for one experiment run."""
    out_dir = Path(out_dir)
    artifacts = artifacts or {}
    _a_s_histogram(rows, out_dir)
    if "_trajectory" in artifacts:
        _trajectory_plot(artifacts["_trajectory"], out_dir)
    if config.kind == "figure1" and "_sample" in artifacts:
        _figure1_scatter(
            artifacts["_sample"],
            artifacts["_trajectory"],
            artifacts["_oracle_trajectory"],
            out_dir,
        )
    if "_report" in artifacts:
        _sigclust_plot(artifacts["_report"], out_dir)
    _p_value_histogram(rows, out_dir)
    _rate_bar(rows, "seed_separated", "seeds separated", out_dir, "seed_separation.png")
    _rate_bar(rows, "exact_recovery", "exact recovery", out_dir, "exact_recovery.png")
    if "_points" in artifacts:
        _embedding_scatter(
            np.asarray(artifacts["_points"]), artifacts.get("_assignments"), out_dir
        )


def render_sweep_figure(config, param, values, long_rows, out_dir: Path) -> None:
    """Trend of the headline aggregate against the swept parameter."""
    out_dir = Path(out_dir)
    for key, label in (
        ("exact_recovery", "exact recovery frequency"),
        ("seed_separated", "seed separation frequency"),
        ("bound_satisfied", "bound satisfaction frequency"),
        ("mis_rate", "mean terminal misclustering rate"),
    ):
        series = []
        for v in values:
            vals = [r[key] for r in long_rows if r["value"] == v and r.get(key) is not None]
            if not vals:
                break
            if key == "mis_rate":
                series.append(float(np.mean(vals)))
            else:
                series.append(sum(bool(x) for x in vals) / len(vals))
        if len(series) == len(values):
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.plot([float(v) for v in values], series, marker="o")
            ax.set_xlabel(param)
            ax.set_ylabel(label)
            _save(fig, out_dir / f"sweep_{key}.png")
            break
