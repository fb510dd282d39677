"""Figure rendering for audit reports and experiment sweeps.

Figures are written next to the delimited output they visualize; every
function returns the path it wrote. Rendering is headless (Agg).
"""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

_KIND_COLORS = {"tree": "tab:blue", "rulelist": "tab:orange"}


def save_leak_cdf_figure(cdf: Sequence[tuple[float, float]], path, title: str = "") -> str:
    """Step plot of the per-example entropy-ratio distribution."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if cdf:
        xs = [r for r, _ in cdf]
        ys = [p for _, p in cdf]
        ax.step([0.0] + xs, [0.0] + ys, where="post")
        ax.plot(xs, ys, "o", markersize=3)
    ax.set_xlabel("entropy reduction ratio (at most)")
    ax.set_ylabel("proportion of training examples")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(0, 1.05)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def _series_by(rows: Sequence[Mapping], x_key: str, y_key: str):
    """Group rows by (model_kind, min_support) and average y over seeds at
    each x."""
    grouped = defaultdict(lambda: defaultdict(list))
    for row in rows:
        grouped[(row["model_kind"], row["min_support"])][row[x_key]].append(row[y_key])
    series = {}
    for key, per_x in grouped.items():
        xs = sorted(per_x)
        ys = [sum(per_x[x]) / len(per_x[x]) for x in xs]
        series[key] = (xs, ys)
    return series


def save_xy_figure(
    rows: Sequence[Mapping], x_key: str, y_key: str, path, x_label: str, y_label: str
) -> str:
    """Line-per-configuration plot of one experiment CSV family."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for (kind, support), (xs, ys) in sorted(_series_by(rows, x_key, y_key).items()):
        ax.plot(
            xs,
            ys,
            marker="o",
            markersize=4,
            color=_KIND_COLORS.get(kind),
            alpha=0.75,
            label=f"{kind}, support {support:g}",
        )
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_leak_cdf_family_figure(leak_rows: Sequence[Mapping], path) -> str:
    """Overlay the per-example leak distributions of the deepest models."""
    fig, ax = plt.subplots(figsize=(6, 4))
    max_depth = max((r["max_depth"] for r in leak_rows), default=0)
    grouped = defaultdict(list)
    for row in leak_rows:
        if row["max_depth"] == max_depth:
            grouped[(row["model_kind"], row["seed"])].append(row)
    for (kind, seed), rows in sorted(grouped.items()):
        rows = sorted(rows, key=lambda r: r["entropy_ratio"])
        ax.step(
            [r["entropy_ratio"] for r in rows],
            [r["cumulative_proportion"] for r in rows],
            where="post",
            color=_KIND_COLORS.get(kind),
            alpha=0.6,
            label=f"{kind}, seed {seed}",
        )
    ax.set_xlabel(f"entropy reduction ratio (depth {max_depth})")
    ax.set_ylabel("proportion of training examples")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(0, 1.05)
    ax.grid(True, alpha=0.3)
    if grouped:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
