"""Figure rendering for verification reports.

When ``verify --figures DIR`` is given, each equality case gets a figure
showing the entry magnitudes of both sides and of their difference, and
the run gets a summary chart of per-case wall time coloured by outcome.
Files are named after their case, so repeated runs overwrite in place.
"""

from __future__ import annotations

import os
from typing import List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .matrix import Matrix
from .protocols import VerificationReport


def _magnitudes(m: Matrix):
    sr = m.sr
    out = []
    for i in range(m.rows):
        row = []
        for j in range(m.cols):
            x = m.entry(i, j)
            if hasattr(x, "to_complex"):
                row.append(abs(x.to_complex()))
            elif isinstance(x, complex):
                row.append(abs(x))
            else:
                row.append(float(x))
        out.append(row)
    return out


def render_case(report: VerificationReport, lhs: Matrix, rhs: Matrix,
                outdir: str) -> str:
    """Heatmaps of |entry| for both sides and their difference."""
    os.makedirs(outdir, exist_ok=True)
    lhs_m = _magnitudes(lhs)
    rhs_m = _magnitudes(rhs)
    diff = [[abs(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(lhs_m, rhs_m)]
    fig, axes = plt.subplots(1, 3, figsize=(9.5, 3.2))
    for ax, grid, title in zip(axes, (lhs_m, rhs_m, diff),
                               ("specification", "implementation", "difference")):
        im = ax.imshow(grid, cmap="viridis", aspect="auto", vmin=0.0)
        ax.set_title(title, fontsize=9)
        ax.set_xticks([])
        ax.set_yticks([])
        fig.colorbar(im, ax=ax, fraction=0.046)
    verdict = "equal" if report.equal else "NOT EQUAL"
    fig.suptitle(f"{report.case} [{report.model}] - {verdict}", fontsize=11)
    fig.tight_layout(rect=(0, 0, 1, 0.93))
    path = os.path.join(outdir, f"{report.case}.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def render_summary(reports: List[VerificationReport], outdir: str) -> str:
    """Horizontal bars of per-case wall time, green for pass, red for fail."""
    os.makedirs(outdir, exist_ok=True)
    reports = sorted(reports, key=lambda r: r.case)
    names = [r.case for r in reports]
    times = [r.ms for r in reports]
    colors = ["#2a9d4e" if r.equal else "#c0392b" for r in reports]
    height = max(2.0, 0.32 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(7.5, height))
    ax.barh(range(len(reports)), times, color=colors)
    ax.set_yticks(range(len(reports)))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("wall time (ms)")
    passed = sum(1 for r in reports if r.equal)
    ax.set_title(f"verification: {passed}/{len(reports)} cases exact")
    fig.tight_layout()
    path = os.path.join(outdir, "summary.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
