"""Figure rendering for report outputs.

Every CLI path that writes delimited numeric output can also render a
matplotlib figure next to it (--plot); figures are saved to file with the
Agg backend and never shown interactively.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MAX_SCATTER = 20000


def plot_range_certificate(curve, samples=None, path="range.png", title=None):
    """Boundary support polygon plus (optionally) the sampled point cloud."""
    fig, ax = plt.subplots(figsize=(6, 6))
    if samples is not None and len(samples):
        pts = np.asarray(samples)
        if len(pts) > MAX_SCATTER:
            step = len(pts) // MAX_SCATTER + 1
            pts = pts[::step]
        ax.plot(pts[:, 0], pts[:, 1], ".", ms=1.5, color="#9ecae1",
                label=f"samples (showing {len(pts)})")
    bp = curve.support_points
    closed = np.vstack([bp, bp[:1]])
    ax.plot(closed[:, 0], closed[:, 1], "-", lw=1.2, color="#08519c",
            label="support boundary")
    if curve.flat.any():
        fl = bp[curve.flat]
        ax.plot(fl[:, 0], fl[:, 1], "s", ms=3, color="#de2d26",
                label="flat supporting faces")
    ax.set_aspect("equal")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_point_cloud(points, path="points.png", title=None, extra=None):
    """2-d scatter of attained range points (first two coordinates if k > 2,
    a strip plot if k == 1)."""
    pts = np.asarray(points, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 5))
    if pts.ndim == 1 or pts.shape[1] == 1:
        x = pts.ravel()
        ax.plot(x, np.zeros_like(x), "|", ms=12, color="#08519c")
        ax.set_yticks([])
    else:
        show = pts
        if len(show) > MAX_SCATTER:
            step = len(show) // MAX_SCATTER + 1
            show = show[::step]
        ax.plot(show[:, 0], show[:, 1], ".", ms=2, color="#08519c")
        ax.set_xlabel("component 1")
        ax.set_ylabel("component 2")
    if extra is not None:
        ex = np.asarray(extra, dtype=float)
        ax.plot(ex[:, 0], ex[:, 1], "x", ms=5, color="#de2d26")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_refinement_study(study, path="refine.png", title=None):
    """Defect vs refinement round, with the max atom mass for scale."""
    floor = 1e-18  # keep zero defects visible on the log axis
    rounds = [e["round"] for e in study]
    defects = [max(e["defect"], floor) for e in study]
    masses = [e["max_mass"] for e in study]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(rounds, defects, "o-", color="#08519c", label="midpoint defect")
    ax.plot(rounds, [2 * m for m in masses], "s--", color="#777777",
            label="2 x max atom mass")
    if any("constrained_defect" in e for e in study):
        cons = [(e["round"], e["constrained_defect"]) for e in study
                if "constrained_defect" in e]
        ax.plot([c[0] for c in cons], [c[1] for c in cons], "d-",
                color="#de2d26", label="constrained defect")
    ax.set_xlabel("refinement round")
    ax.set_ylabel("defect")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
