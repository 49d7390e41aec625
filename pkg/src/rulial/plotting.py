"""Figures written next to the CSV tables.  Always uses the Agg backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

DPI = 120


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-stable
    fig.savefig(path, dpi=DPI, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def plot_growth(seqs, path, log: bool = True) -> Path:
    """Ball size against t, one line per growth sequence."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for seq in seqs:
        ax.plot(range(len(seq.counts)), seq.counts, marker="o", ms=3,
                label=f"s={seq.spec.s} k={seq.spec.k} {seq.mode}")
    if log:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("configurations within distance t")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_reach(profile, path) -> Path:
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.2))
    ts = range(profile.t_max + 1)
    a1.plot(ts, profile.cumulative, marker="o", ms=3)
    a1.set_xlabel("t")
    a1.set_ylabel("cumulative")
    a2.bar(ts, profile.novel, color="tab:orange")
    a2.set_xlabel("t")
    a2.set_ylabel("first reached at t")
    fig.suptitle(f"deterministic reach, s={profile.spec.s} k={profile.spec.k}", fontsize=10)
    return _save(fig, path)


def plot_ca_counts(counts, path, marks=(16, 32)) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3))
    ax.plot(range(len(counts)), counts, drawstyle="steps-mid", lw=1)
    for t in marks:
        if t < len(counts):
            ax.axvline(t, color="grey", ls=":", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("new configurations")
    return _save(fig, path)


def plot_layers(sizes, path, xlabel: str = "distance") -> Path:
    """Bar chart of layer sizes (BFS layers, geodesic layers and so on)."""
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(range(len(sizes)), sizes)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("nodes")
    return _save(fig, path)
