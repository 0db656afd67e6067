"""Matplotlib figures of a layered network and its schedule."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .export import ROLE_COLORS, concept_roles  # noqa: E402
from .network import MAX_LAYERS, SymNetwork  # noqa: E402
from .paths import Schedule  # noqa: E402

LAYER_NAMES = ("types", "shared", "triples", "upper")


def layout(network: SymNetwork) -> dict[str, tuple[float, float]]:
    """Layer index on y, nodes spread evenly along x in id order."""
    pos = {}
    for layer in range(MAX_LAYERS):
        row = sorted(n.id for n in network.layer(layer))
        for i, nid in enumerate(row):
            pos[nid] = ((i + 1) / (len(row) + 1), float(layer))
    return pos


def plot_network(network: SymNetwork, path: str | Path, dead: set[str] = frozenset()) -> Path:
    path = Path(path)
    pos = layout(network)
    roles = concept_roles(network)
    fig, ax = plt.subplots(figsize=(9, 5), facecolor="w")
    for a, b in sorted(network.edges):
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.7", lw=0.8, zorder=1)
    for n in network.nodes:
        x, y = pos[n.id]
        if n.layer == 0:
            color = ROLE_COLORS[n.role]
        elif n.layer == 2:
            color = "0.35"
        else:
            color = ROLE_COLORS[roles.get(n.concepts[0].symbol, "objects")]
        ax.scatter([x], [y], s=1400 if n.layer == 0 else 420, marker="s" if n.layer == 0 else "o",
                   color="w", edgecolors=color, linewidths=2,
                   linestyle="--" if n.id in dead else "-", zorder=2)
        ax.annotate(n.id, (x, y), ha="center", va="center", fontsize=7, zorder=3)
    ax.set_yticks(range(MAX_LAYERS))
    ax.set_yticklabels(LAYER_NAMES)
    ax.set_xticks([])
    ax.set_xlim(0, 1)
    ax.set_ylim(-0.6, MAX_LAYERS - 0.4)
    for side in ("top", "right", "bottom"):
        ax.spines[side].set_visible(False)
    ax.set_title(network.script_ref)
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_schedule(schedule: Schedule, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    rows = [" - ".join(c.label for c in s.realized) for s in schedule.steps]
    rows.append("all concepts realized")
    fig, ax = plt.subplots(figsize=(6, 0.5 + 0.45 * len(rows)), facecolor="w")
    for i, text in enumerate(rows):
        y = len(rows) - i
        ax.annotate(f"{i + 1}. {text}", (0.02, y), va="center", fontsize=10)
        if i:
            ax.annotate("", xy=(0.01, y), xytext=(0.01, y + 1),
                        arrowprops={"arrowstyle": "->", "color": "0.5"})
    ax.set_xlim(0, 1)
    ax.set_ylim(0.4, len(rows) + 0.6)
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path
