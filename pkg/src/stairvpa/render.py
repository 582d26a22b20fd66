"""DOT export and figure rendering for step graphs."""

from __future__ import annotations

import math

from .summaries import StepGraph


def step_graph_dot(graph: StepGraph) -> str:
    """DOT digraph listing exactly the step-graph vertices and edges,
    vertices labeled with their priorities."""
    lines = ["digraph steps {"]
    for v in graph.vertices:
        lines.append(f'  "{v}" [label="{v}/{graph.vertex_priority[v]}"];')
    for a, b in sorted(graph.edges):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_step_graph_figure(graph: StepGraph, path: str) -> None:
    """Render the step graph to an image file on a circular layout."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import FancyArrowPatch

    n = len(graph.vertices)
    pos = {}
    radius = 1.0 if n > 1 else 0.0
    for i, v in enumerate(graph.vertices):
        angle = 2 * math.pi * i / max(n, 1) + math.pi / 2
        pos[v] = (radius * math.cos(angle), radius * math.sin(angle))

    fig, ax = plt.subplots(figsize=(5, 5))
    for a, b in sorted(graph.edges):
        xa, ya = pos[a]
        if a == b:
            loop = plt.Circle((xa, ya + 0.17), 0.12, fill=False, color="gray")
            ax.add_patch(loop)
            continue
        xb, yb = pos[b]
        arrow = FancyArrowPatch((xa, ya), (xb, yb), arrowstyle="-|>", mutation_scale=14,
                                connectionstyle="arc3,rad=0.12", color="gray",
                                shrinkA=16, shrinkB=16)
        ax.add_patch(arrow)
    for v, (x, y) in pos.items():
        ax.add_patch(plt.Circle((x, y), 0.14, facecolor="white", edgecolor="black", zorder=3))
        ax.text(x, y, f"{v}\n{graph.vertex_priority[v]}", ha="center", va="center",
                fontsize=8, zorder=4)
    ax.set_xlim(-1.5, 1.5)
    ax.set_ylim(-1.5, 1.5)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
