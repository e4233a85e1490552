"""
SVG diagrams with matplotlib

n = 3: ternary projection with shaded target cells, target boundaries and
surrogate level sets. n = 2 with d = 1: expected-loss curves over u.
Larger n falls back to a plain text table.
"""

from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .config import RENDER_THEMES, RenderTheme  # noqa: E402
from .elicitation import ReportAtlas  # noqa: E402
from .errors import InvalidInput  # noqa: E402
from .logger import log_info  # noqa: E402
from .surrogates import SurrogateLoss  # noqa: E402
from .targets import TargetLoss, boundary, cells  # noqa: E402

_CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])


def ternary_xy(points: np.ndarray) -> np.ndarray:
    """Barycentric (p1, p2, p3) -> plane coordinates; e1, e2, e3 at the triangle corners"""
    return np.atleast_2d(points) @ _CORNERS


def _ordered_polygon(xy: np.ndarray) -> np.ndarray:
    centre = xy.mean(axis=0)
    angles = np.arctan2(xy[:, 1] - centre[1], xy[:, 0] - centre[0])
    return xy[np.argsort(angles)]


def _frame(ax, labels: Sequence[str] = ("y=1", "y=2", "y=3")):
    ax.add_patch(Polygon(_CORNERS, closed=True, fill=False, edgecolor="black", linewidth=1.0))
    offsets = [(-0.05, -0.05), (0.02, -0.05), (-0.02, 0.03)]
    for (x, y), (dx, dy), label in zip(_CORNERS, offsets, labels):
        ax.text(x + dx, y + dy, label, fontsize=9)
    ax.set_xlim(-0.1, 1.1)
    ax.set_ylim(-0.1, 0.95)
    ax.set_aspect("equal")
    ax.axis("off")


def render_target(t: TargetLoss, path: str, theme: Optional[RenderTheme] = None, atlas: Optional[ReportAtlas] = None):
    """Ternary diagram of the target cells and boundaries, with level sets when an atlas is given"""
    if t.n != 3:
        render_table(t, path)
        return
    theme = theme or RENDER_THEMES["light"]
    fig, ax = plt.subplots(figsize=(5, 4.5))
    _frame(ax)

    for c in cells(t):
        V = c.polytope.vertex_array()
        if len(V) < 3:
            continue
        xy = _ordered_polygon(ternary_xy(V))
        ax.add_patch(
            Polygon(xy, closed=True, facecolor=theme.cells[c.report % len(theme.cells)], edgecolor="none")
        )
        centre = xy.mean(axis=0)
        ax.text(centre[0], centre[1], t.label(c.report), ha="center", va="center", fontsize=9)

    for r in range(t.k):
        for s in range(r + 1, t.k):
            b = boundary(t, r, s)
            if b.affine_dimension() == 1:
                xy = ternary_xy(b.vertex_array())
                ax.plot(xy[:, 0], xy[:, 1], color=theme.boundary, linewidth=2.5)

    if atlas is not None:
        for entry in atlas.entries:
            xy = ternary_xy(np.vstack([c.probs for c in entry.corners]))
            if len(xy) >= 2:
                ax.plot(xy[:, 0], xy[:, 1], color=theme.level_set, linewidth=1.2)
            else:
                ax.plot(xy[:, 0], xy[:, 1], "o", color=theme.level_set, markersize=2)

    ax.set_title(t.name or "target")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    log_info(f"wrote {path}")


def render_loss_curves(
    s: SurrogateLoss,
    distributions: Sequence[Sequence[float]],
    path: str,
    radius: float = 3.0,
):
    """Expected loss <p, L(u)> over u for each p, for 1-d surrogates"""
    if s.d != 1:
        raise InvalidInput(f"loss curves need a 1-d surrogate, {s.name} has d = {s.d}")
    grid = np.linspace(-radius, radius, 601)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    values = s.values(grid.reshape(-1, 1))
    for p in distributions:
        w = np.asarray(p, dtype=float)
        ax.plot(grid, values @ w, label=f"p = {tuple(np.round(w, 3))}")
    ax.set_xlabel("u")
    ax.set_ylabel("expected loss")
    ax.legend(fontsize=8)
    ax.set_title(s.name)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    log_info(f"wrote {path}")


def render_table(t: TargetLoss, path: str):
    """Plain-text cell table for targets with more than three outcomes"""
    lines: List[str] = [f"target {t.name} (k={t.k}, n={t.n})"]
    for c in cells(t):
        lines.append(f"report {t.label(c.report)}: loss {t.loss_matrix[c.report].tolist()}")
        for v in c.polytope.vertices:
            lines.append("  vertex " + ", ".join(f"{x:.6g}" for x in v.probs))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    log_info(f"wrote table {path}")
