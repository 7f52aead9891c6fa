"""
Pictures of the W^c alcoves of a rank-2 type coloured by clan
"""

import logging
from typing import List, Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from analysis.affine_roots import Alcove, AffineRootSystem

logger = logging.getLogger(__name__)


def _euclidean_frame(system: AffineRootSystem) -> np.ndarray:
    """Rows give the fundamental coweights in an orthonormal frame"""
    gram = np.linalg.inv(system.datum.form.astype(float))
    return np.linalg.cholesky(gram)


def alcove_vertices(system: AffineRootSystem, alcove: Alcove) -> np.ndarray:
    """
    Vertices of an alcove in pairing coordinates

    The fundamental alcove has vertices 0 and e_i / theta_i.
    """
    theta = system.datum.highest_root
    base = [np.zeros(system.n)] + [np.eye(system.n)[i] / theta[i] for i in range(system.n)]
    return np.array([alcove.linear @ v + alcove.translation for v in base], dtype=float)


def clan_picture(system: AffineRootSystem, radius: int, path: str, title: Optional[str] = None) -> List[dict]:
    """
    Draw the W^c alcoves within the radius, one colour per clan

    Args:
        system: affine root system of a rank-2 type
        radius: BFS radius
        path: output image file
        title: plot title (defaults to type and slope)

    Returns:
        the clans that were drawn
    """
    if system.n != 2:
        raise ValueError(f"Clan pictures need a rank-2 type, got rank {system.n}")
    clans = system.enumerate_clans(radius)
    frame = _euclidean_frame(system)
    colours = plt.get_cmap("tab20")

    fig, ax = plt.subplots(figsize=(8, 8))
    for index, clan in enumerate(clans):
        colour = colours(index % 20)
        for alcove in clan["members"]:
            vertices = alcove_vertices(system, alcove) @ frame
            ax.add_patch(plt.Polygon(vertices, facecolor=colour, edgecolor="white", linewidth=0.5, alpha=0.8))
        if clan["bounded"] and not clan["touches_frontier"]:
            for alcove in clan["members"]:
                vertices = alcove_vertices(system, alcove) @ frame
                ax.add_patch(plt.Polygon(vertices, fill=False, edgecolor="black", linewidth=1.5))
        first = alcove_vertices(system, clan["members"][0]) @ frame
        centroid = first.mean(axis=0)
        ax.annotate(clan["words"][0], centroid, fontsize=6, ha="center", va="center")

    fundamental = alcove_vertices(system, system.fundamental_alcove()) @ frame
    ax.add_patch(plt.Polygon(fundamental, fill=False, edgecolor="red", linewidth=2))

    ax.set_title(title or f"{system.datum.label} c={system.slope}, radius {radius}", fontsize=14)
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.grid(True, alpha=0.3)
    plt.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    logger.info(f"Saved clan picture with {len(clans)} clans to {path}")
    return clans
