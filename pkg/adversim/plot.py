"""Planar drawings of three-processor protocol complexes."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

import matplotlib
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.figure import Figure
from matplotlib.tri import Triangulation

from .complex import SimComplex
from .errors import UnsupportedDimensionError


@dataclass
class ComplexPlot:
    """Subdivided triangle with vertices colored by processor."""

    complex: SimComplex
    title: Optional[str] = None

    BG = "#ffffff"
    EDGE = "#546e7a"
    COLORS = ("#ef5350", "#42a5f5", "#66bb6a")
    CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])

    def __post_init__(self) -> None:
        if self.complex.n != 3:
            raise UnsupportedDimensionError(f"Planar drawing needs n = 3, got n = {self.complex.n}.")

    def coordinates(self) -> tuple[list[int], np.ndarray]:
        """Vertex ids and their planar coordinates."""
        ids = [v.id for v in self.complex.vertices]
        barycentric = np.asarray([v.position for v in self.complex.vertices], dtype=float)
        return ids, barycentric @ self.CORNERS

    def figure(self, fig: Optional[Figure] = None) -> Figure:
        ids, xy = self.coordinates()
        row = {vid: idx for idx, vid in enumerate(ids)}
        triangles = np.asarray([[row[v] for v in top] for top in self.complex.tops], dtype=int)

        if fig is None:
            fig = Figure(figsize=(6, 5.4), facecolor=self.BG)
        ax = fig.add_subplot(1, 1, 1)
        ax.set_facecolor(self.BG)
        ax.triplot(Triangulation(xy[:, 0], xy[:, 1], triangles), color=self.EDGE, linewidth=0.8)
        colors = [self.COLORS[v.color] for v in self.complex.vertices]
        ax.scatter(xy[:, 0], xy[:, 1], c=colors, s=28, zorder=3, edgecolors="#263238", linewidths=0.5)
        for corner, (x, y) in enumerate(self.CORNERS):
            ax.annotate(f"p{corner}", (x, y), textcoords="offset points", xytext=(0, -14 if y == 0 else 6), ha="center")
        ax.set_aspect("equal")
        ax.set_axis_off()
        title = self.title or f"k = {self.complex.k}, {len(self.complex.tops)} simplices"
        ax.set_title(title, loc="left", fontsize=11)
        return fig

    def to_svg(self) -> bytes:
        """Byte-identical SVG for identical complexes."""
        buf = io.BytesIO()
        with matplotlib.rc_context({"svg.hashsalt": "adversim", "svg.fonttype": "none"}):
            self.figure().savefig(buf, format="svg", metadata={"Date": None}, facecolor=self.BG)
        return buf.getvalue()

    def plot(self, savefig: str | None = None) -> None:
        """Save as SVG when ``savefig`` is given, else show interactively."""
        if savefig:
            with open(savefig, "wb") as handle:
                handle.write(self.to_svg())
            return
        self.figure(plt.figure(figsize=(6, 5.4), facecolor=self.BG))
        plt.show()
