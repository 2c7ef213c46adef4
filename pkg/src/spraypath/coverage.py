"""Raster coverage oracle.

Each ON interval stamps the cells whose centres fall inside the boom swath of
the path pieces it spans.  A cell is counted at most once per interval, so a
single continuous pass never overlaps itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Optional

import numpy as np

from .geometry import Arc, Line, PlannedPath, Point


class CellTooCoarse(ValueError):
    pass


def in_swath(seg, width: float, x, y) -> np.ndarray:
    """Points swept by a boom of ``width`` held perpendicular to ``seg``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    half = width / 2.0
    if isinstance(seg, Line):
        L = seg.length
        ux, uy = (seg.end.x - seg.start.x) / L, (seg.end.y - seg.start.y) / L
        dx, dy = x - seg.start.x, y - seg.start.y
        t = dx * ux + dy * uy
        perp = dy * ux - dx * uy
        return (t >= 0.0) & (t <= L) & (np.abs(perp) <= half)
    dx, dy = x - seg.center.x, y - seg.center.y
    rho = np.hypot(dx, dy)
    phi = np.arctan2(dy, dx)
    R = seg.radius
    near = seg._in_span(phi) & (rho <= R + half) & (rho >= R - half)
    if R < half:
        # the inner end of the boom swings across the turn centre
        near |= seg._in_span(phi + math.pi) & (rho <= half - R)
    return near


def swath_bbox(seg, width: float) -> tuple:
    half = width / 2.0
    if isinstance(seg, Line):
        xs = (seg.start.x, seg.end.x)
        ys = (seg.start.y, seg.end.y)
        return min(xs) - half, min(ys) - half, max(xs) + half, max(ys) + half
    r = seg.radius + half
    return seg.center.x - r, seg.center.y - r, seg.center.x + r, seg.center.y + r


def swath_area(seg, width: float) -> float:
    """Closed-form swept area (rectangle or annulus sector plus the crossed-centre sector)."""
    half = width / 2.0
    if isinstance(seg, Line):
        return seg.length * width
    R, sweep = seg.radius, abs(seg.sweep)
    if R >= half:
        return sweep * R * width
    return 0.5 * sweep * ((R + half) ** 2 + (half - R) ** 2)


def _union_bbox(boxes) -> tuple:
    boxes = list(boxes)
    return (min(b[0] for b in boxes), min(b[1] for b in boxes),
            max(b[2] for b in boxes), max(b[3] for b in boxes))


@dataclass
class CoverageGrid:
    origin: Point
    cell: float
    counts: np.ndarray   # (ny, nx) pass counts; row index grows northwards

    def __post_init__(self):
        if not self.cell > 0:
            raise ValueError("cell must be positive")

    @classmethod
    def empty(cls, bounds: tuple, cell: float) -> "CoverageGrid":
        x0, y0, x1, y1 = bounds
        # snap to multiples of the cell so straight swath edges fall on cell edges
        gx = math.floor(x0 / cell + 1e-9) * cell
        gy = math.floor(y0 / cell + 1e-9) * cell
        nx = int(math.ceil((x1 - gx) / cell - 1e-9))
        ny = int(math.ceil((y1 - gy) / cell - 1e-9))
        return cls(Point(gx, gy), cell, np.zeros((ny, nx), dtype=np.int32))

    @property
    def shape(self) -> tuple:
        return self.counts.shape

    @property
    def bounds(self) -> tuple:
        ny, nx = self.counts.shape
        return (self.origin.x, self.origin.y,
                self.origin.x + nx * self.cell, self.origin.y + ny * self.cell)

    def index_window(self, box: tuple) -> tuple:
        """Row/column slices of the cells whose centres may lie in ``box``."""
        ny, nx = self.counts.shape
        c = self.cell
        i0 = max(int(math.floor((box[0] - self.origin.x) / c)), 0)
        i1 = min(int(math.ceil((box[2] - self.origin.x) / c)) + 1, nx)
        j0 = max(int(math.floor((box[1] - self.origin.y) / c)), 0)
        j1 = min(int(math.ceil((box[3] - self.origin.y) / c)) + 1, ny)
        return slice(j0, max(j0, j1)), slice(i0, max(i0, i1))

    def centres(self, rows: slice = slice(None), cols: slice = slice(None)):
        ny, nx = self.counts.shape
        jr = np.arange(ny)[rows]
        ir = np.arange(nx)[cols]
        xs = self.origin.x + (ir + 0.5) * self.cell
        ys = self.origin.y + (jr + 0.5) * self.cell
        return np.meshgrid(xs, ys)

    def lookup(self, x, y) -> np.ndarray:
        """Pass count of the cell containing each point (0 outside the grid)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ny, nx = self.counts.shape
        i = np.floor((x - self.origin.x) / self.cell).astype(int)
        j = np.floor((y - self.origin.y) / self.cell).astype(int)
        inside = (i >= 0) & (i < nx) & (j >= 0) & (j < ny)
        out = np.zeros(x.shape, dtype=self.counts.dtype)
        out[inside] = self.counts[j[inside], i[inside]]
        return out

    def swept_area(self) -> float:
        return float(np.count_nonzero(self.counts >= 1)) * self.cell ** 2

    def overlap_area(self) -> float:
        return float(np.count_nonzero(self.counts >= 2)) * self.cell ** 2

    def stamp(self, pieces, width: float) -> None:
        """Add one pass for the union of ``pieces``."""
        pieces = list(pieces)
        if not pieces:
            return
        rows, cols = self.index_window(_union_bbox(swath_bbox(p, width) for p in pieces))
        mask = np.zeros(self.counts[rows, cols].shape, dtype=bool)
        if mask.size == 0:
            return
        for p in pieces:
            r, c = self.index_window(swath_bbox(p, width))
            r = slice(max(r.start, rows.start), min(r.stop, rows.stop))
            c = slice(max(c.start, cols.start), min(c.stop, cols.stop))
            if r.stop <= r.start or c.stop <= c.start:
                continue
            X, Y = self.centres(r, c)
            sub = (slice(r.start - rows.start, r.stop - rows.start),
                   slice(c.start - cols.start, c.stop - cols.start))
            mask[sub] |= in_swath(p, width, X, Y)
        self.counts[rows, cols] += mask

    def image(self) -> np.ndarray:
        """8-bit grey image, north up: 0 unsprayed, 128 one pass, 255 two or more."""
        img = np.where(self.counts >= 2, 255, np.where(self.counts == 1, 128, 0)).astype(np.uint8)
        return img[::-1]

    def to_pgm(self, path) -> None:
        img = self.image()
        h, w = img.shape
        Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes())

    def to_png(self, path) -> None:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        plt.imsave(str(path), self.image(), cmap="gray", vmin=0, vmax=255)


def path_bounds(path: PlannedPath) -> tuple:
    boxes = [swath_bbox(s, 0.0) for s in path.segments]
    return _union_bbox(boxes)


def rasterize(path: PlannedPath, program, width: float, cell: float = 0.25, *,
              bounds: Optional[tuple] = None, layout=None) -> CoverageGrid:
    """Stamp every ON interval of ``program`` into a fresh grid.

    Bounds default to the layout's target region dilated by ``width``, or to
    the path's bounding box dilated by ``width`` when no layout is given.
    """
    if cell > width / 8.0 + 1e-12:
        raise CellTooCoarse(f"cell {cell} m exceeds working_width/8 = {width / 8.0} m")
    if bounds is None:
        if layout is not None:
            x0, y0, x1, y1, _ = layout.target
        elif path.segments:
            x0, y0, x1, y1 = path_bounds(path)
        else:
            x0, y0, x1, y1 = 0.0, 0.0, cell, cell
        bounds = (x0 - width, y0 - width, x1 + width, y1 + width)
    grid = CoverageGrid.empty(bounds, cell)
    for s_on, s_off in program.intervals:
        grid.stamp((p for _, p, _ in path.pieces(s_on, s_off)), width)
    return grid


@dataclass(frozen=True)
class CoverageReport:
    target_area: float
    covered_area: float
    overlap_area: float
    missed_area: float
    spray_outside_target: float
    coverage_ratio: float
    overlap_ratio: float
    target_area_exact: float
    corner_sliver_area: float
    cell: float

    def to_json(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if k == "cell":
                out["cell_m"] = v
            elif k.endswith("ratio"):
                out[k] = v
            else:
                out[f"{k}_m2"] = v
        return out


def coverage_report(grid: CoverageGrid, layout) -> CoverageReport:
    """Covered, overlapped and missed area of ``grid`` against the layout's target region."""
    X, Y = grid.centres()
    target = layout.in_target(X, Y)
    counts = grid.counts
    a = grid.cell ** 2
    target_area = float(np.count_nonzero(target)) * a
    covered = float(np.count_nonzero(target & (counts >= 1))) * a
    overlap = float(np.count_nonzero(counts >= 2)) * a
    missed = float(np.count_nonzero(target & (counts == 0))) * a
    outside = float(np.count_nonzero(~target & (counts >= 1))) * a
    cov_ratio = covered / target_area if target_area > 0 else 0.0
    ovl_ratio = min(overlap / target_area, 1.0) if target_area > 0 else 0.0
    return CoverageReport(target_area, covered, overlap, missed, outside,
                          cov_ratio, ovl_ratio, layout.target_area,
                          layout.corner_sliver_area, grid.cell)
