"""Basin decomposition rasters, limiting equilibria, and continuity probes."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import SingularityError
from .geometry import Point2, Rect
from .planarmap import PlanarMap
from .curves import SideOptions, classify_side

ESCAPE_BOUND = 1e6
LIMIT_RESIDUAL_TOL = 1e-6

LABEL_NAMES = ("minus", "plus", "band", "undecided", "singular")
LABEL_CODES = {name: i for i, name in enumerate(LABEL_NAMES)}
# PGM gray levels per label
PGM_GRAY = {"minus": 0, "band": 128, "plus": 255, "undecided": 64, "singular": 32}
_GRAY_TO_LABEL = {v: k for k, v in PGM_GRAY.items()}


# ---------------------------------------------------------------------------
# Limiting equilibrium T*


@dataclass(frozen=True)
class LimitRecord:
    start: Point2
    limit: Optional[Point2]
    iterations: int
    diverged: bool = False
    flag: str = ""

    @property
    def converged(self) -> bool:
        return self.limit is not None


def limit_equilibrium(m: PlanarMap, p: Point2, tol: float = 1e-10,
                      max_iter: int = 100_000,
                      escape_bound: float = ESCAPE_BOUND) -> LimitRecord:
    """Iterate to the limiting equilibrium T*(p).

    Converges when the sup-norm step drops below tol and the fixed-point
    residual of the candidate limit is below 1e-6; a coordinate exceeding
    escape_bound (or a singularity) yields a divergence marker instead.
    """
    start = Point2(*p)
    x, y = float(p[0]), float(p[1])
    step = m.step
    try:
        x1, y1 = step(x, y)
    except SingularityError:
        return LimitRecord(start, None, 0, diverged=True, flag="singularity")
    if max(abs(x1 - x), abs(y1 - y)) < tol:
        return LimitRecord(start, Point2(x, y), 0)
    n = 0
    while n < max_iter:
        try:
            xn, yn = step(x, y)
        except SingularityError:
            return LimitRecord(start, None, n, diverged=True, flag="singularity")
        n += 1
        if not (math.isfinite(xn) and math.isfinite(yn)) \
                or abs(xn) > escape_bound or abs(yn) > escape_bound:
            return LimitRecord(start, None, n, diverged=True, flag="escape")
        if max(abs(xn - x), abs(yn - y)) < tol:
            try:
                xr, yr = step(xn, yn)
            except SingularityError:
                return LimitRecord(start, None, n, diverged=True, flag="singularity")
            if max(abs(xr - xn), abs(yr - yn)) < LIMIT_RESIDUAL_TOL:
                return LimitRecord(start, Point2(xn, yn), n)
        x, y = xn, yn
    return LimitRecord(start, None, max_iter, diverged=False, flag="max_iter")


# ---------------------------------------------------------------------------
# Rasters


@dataclass(frozen=True)
class BasinRaster:
    """Labeled grid over a bounded window; labels[j][i] is the cell at (i, j).

    Cell (i, j) has center (x_lo + (i+0.5)dx, y_lo + (j+0.5)dy); j grows with
    y. The meta mapping echoes the full configuration and round-trips through
    the PGM/CSV serializations.
    """

    window: Rect
    nx: int
    ny: int
    labels: np.ndarray  # shape (ny, nx), uint8 codes into LABEL_NAMES
    meta: Mapping[str, str] = field(default_factory=dict)

    def cell_center(self, i: int, j: int) -> Point2:
        return Point2(self.window.x_lo + (i + 0.5) * self.window.width() / self.nx,
                      self.window.y_lo + (j + 0.5) * self.window.height() / self.ny)

    def label_at(self, i: int, j: int) -> str:
        return LABEL_NAMES[self.labels[j, i]]

    def cell_of(self, p: Point2) -> Optional[tuple]:
        if not self.window.contains(Point2(*p)):
            return None
        i = min(self.nx - 1, int((p[0] - self.window.x_lo) / self.window.width() * self.nx))
        j = min(self.ny - 1, int((p[1] - self.window.y_lo) / self.window.height() * self.ny))
        return i, j

    def census(self) -> dict:
        counts = np.bincount(self.labels.ravel(), minlength=len(LABEL_NAMES))
        return {name: int(counts[LABEL_CODES[name]]) for name in LABEL_NAMES}


def _raster_row(m: PlanarMap, fp: Point2, window: Rect, nx: int, ny: int,
                j: int, opts: SideOptions) -> list:
    dx = window.width() / nx
    y = window.y_lo + (j + 0.5) * window.height() / ny
    row = []
    for i in range(nx):
        x = window.x_lo + (i + 0.5) * dx
        v = classify_side(m, Point2(x, y), fp, opts)
        if v.flag == "singularity":
            row.append(LABEL_CODES["singular"])
        else:
            row.append(LABEL_CODES[v.label])
    return row


def _raster_row_task(payload):
    return _raster_row(*payload)


def raster(m: PlanarMap, fp: Point2, window: Rect, nx: int, ny: int,
           opts: SideOptions = None, workers: int = 1) -> BasinRaster:
    """Classify every cell center against the separatrix through fp.

    Cells are independent; the label grid depends only on the cell-center
    coordinates, so output is identical at any worker count.
    """
    if not window.is_bounded():
        raise ValueError("raster needs a bounded window")
    if nx < 2 or ny < 2:
        raise ValueError("raster needs nx, ny >= 2")
    if opts is None:
        opts = SideOptions(epsilon_margin=1e-4 * window.diagonal(), max_iter=5000)
        if m.meta.get("continuum"):
            opts = SideOptions(mode="limit_equilibrium",
                               epsilon_margin=opts.epsilon_margin, max_iter=5000)
    tasks = [(m, Point2(*fp), window, nx, ny, j, opts) for j in range(ny)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_raster_row_task, tasks,
                                 chunksize=max(1, ny // (4 * workers))))
    else:
        rows = [_raster_row_task(t) for t in tasks]
    labels = np.array(rows, dtype=np.uint8)
    meta = {
        "map": m.name,
        "fp": f"{fp[0]!r},{fp[1]!r}",
        "window": f"{window.x_lo!r},{window.x_hi!r},{window.y_lo!r},{window.y_hi!r}",
        "nx": str(nx), "ny": str(ny),
        "mode": opts.mode,
        "epsilon_margin": repr(opts.epsilon_margin),
        "max_iter": str(opts.max_iter),
        "conv_tol": repr(opts.conv_tol),
    }
    for k, val in sorted(m.params.items()):
        meta[f"param.{k}"] = repr(float(val))
    return BasinRaster(window=window, nx=nx, ny=ny, labels=labels, meta=meta)


# ---------------------------------------------------------------------------
# Serialization (PGM P2 and long-form CSV). Both are bit-exact functions of
# the raster contents and meta.


def raster_to_pgm(r: BasinRaster) -> str:
    lines = ["P2"]
    for k, v in r.meta.items():
        lines.append(f"# {k}={v}")
    lines.append(f"{r.nx} {r.ny}")
    lines.append("255")
    for j in range(r.ny - 1, -1, -1):  # top row first, image convention
        lines.append(" ".join(str(PGM_GRAY[LABEL_NAMES[c]]) for c in r.labels[j]))
    return "\n".join(lines) + "\n"


def raster_to_csv(r: BasinRaster) -> str:
    lines = []
    for k, v in r.meta.items():
        lines.append(f"# {k}={v}")
    lines.append("i,j,x,y,label")
    for j in range(r.ny):
        for i in range(r.nx):
            c = r.cell_center(i, j)
            lines.append(f"{i},{j},{c.x:.17g},{c.y:.17g},{LABEL_NAMES[r.labels[j, i]]}")
    return "\n".join(lines) + "\n"


def save_raster(r: BasinRaster, path: str, fmt: str = "pgm") -> None:
    text = raster_to_pgm(r) if fmt == "pgm" else raster_to_csv(r)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def load_pgm(path: str):
    """Read back a raster PGM; returns (labels array, meta dict)."""
    meta = {}
    with open(path) as fh:
        tokens = []
        magic = fh.readline().strip()
        if magic != "P2":
            raise ValueError(f"not a P2 PGM: {magic!r}")
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v
                continue
            tokens.extend(line.split())
    nx, ny, maxval = int(tokens[0]), int(tokens[1]), int(tokens[2])
    vals = np.array(tokens[3:3 + nx * ny], dtype=int).reshape(ny, nx)
    labels = np.empty((ny, nx), dtype=np.uint8)
    for j in range(ny):
        for i in range(nx):
            labels[ny - 1 - j, i] = LABEL_CODES[_GRAY_TO_LABEL[int(vals[j, i])]]
    return labels, meta


def load_csv_raster(path: str):
    meta = {}
    cells = {}
    nx = ny = 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v
                continue
            if line.startswith("i,"):
                continue
            i_s, j_s, _x, _y, label = line.split(",")
            i, j = int(i_s), int(j_s)
            nx = max(nx, i + 1)
            ny = max(ny, j + 1)
            cells[(i, j)] = LABEL_CODES[label]
    labels = np.zeros((ny, nx), dtype=np.uint8)
    for (i, j), c in cells.items():
        labels[j, i] = c
    return labels, meta


# ---------------------------------------------------------------------------
# Continuity probe for the limiting-equilibrium map


@dataclass(frozen=True)
class ContinuityReport:
    max_gap: float
    argmax: int  # index of the left point of the widest adjacent pair
    n: int
    divergent: int
    limits: tuple  # Point2 or None per sample


def continuity_probe(m: PlanarMap, segment: tuple, n: int,
                     tol: float = 1e-10, max_iter: int = 100_000) -> ContinuityReport:
    """Sample T* along a segment and report the largest adjacent limit gap.

    Shrinking max_gap under refinement of n is numeric evidence that the
    limiting equilibrium varies continuously with the initial condition.
    """
    if n < 2:
        raise ValueError("need at least two probe points")
    a, b = Point2(*segment[0]), Point2(*segment[1])
    limits = []
    divergent = 0
    for k in range(n):
        t = k / (n - 1)
        p = Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        rec = limit_equilibrium(m, p, tol=tol, max_iter=max_iter)
        if rec.limit is None:
            divergent += 1
            limits.append(None)
        else:
            limits.append(rec.limit)
    max_gap = 0.0
    argmax = 0
    prev = None
    prev_idx = -1
    for idx, q in enumerate(limits):
        if q is None:
            continue
        if prev is not None and idx == prev_idx + 1:
            gap = prev.dist2(q)
            if gap > max_gap:
                max_gap = gap
                argmax = prev_idx
        prev, prev_idx = q, idx
    return ContinuityReport(max_gap=max_gap, argmax=argmax, n=n,
                            divergent=divergent, limits=tuple(limits))
