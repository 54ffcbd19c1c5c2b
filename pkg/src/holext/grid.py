"""Rasterized compacta and their complement topology.

Conventions, fixed throughout the package:

* cell ``(i, j)`` (row ``i``, column ``j``) has center ``origin + j*h + 1j*i*h``;
  rows grow with the imaginary part;
* cells of K are 8-connected, complement cells are 4-connected, so an
  8-connected ring of K cells separates the plane;
* every compactum keeps a margin of non-K cells on all four sides, so the
  complement component touching the array border is the unbounded one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .errors import (DegenerateRegion, EmptySet, EmptySpec, NoSuchHole,
                     ParseError, ResolutionTooCoarse)
from .shapes import Shape

FOUR = ndimage.generate_binary_structure(2, 1)
EIGHT = ndimage.generate_binary_structure(2, 2)

UNBOUNDED = 0
K_CELL = -1

MARGIN = 2


@dataclass(eq=False)
class GridCompactum:
    """Bitmap model of a compact set with cell size ``h``."""

    origin: complex
    h: float
    mask: np.ndarray
    exact_thin: bool = False
    shape: Shape | None = field(default=None, repr=False)

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        if not self.h > 0:
            raise ValueError("cell size must be > 0")
        if not self.mask.any():
            raise EmptySpec("compactum has no cells")
        m = self.mask
        if m[0].any() or m[-1].any() or m[:, 0].any() or m[:, -1].any():
            raise ValueError("compactum must keep a margin of empty cells")

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    def centers(self) -> np.ndarray:
        i, j = np.indices(self.mask.shape)
        return self.origin + self.h * (j + 1j * i)

    def cell_centers(self, region: np.ndarray | None = None) -> np.ndarray:
        """Centers of the cells in ``region`` (default: K), in row-major order."""
        region = self.mask if region is None else region
        i, j = np.nonzero(region)
        return self.origin + self.h * (j + 1j * i)

    def cell_of(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Row and column of the cell containing each point (may be out of range)."""
        w = (np.asarray(z, dtype=complex) - self.origin) / self.h
        return np.floor(w.imag + 0.5).astype(int), np.floor(w.real + 0.5).astype(int)

    def inside(self, z, region: np.ndarray | None = None) -> np.ndarray:
        region = self.mask if region is None else region
        i, j = self.cell_of(z)
        ok = (i >= 0) & (i < self.height) & (j >= 0) & (j < self.width)
        out = np.zeros(np.shape(i), dtype=bool)
        out[ok] = region[i[ok], j[ok]]
        return out

    def with_mask(self, mask: np.ndarray, exact_thin: bool = False) -> "GridCompactum":
        return GridCompactum(self.origin, self.h, mask, exact_thin=exact_thin)

    def samples(self, spacing: float | None = None) -> np.ndarray:
        """Points of K: exact-set samples when the source shape is known,
        otherwise the cell centers."""
        if self.shape is not None:
            return self.shape.samples(self.h if spacing is None else spacing)
        return self.cell_centers()

    @property
    def cell_count(self) -> int:
        return int(self.mask.sum())

    # -- portable text bitmap -------------------------------------------------

    def to_text(self) -> str:
        """Header lines plus one run-length row per line.

        Each row lists alternating run lengths, starting with a (possibly
        zero-length) run of empty cells.
        """
        lines = ["holext-grid 1",
                 f"origin {self.origin.real!r} {self.origin.imag!r}",
                 f"h {self.h!r}",
                 f"dims {self.width} {self.height}",
                 f"thin {int(self.exact_thin)}"]
        for row in self.mask:
            change = np.flatnonzero(np.diff(np.concatenate([[0], row.astype(np.int8), [0]])))
            bounds = np.concatenate([[0], change, [self.width]])
            runs = np.diff(bounds)
            if runs.size and runs[-1] == 0:
                runs = runs[:-1]
            lines.append(" ".join(str(int(r)) for r in runs))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GridCompactum":
        lines = text.splitlines()
        try:
            if lines[0].strip() != "holext-grid 1":
                raise ParseError("not a holext grid", line=1)
            _, ore, oim = lines[1].split()
            _, h = lines[2].split()
            _, w, ht = lines[3].split()
            _, thin = lines[4].split()
            w, ht = int(w), int(ht)
            mask = np.zeros((ht, w), dtype=bool)
            for i in range(ht):
                runs = [int(r) for r in lines[5 + i].split()]
                pos, val = 0, False
                for r in runs:
                    mask[i, pos:pos + r] = val
                    pos += r
                    val = not val
                if pos != w:
                    raise ParseError("row length mismatch", line=6 + i)
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed grid text: {exc}") from None
        return cls(complex(float(ore), float(oim)), float(h), mask, exact_thin=bool(int(thin)))


def rasterize(spec: Shape, h: float) -> GridCompactum:
    """Mark every cell whose center lies within ``h/2`` of the set."""
    if spec is None:
        raise EmptySpec("no shape given")
    if not h > 0:
        raise ValueError("h must be > 0")
    thin = [f for f in spec.features() if f < 2 * h]
    if thin:
        raise ResolutionTooCoarse(
            f"feature of size {min(thin):g} is thinner than 2h = {2 * h:g}")
    xmin, xmax, ymin, ymax = spec.bbox()
    pad = h / 2
    j0 = math.floor((xmin - pad) / h) - MARGIN
    j1 = math.ceil((xmax + pad) / h) + MARGIN
    i0 = math.floor((ymin - pad) / h) - MARGIN
    i1 = math.ceil((ymax + pad) / h) + MARGIN
    origin = complex(j0 * h, i0 * h)
    i, j = np.indices((i1 - i0 + 1, j1 - j0 + 1))
    z = origin + h * (j + 1j * i)
    mask = spec.distance(z) <= h / 2 * (1 + 1e-9)
    if not mask.any():
        raise EmptySpec("shape rasterizes to no cells")
    return GridCompactum(origin, h, mask, exact_thin=spec.exact_thin, shape=spec)


def rasterize_points(points, h: float, reach: float | None = None) -> GridCompactum:
    """Rasterize a point cloud: mark cells whose center is within ``reach``
    (default ``h``) of some point."""
    pts = np.asarray(points, dtype=complex).ravel()
    pts = pts[np.isfinite(pts)]
    if pts.size == 0:
        raise EmptySet("no points to rasterize")
    reach = h if reach is None else reach
    pad = reach + h
    j0 = math.floor((pts.real.min() - pad) / h) - MARGIN
    j1 = math.ceil((pts.real.max() + pad) / h) + MARGIN
    i0 = math.floor((pts.imag.min() - pad) / h) - MARGIN
    i1 = math.ceil((pts.imag.max() + pad) / h) + MARGIN
    origin = complex(j0 * h, i0 * h)
    i, j = np.indices((i1 - i0 + 1, j1 - j0 + 1))
    z = (origin + h * (j + 1j * i)).ravel()
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    d, _ = tree.query(np.column_stack([z.real, z.imag]), distance_upper_bound=reach * (1 + 1e-9))
    mask = np.isfinite(d).reshape(i.shape)
    return GridCompactum(origin, h, mask)


# -- complement topology ----------------------------------------------------

@dataclass(frozen=True)
class Hole:
    index: int
    cells: int
    representative: complex
    rep_cell: tuple[int, int]
    clearance: float  # distance from the representative to the nearest K cell center


@dataclass(eq=False)
class RegionLabeling:
    """``labels`` is -1 on K, 0 on the unbounded component, j on hole j."""

    labels: np.ndarray
    holes: list[Hole]

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    def hole_mask(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.n_holes:
            raise NoSuchHole(f"no hole {j}; compactum has {self.n_holes}")
        return self.labels == j


def complement_components(K: GridCompactum) -> RegionLabeling:
    comp, n = ndimage.label(~K.mask, structure=FOUR)
    outer = comp[0, 0]
    labels = np.full(K.mask.shape, K_CELL, dtype=np.int32)
    labels[comp == outer] = UNBOUNDED
    dist = ndimage.distance_transform_edt(~K.mask)
    holes = []
    hole_ids = [c for c in range(1, n + 1) if c != outer]
    flat_comp = comp.ravel()
    flat_dist = dist.ravel()
    order = np.argsort(flat_comp, kind="stable")
    bounds = np.searchsorted(flat_comp[order], np.arange(n + 2))
    for new, c in enumerate(hole_ids, start=1):
        idx = order[bounds[c]:bounds[c + 1]]  # ascending flat index
        labels.ravel()[idx] = new
        k = idx[np.argmax(flat_dist[idx])]  # first maximum = smallest (row, col)
        i, j = divmod(int(k), K.width)
        holes.append(Hole(new, int(idx.size), K.origin + K.h * complex(j, i), (i, j),
                          float(flat_dist[k] * K.h)))
    return RegionLabeling(labels, holes)


def polynomial_hull(K: GridCompactum, labeling: RegionLabeling | None = None) -> GridCompactum:
    """K together with all of its holes."""
    labeling = complement_components(K) if labeling is None else labeling
    if labeling.n_holes == 0:
        return GridCompactum(K.origin, K.h, K.mask.copy(), K.exact_thin, K.shape)
    return K.with_mask(labeling.labels != UNBOUNDED)


def interior_empty(K: GridCompactum) -> bool:
    """Grid predicate: no K cell has all 8 neighbours in K."""
    return not ndimage.binary_erosion(K.mask, structure=EIGHT).any()


def boundary_cells(mask: np.ndarray) -> np.ndarray:
    """Cells of ``mask`` with a 4-neighbour outside ``mask``."""
    return mask & ~ndimage.binary_erosion(mask, structure=FOUR, border_value=0)


# -- boundary tracing -------------------------------------------------------

@dataclass(eq=False)
class BoundaryCycle:
    """Closed polyline through the midpoints of a region's boundary edges.

    The region is always on the left. ``orientation`` is the sign of the
    enclosed signed area: +1 for an outer boundary, -1 around a hole of the
    region. ``inside``/``outside`` hold, per vertex, the flat index of the
    region cell and of the non-region cell sharing that edge.
    """

    vertices: np.ndarray
    orientation: int
    h: float
    inside: np.ndarray
    outside: np.ndarray
    owner: int | None = None
    closed: bool = True

    def __len__(self):
        return len(self.vertices)

    @property
    def length(self) -> float:
        v = self.vertices
        return float(np.abs(np.diff(np.concatenate([v, v[:1]]))).sum())

    @property
    def signed_area(self) -> float:
        return signed_area(self.vertices)

    def resample(self, n: int) -> np.ndarray:
        """``n`` points equally spaced by arc length, starting at vertex 0."""
        v = np.concatenate([self.vertices, self.vertices[:1]])
        seg = np.abs(np.diff(v))
        s = np.concatenate([[0.0], np.cumsum(seg)])
        t = np.arange(n) * (s[-1] / n)
        k = np.clip(np.searchsorted(s, t, side="right") - 1, 0, len(seg) - 1)
        frac = (t - s[k]) / np.where(seg[k] > 0, seg[k], 1.0)
        return v[k] + frac * (v[k + 1] - v[k])

    def reversed(self) -> "BoundaryCycle":
        return BoundaryCycle(self.vertices[::-1].copy(), -self.orientation, self.h,
                             self.inside[::-1].copy(), self.outside[::-1].copy(),
                             self.owner)


def signed_area(v: np.ndarray) -> float:
    w = np.roll(v, -1)
    return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))


# direction codes: 0 east, 1 north, 2 west, 3 south
_DIRS = {
    # (neighbour offset di, dj), start corner offset (dx, dy), end corner, direction
    "south": ((-1, 0), (0, 0), (1, 0), 0),
    "east": ((0, 1), (1, 0), (1, 1), 1),
    "north": ((1, 0), (1, 1), (0, 1), 2),
    "west": ((0, -1), (0, 1), (0, 0), 3),
}


def trace_boundary(K: GridCompactum, region: np.ndarray | None = None,
                   connectivity: int = 8) -> list[BoundaryCycle]:
    """Follow the cell-edge frontier of ``region`` (default: K).

    ``connectivity`` says how the region's own cells connect, which decides
    the turn taken at a saddle corner (two region cells meeting diagonally):
    8 keeps the diagonal pair in one cycle, 4 separates them.
    """
    region = K.mask if region is None else np.asarray(region, dtype=bool)
    if region.sum() < 4:
        raise DegenerateRegion(f"region has {int(region.sum())} cells, need at least 4")
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    H, W = region.shape
    padded = np.pad(region, 1)
    starts, ends, dirs, ins, outs = [], [], [], [], []
    ii, jj = np.nonzero(region)
    for (di, dj), (sx, sy), (ex, ey), d in _DIRS.values():
        nb = padded[ii + di + 1, jj + dj + 1]
        sel = ~nb
        i, j = ii[sel], jj[sel]
        starts.append((i + sy) * (W + 1) + (j + sx))
        ends.append((i + ey) * (W + 1) + (j + ex))
        dirs.append(np.full(i.size, d))
        ins.append(i * W + j)
        oi, oj = i + di, j + dj
        outs.append(np.where((oi >= 0) & (oi < H) & (oj >= 0) & (oj < W), oi * W + oj, -1))
    start = np.concatenate(starts)
    end = np.concatenate(ends)
    d = np.concatenate(dirs)
    inside = np.concatenate(ins)
    outside = np.concatenate(outs)

    order = np.lexsort((d, start))
    start, end, d, inside, outside = (a[order] for a in (start, end, d, inside, outside))
    n = start.size

    # at most two outgoing edges per corner
    first = np.searchsorted(start, end, side="left")
    count = np.searchsorted(start, end, side="right") - first
    nxt = first.copy()
    two = count == 2
    if two.any():
        want = (d[two] + (3 if connectivity == 8 else 1)) % 4
        alt = first[two] + 1
        nxt[two] = np.where(d[first[two]] == want, first[two], alt)
    if (count < 1).any() or (count > 2).any():
        raise AssertionError("inconsistent boundary edge structure")

    visited = np.zeros(n, dtype=bool)
    cycles = []
    for e0 in range(n):
        if visited[e0]:
            continue
        idx = []
        e = e0
        while not visited[e]:
            visited[e] = True
            idx.append(e)
            e = nxt[e]
        if e != e0:
            raise AssertionError("boundary walk did not close")
        idx = np.array(idx)
        sx, sy = start[idx] % (W + 1), start[idx] // (W + 1)
        ex, ey = end[idx] % (W + 1), end[idx] // (W + 1)
        mid = ((sx + ex) / 2 - 0.5) + 1j * ((sy + ey) / 2 - 0.5)
        verts = K.origin + K.h * mid
        area = signed_area(verts)
        cycles.append(BoundaryCycle(verts, 1 if area > 0 else -1, K.h,
                                    inside[idx], outside[idx]))
    return cycles


def outer_boundary(K: GridCompactum) -> list[BoundaryCycle]:
    """Traced boundary of the polynomial hull: one cycle per hull component."""
    hull = polynomial_hull(K)
    cycles = trace_boundary(hull, connectivity=8)
    for c in cycles:
        c.owner = UNBOUNDED
    return cycles


def boundary_cycles(K: GridCompactum, labeling: RegionLabeling | None = None) -> list[BoundaryCycle]:
    """All boundary cycles of K in canonical order: cycles facing the
    unbounded component first, then those facing hole 1, hole 2, ..."""
    labeling = complement_components(K) if labeling is None else labeling
    cycles = trace_boundary(K, connectivity=8)
    flat = labeling.labels.ravel()
    for c in cycles:
        c.owner = int(flat[c.outside[0]])
    return sorted(cycles, key=lambda c: c.owner)  # stable: keeps discovery order


def hole_cycle(K: GridCompactum, hole_id: int,
               labeling: RegionLabeling | None = None) -> BoundaryCycle:
    """The positively oriented cycle surrounding hole ``hole_id``.

    It runs along the frontier between the hole and K, so it stays on K.
    """
    labeling = complement_components(K) if labeling is None else labeling
    region = labeling.hole_mask(hole_id)
    if region.sum() < 4:
        # tiny holes: grow the region by one K layer so the cycle still surrounds it
        region = ndimage.binary_dilation(region, structure=EIGHT)
    cycles = [c for c in trace_boundary(K, region, connectivity=4) if c.orientation > 0]
    cycles.sort(key=lambda c: -c.signed_area)
    cyc = cycles[0]
    cyc.owner = hole_id
    return cyc


def regular_hole(K: GridCompactum, hole_id: int,
                 labeling: RegionLabeling | None = None) -> bool:
    """True iff hole ``hole_id`` is the only hole of its own boundary."""
    labeling = complement_components(K) if labeling is None else labeling
    G = labeling.hole_mask(hole_id)
    edge = ndimage.binary_dilation(G, structure=EIGHT) & K.mask
    return complement_components(K.with_mask(edge)).n_holes == 1


# -- metric -----------------------------------------------------------------

def _xy(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    return np.column_stack([z.real, z.imag])


def directed_hausdorff(A, B) -> float:
    """sup over a in A of dist(a, B)."""
    A, B = _xy(A), _xy(B)
    if len(A) == 0 or len(B) == 0:
        raise EmptySet("Hausdorff distance needs two nonempty sets")
    d, _ = cKDTree(B).query(A)
    return float(d.max())


def hausdorff(A, B) -> float:
    """Symmetric Hausdorff distance between finite point sets."""
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))
