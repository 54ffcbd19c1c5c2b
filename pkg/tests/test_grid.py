from collections import deque

import numpy as np
import pytest
from scipy.spatial.distance import directed_hausdorff as scipy_directed

from holext.errors import (DegenerateRegion, EmptySet, NoSuchHole,
                           ResolutionTooCoarse)
from holext.grid import (GridCompactum, boundary_cells, boundary_cycles,
                         complement_components, directed_hausdorff, hausdorff,
                         hole_cycle, interior_empty, outer_boundary,
                         polynomial_hull, rasterize, rasterize_points,
                         regular_hole, trace_boundary)
from holext.shapes import Annulus, Circle, Disk, Segment

from reference_sets import named_sets


def flood_holes(mask):
    """Independent count of bounded 4-connected components of the complement."""
    H, W = mask.shape
    seen = mask.copy()
    comps = 0
    for i0 in range(H):
        for j0 in range(W):
            if seen[i0, j0]:
                continue
            comps += 1
            seen[i0, j0] = True
            queue = deque([(i0, j0)])
            while queue:
                i, j = queue.popleft()
                for a, b in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                    if 0 <= a < H and 0 <= b < W and not seen[a, b]:
                        seen[a, b] = True
                        queue.append((a, b))
    return comps - 1


# frozen from the h/2 marking rule: the cell count tracks pi (r + h/2)^2 / h^2
@pytest.mark.parametrize("h, count", [(0.05, 1313), (0.02, 8021), (0.01, 31757)])
def test_disk_cell_count(h, count):
    K = rasterize(Disk(-1, 1.0), h)
    assert K.cell_count == count
    assert abs(count / (np.pi * (1 + h / 2) ** 2 / h ** 2) - 1) < 0.01


def test_circle_band_has_one_hole():
    h = 0.02
    K = rasterize(Circle(0, 1.0, 2.5 * h), h)
    lab = complement_components(K)
    assert lab.n_holes == 1
    assert abs(lab.holes[0].representative) < h


def test_annulus_representative_is_centered():
    K = rasterize(Annulus(0, 1.0, 2.0), 0.02)
    lab = complement_components(K)
    assert lab.n_holes == 1
    assert abs(lab.holes[0].representative) <= 0.02
    assert lab.holes[0].clearance == pytest.approx(1.0, abs=0.03)


def test_too_coarse():
    with pytest.raises(ResolutionTooCoarse):
        rasterize(Disk(0, 0.01), 0.05)


@pytest.mark.parametrize("h", [0.05, 0.02])
def test_hole_counts_match_flood_fill(h):
    for name, (shape, holes, _) in named_sets(h).items():
        K = rasterize(shape, h)
        assert complement_components(K).n_holes == flood_holes(K.mask) == holes, name


def test_labels_partition_the_grid():
    K = rasterize(named_sets(0.02)["annulus and inner circle"][0], 0.02)
    lab = complement_components(K)
    assert np.array_equal(lab.labels == -1, K.mask)
    assert sum(h.cells for h in lab.holes) + (lab.labels == 0).sum() + K.cell_count == K.mask.size
    for hole in lab.holes:
        assert lab.labels[hole.rep_cell] == hole.index


def test_hull():
    h = 0.02
    K = rasterize(Annulus(0, 1.0, 2.0), h)
    hull = polynomial_hull(K)
    disk = rasterize(Disk(0, 2.0), h)
    assert complement_components(hull).n_holes == 0
    assert np.array_equal(polynomial_hull(hull).mask, hull.mask)
    assert abs(hull.cell_count - disk.cell_count) <= 0.002 * disk.cell_count


def test_outer_boundary_near_circle():
    h = 0.02
    K = rasterize(Disk(0, 1.0), h)
    (cyc,) = outer_boundary(K)
    assert cyc.orientation == 1
    circle = np.exp(2j * np.pi * np.arange(2000) / 2000)
    assert hausdorff(cyc.vertices, circle) <= 2 * h
    assert cyc.length == pytest.approx(2 * np.pi, rel=0.3)  # staircase length is 8/pi longer at most


def test_annulus_cycles_have_opposite_orientation():
    K = rasterize(Annulus(0, 1.0, 2.0), 0.02)
    cycles = boundary_cycles(K)
    assert sorted(c.orientation for c in cycles) == [-1, 1]
    assert [c.owner for c in cycles] == [0, 1]
    inner = hole_cycle(K, 1)
    assert inner.orientation == 1
    assert np.abs(np.abs(inner.vertices) - 1).max() <= 0.03


def test_degenerate_region():
    mask = np.zeros((6, 6), dtype=bool)
    mask[2, 2:4] = True
    K = GridCompactum(0j, 0.1, mask)
    with pytest.raises(DegenerateRegion):
        trace_boundary(K)


def test_regular_holes_and_missing_hole():
    h = 0.02
    for name, (shape, _, regular) in named_sets(h).items():
        K = rasterize(shape, h)
        lab = complement_components(K)
        assert [regular_hole(K, j, lab) for j in range(1, lab.n_holes + 1)] == regular, name
    K = rasterize(Annulus(0, 1.0, 2.0), h)
    with pytest.raises(NoSuchHole):
        regular_hole(K, 5)


def test_interior_predicate():
    h = 0.02
    assert not interior_empty(rasterize(Disk(0, 1.0), h))
    seg = np.zeros((7, 12), dtype=bool)
    seg[3, 2:10] = True
    assert interior_empty(GridCompactum(0j, h, seg))


def test_boundary_cells():
    mask = np.zeros((7, 7), dtype=bool)
    mask[1:6, 1:6] = True
    b = boundary_cells(mask)
    assert b.sum() == 16 and not b[3, 3]


def test_hausdorff_against_scipy():
    rng = np.random.default_rng(7)
    A = rng.normal(size=40) + 1j * rng.normal(size=40)
    B = rng.normal(size=55) + 1j * rng.normal(size=55)
    xy = lambda z: np.column_stack([z.real, z.imag])
    assert directed_hausdorff(A, B) == pytest.approx(scipy_directed(xy(A), xy(B))[0])
    assert hausdorff(A, B) == pytest.approx(max(scipy_directed(xy(A), xy(B))[0],
                                                scipy_directed(xy(B), xy(A))[0]))


def test_hausdorff_examples():
    assert hausdorff([0], [3]) == 3
    t = np.exp(2j * np.pi * np.arange(720) / 720)
    h = 0.02
    a = outer_boundary(rasterize(Disk(0, 1.0), h))[0].vertices
    b = outer_boundary(rasterize(Disk(0, 1.5), h))[0].vertices
    assert hausdorff(a, b) == pytest.approx(0.5, abs=2 * h)
    assert hausdorff(t, 1.5 * t) == pytest.approx(0.5)
    with pytest.raises(EmptySet):
        hausdorff([], [1])


def test_text_round_trip():
    K = rasterize(Annulus(0.3j, 0.5, 1.0), 0.05)
    again = GridCompactum.from_text(K.to_text())
    assert again.h == K.h and again.origin == K.origin
    assert np.array_equal(again.mask, K.mask)


def test_points_raster_covers_curve():
    t = np.exp(2j * np.pi * np.arange(4000) / 4000)
    K = rasterize_points(t, 0.02, reach=0.03)
    assert complement_components(K).n_holes == 1
    assert K.inside(t).all()


def test_segment_has_no_holes():
    h = 0.02
    K = rasterize(Segment(0, 1 + 1j, 2.5 * h), h)
    assert complement_components(K).n_holes == 0
    assert K.exact_thin


@pytest.mark.parametrize("name", list(named_sets(0.02)))
def test_hull_invariants(name):
    h = 0.02
    K = rasterize(named_sets(h)[name][0], h)
    hull = polynomial_hull(K)
    assert (hull.mask >= K.mask).all()
    assert complement_components(hull).n_holes == 0
    # the outer boundary runs along the boundary of K
    edge = K.cell_centers(boundary_cells(K.mask))
    for cyc in outer_boundary(K):
        assert directed_hausdorff(cyc.vertices, edge) <= 2 * h


@pytest.mark.parametrize("name", list(named_sets(0.02)))
def test_boundary_holes_of_a_hull_are_simply_connected(name):
    h = 0.02
    hull = polynomial_hull(rasterize(named_sets(h)[name][0], h))
    edge = hull.with_mask(boundary_cells(hull.mask))
    lab = complement_components(edge)
    for j in range(1, lab.n_holes + 1):
        if lab.hole_mask(j).sum() >= 4:
            assert len(trace_boundary(edge, lab.hole_mask(j), connectivity=4)) == 1
