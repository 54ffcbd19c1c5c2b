"""Polynomial surrogates for the continuous extension of ``f`` to the hull.

The extension ``f*`` of ``f`` in P(K) to the polynomial hull is not directly
computable. Here it is replaced by the best least-squares polynomial fitted on
the outer boundary; by the maximum principle a polynomial that is uniformly
close to ``f`` there is uniformly close to ``f*`` on the whole hull. Every
verdict built on the surrogate carries the fit residual.

Injectivity of the surrogate is certified with explicit witnesses: candidate
pairs found by a nearest-neighbour search on the images are refined by Newton's
method to exact collisions ``p(z) = p(w)`` inside the region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .errors import (AmbiguousMapping, BadRadii, BadTolerances, FitFailed,
                     HypothesisFailed, IllConditioned, InputError,
                     NotInjectiveCase, NotRegular)
from .grid import (EIGHT, GridCompactum, RegionLabeling, complement_components,
                   hausdorff, hole_cycle,
                   outer_boundary, polynomial_hull, rasterize_points,
                   regular_hole)
from .winding import evaluate

DEGREE_MAX = 80
SCHEDULE = (1, 2, 3, 4, 6, 8, 10, 12, 16, 20, 25, 30, 40, 50, 60, 70, 80)
COND_MAX = 1e14
BOUNDARY_SAMPLES = 4096
HULL_SAMPLES = 20000
CRITERION_FACTOR = 5.0  # criterion tolerance in units of the image cell size
AMBIGUITY_FACTOR = 3.0
MAX_REFINE = 64


def degree_schedule(degree_max: int = DEGREE_MAX) -> tuple[int, ...]:
    if degree_max < 0:
        raise InputError("degree_max must be >= 0")
    return tuple(sorted({d for d in SCHEDULE if d <= degree_max} | {degree_max}))


# -- fitting ------------------------------------------------------------------

@dataclass(frozen=True)
class FitStep:
    degree: int
    residual: float  # sup error over all boundary samples
    held_out: float  # sup error over the held-out half
    rms: float  # least-squares RMS on the fitting half
    conditioning: float


@dataclass(eq=False)
class PolyFit:
    """``p(z) = sum c_k u**k`` with ``u = (z - center) / scale``."""

    coefficients: np.ndarray
    center: complex
    scale: float
    residual: float
    conditioning: float
    curve: list[FitStep] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z) -> np.ndarray:
        u = (np.asarray(z, dtype=complex) - self.center) / self.scale
        out = np.zeros_like(u)
        for c in self.coefficients[::-1]:
            out = out * u + c
        return out

    def derivative(self, z) -> np.ndarray:
        u = (np.asarray(z, dtype=complex) - self.center) / self.scale
        k = np.arange(1, len(self.coefficients))
        out = np.zeros_like(u)
        for c in (self.coefficients[1:] * k)[::-1]:
            out = out * u + c
        return out / self.scale

    def monomial_coefficients(self) -> np.ndarray:
        """Coefficients of ``p`` in powers of ``z`` (well defined for low degree only)."""
        out = np.zeros(len(self.coefficients), dtype=complex)
        a, b = 1 / self.scale, -self.center / self.scale  # u = a z + b
        power = np.array([1.0 + 0j])
        for c in self.coefficients:
            out[:len(power)] += c * power
            power = np.convolve(power, [b, a])
        return out

    @property
    def best_curve(self) -> list[float]:
        """Best residual seen up to each degree of the sweep."""
        return list(np.minimum.accumulate([s.residual for s in self.curve]))

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "residual": self.residual,
            "conditioning": self.conditioning,
            "center": [self.center.real, self.center.imag],
            "scale": self.scale,
            "curve": [{"degree": s.degree, "residual": s.residual, "held_out": s.held_out,
                       "rms": s.rms, "conditioning": s.conditioning} for s in self.curve],
        }


def _frame(z: np.ndarray) -> tuple[complex, float]:
    x0, x1, y0, y1 = z.real.min(), z.real.max(), z.imag.min(), z.imag.max()
    scale = max(x1 - x0, y1 - y0) / 2
    return complex((x0 + x1) / 2, (y0 + y1) / 2), (scale if scale > 0 else 1.0)


def fit_polynomial(z, values, degrees=None, degree_max: int = DEGREE_MAX,
                   cond_max: float = COND_MAX) -> PolyFit:
    """Least-squares polynomial fit of ``values`` at points ``z``.

    Even-indexed samples are fitted, odd-indexed ones held out. Every degree
    of the schedule is tried; the lowest degree whose sup residual matches the
    best well-conditioned one (to 0.1% or the rounding floor) is kept.
    """
    z = np.asarray(z, dtype=complex).ravel()
    y = evaluate(values, z) if callable(values) else np.asarray(values, dtype=complex).ravel()
    if y.shape != z.shape:
        raise InputError("points and values differ in length")
    if not np.all(np.isfinite(y)):
        raise FitFailed("values are not finite")
    degrees = degree_schedule(degree_max) if degrees is None else tuple(sorted(set(degrees)))
    fit_idx, held_idx = np.arange(0, z.size, 2), np.arange(1, z.size, 2)
    if fit_idx.size < 4 * (degrees[-1] + 1):
        raise InputError(f"degree {degrees[-1]} needs at least {4 * (degrees[-1] + 1)} fitting samples")
    center, scale = _frame(z)
    u = (z - center) / scale
    full = np.vander(u, degrees[-1] + 1, increasing=True)
    curve, coefs = [], []
    for d in degrees:
        V = full[fit_idx, :d + 1]
        norms = np.linalg.norm(V, axis=0)
        norms[norms == 0] = 1.0
        sol, _, _, sv = np.linalg.lstsq(V / norms, y[fit_idx], rcond=None)
        c = sol / norms
        err = np.abs(full[:, :d + 1] @ c - y)
        cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
        rms = float(np.linalg.norm(err[fit_idx]) / math.sqrt(fit_idx.size))
        held = float(err[held_idx].max()) if held_idx.size else 0.0
        curve.append(FitStep(d, float(err.max()), held, rms, cond))
        coefs.append(c)
    ok = [k for k, s in enumerate(curve) if s.conditioning <= cond_max]
    if not ok:
        raise IllConditioned(f"conditioning exceeds {cond_max:g} at every degree")
    best = min(curve[k].residual for k in ok)
    floor = 1e-14 * max(1.0, float(np.abs(y).max()))
    k = next(k for k in ok if curve[k].residual <= 1.001 * best + floor)
    return PolyFit(coefs[k], center, float(scale), curve[k].residual, curve[k].conditioning, curve)


def outer_boundary_points(K: GridCompactum, samples: int = BOUNDARY_SAMPLES) -> np.ndarray:
    """Arc-length samples of the outer boundary, split between its cycles."""
    cycles = outer_boundary(K)
    total = sum(c.length for c in cycles)
    return np.concatenate([c.resample(max(64, int(round(samples * c.length / total))))
                           for c in cycles])


def fit_on_outer_boundary(f, K: GridCompactum, degree_max: int = DEGREE_MAX,
                          samples: int = BOUNDARY_SAMPLES) -> PolyFit:
    z = outer_boundary_points(K, samples)
    return fit_polynomial(z, evaluate(f, z), degree_max=degree_max)


# -- injectivity ----------------------------------------------------------------

@dataclass(frozen=True)
class Collision:
    z: complex
    w: complex
    image_distance: float

    def to_dict(self) -> dict:
        return {"z": [self.z.real, self.z.imag], "w": [self.w.real, self.w.imag],
                "image_distance": self.image_distance}


@dataclass
class InjectivityResult:
    injective: bool
    collisions: list[Collision]
    delta: float
    eps: float
    samples: int
    candidates: int = 0

    def to_dict(self) -> dict:
        return {"injective": self.injective, "delta": self.delta, "eps": self.eps,
                "samples": self.samples, "candidates": self.candidates,
                "collisions": [c.to_dict() for c in self.collisions]}


def _xy(z):
    return np.column_stack([z.real, z.imag])


def local_image_spacing(z: np.ndarray, fz: np.ndarray, q: float = 0.5) -> tuple[float, float]:
    """Quantile ``q`` of nearest-neighbour spacing among the samples and of the
    image distance across those same neighbour pairs."""
    d, nn = cKDTree(_xy(z)).query(_xy(z), k=2)
    return float(np.quantile(d[:, 1], q)), float(np.quantile(np.abs(fz - fz[nn[:, 1]]), q))


def _witnesses(z, fz, delta, radius, limit=10):
    pairs = cKDTree(_xy(fz)).query_pairs(radius, output_type="ndarray")
    if pairs.size == 0:
        return [], 0
    i, j = pairs[:, 0], pairs[:, 1]
    keep = np.abs(z[i] - z[j]) > delta
    i, j = i[keep], j[keep]
    gap = np.abs(fz[i] - fz[j])
    order = np.lexsort((j, i, gap))[:limit]
    return [Collision(complex(z[a]), complex(z[b]), float(g))
            for a, b, g in zip(i[order], j[order], gap[order])], int(keep.sum())


def injective_on_samples(f, samples, delta: float, eps: float) -> InjectivityResult:
    """Sample injectivity: a witness is a pair with ``|z-w| > delta`` and
    ``|f(z)-f(w)| < eps``."""
    z = np.asarray(samples, dtype=complex).ravel()
    if z.size < 2:
        raise InputError("need at least two samples")
    if not eps > 0:
        raise BadTolerances("eps must be > 0")
    fz = evaluate(f, z)
    spacing, image_spacing = local_image_spacing(z, fz)
    if delta <= 2 * spacing:
        raise BadTolerances(f"delta={delta:g} must exceed twice the sample spacing {spacing:.3g}")
    if eps >= image_spacing:
        raise BadTolerances(f"eps={eps:g} is not below the typical image spacing {image_spacing:.3g}")
    found, n = _witnesses(z, fz, delta, eps * (1 - 1e-12))
    return InjectivityResult(not found, found, delta, eps, int(z.size), n)


def _newton(p: PolyFit, target: complex, w0: complex, steps: int = 40) -> complex:
    w = w0
    for _ in range(steps):
        d = complex(p.derivative(w))
        if d == 0:
            break
        step = (complex(p(w)) - target) / d
        w -= step
        if abs(step) < 1e-15 * max(1.0, abs(w)):
            break
    return w


def certified_collisions(p: PolyFit, points, region: GridCompactum, delta: float,
                         limit: int = MAX_REFINE) -> InjectivityResult:
    """Exact collisions of the polynomial ``p`` on ``region``.

    Candidate pairs (images closer than 1.5x the typical local image spacing,
    preimages farther apart than ``delta``) are refined by solving
    ``p(w) = p(z)`` with Newton's method from ``w``. A collision is certified
    when the refined ``w`` stays in ``region``, still lies farther than
    ``delta`` from ``z``, and matches ``p(z)`` to 1e-10 relative accuracy.
    Witnesses are ordered by decreasing depth inside ``region``.
    """
    z = np.asarray(points, dtype=complex).ravel()
    pz = p(z)
    _, image_spacing = local_image_spacing(z, pz, q=0.99)
    radius = 1.5 * image_spacing
    candidates, n = _witnesses(z, pz, delta, radius, limit=limit)
    found = []
    for c in candidates:
        target = complex(p(c.z))
        w = _newton(p, target, c.w)
        miss = abs(complex(p(w)) - target)
        if (np.isfinite(w) and miss <= 1e-10 * max(1.0, abs(target))
                and abs(w - c.z) > delta and region.inside(w)):
            found.append(Collision(c.z, w, miss))
    if found:
        # the surrogate is most accurate far from the boundary: deepest witnesses first
        depth = ndimage.distance_transform_edt(region.mask)

        def clearance(c):
            rows, cols = region.cell_of(np.array([c.z, c.w]))
            return -float(depth[rows, cols].min())

        found.sort(key=clearance)
    return InjectivityResult(not found, found, delta, radius, int(z.size), n)


# -- outer-boundary criterion ----------------------------------------------------

def _cell_image_raster(K: GridCompactum, f_values: np.ndarray, h_img: float) -> GridCompactum:
    """Rasterize the image of K's cells; the reach covers half a cell diagonal
    times the local stretch."""
    grid_vals = np.full(K.mask.shape, np.nan, dtype=complex)
    grid_vals[K.mask] = f_values
    steps = []
    for a, b in ((grid_vals[:, 1:], grid_vals[:, :-1]), (grid_vals[1:], grid_vals[:-1])):
        d = np.abs(a - b)
        steps.append(d[np.isfinite(d)])
    steps = np.concatenate(steps)
    stretch = float(np.quantile(steps, 0.99)) / K.h if steps.size else 1.0
    reach = max(0.75 * h_img, stretch * K.h * math.sqrt(2) / 2 * 1.05)
    return rasterize_points(f_values, h_img, reach)


@dataclass
class CriterionResult:
    holds: bool
    gap: float
    tolerance: float
    h_image: float

    def to_dict(self) -> dict:
        return {"holds": self.holds, "gap": self.gap, "tolerance": self.tolerance,
                "h_image": self.h_image}


def outer_boundary_criterion(f, K: GridCompactum, h_image: float | None = None,
                             tolerance: float | None = None,
                             samples: int = BOUNDARY_SAMPLES) -> CriterionResult:
    """Does ``f`` map the outer boundary of K onto the outer boundary of f(K)?

    The gap is the Hausdorff distance between ``f`` on outer-boundary samples
    and the traced outer boundary of the rasterized image of K.
    """
    h_img = K.h if h_image is None else h_image
    tol = CRITERION_FACTOR * h_img if tolerance is None else tolerance
    fs = evaluate(f, outer_boundary_points(K, samples))
    image = _cell_image_raster(K, evaluate(f, K.cell_centers()), h_img)
    target = np.concatenate([c.vertices for c in outer_boundary(image)])
    gap = hausdorff(fs, target)
    return CriterionResult(gap <= tol, gap, tol, h_img)


# -- hole mapping ---------------------------------------------------------------

@dataclass
class HoleMapping:
    pairs: list[tuple[int, int]]
    representatives: list[complex]
    images: list[complex]
    source_holes: int
    target_holes: int

    @property
    def bijective(self) -> bool:
        targets = [t for _, t in self.pairs]
        return (self.source_holes == self.target_holes == len(self.pairs)
                and len(set(targets)) == len(targets))

    def to_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "bijective": self.bijective,
                "source_holes": self.source_holes, "target_holes": self.target_holes,
                "representatives": [[z.real, z.imag] for z in self.representatives],
                "images": [[w.real, w.imag] for w in self.images]}


def _curve_raster(points: np.ndarray, h: float) -> GridCompactum:
    spacing = np.abs(np.diff(np.concatenate([points, points[:1]])))
    return rasterize_points(points, h, max(h, 0.75 * float(spacing.max())))


def _curve_holes(points: np.ndarray, h: float):
    """Raster of a curve, its labeling, and a map from raster hole labels to
    1-based indices of the holes wider than the 2h resolution limit (the
    outline of a thin band encloses slivers that are not holes)."""
    raster = _curve_raster(points, h)
    lab = complement_components(raster)
    keep = [hole for hole in lab.holes if hole.clearance > 2 * h]
    return raster, lab, keep, {hole.index: k for k, hole in enumerate(keep, start=1)}


def hole_mapping(fstar, K: GridCompactum, criterion: CriterionResult | None = None,
                 f=None, h_image: float | None = None,
                 samples: int = BOUNDARY_SAMPLES) -> HoleMapping:
    """Match each hole of the outer boundary to the hole of its image curve
    that contains the image of its representative."""
    if criterion is None:
        criterion = outer_boundary_criterion(fstar if f is None else f, K, h_image, samples=samples)
    if not criterion.holds:
        raise NotInjectiveCase(f"outer-boundary criterion fails (gap {criterion.gap:.3g})")
    h_img = criterion.h_image
    pts = outer_boundary_points(K, 4 * samples)
    _, _, src, _ = _curve_holes(pts, K.h)
    img_pts = evaluate(fstar if f is None else f, pts)
    dst_raster, dst, dst_keep, renumber = _curve_holes(img_pts, h_img)
    reps = [hole.representative for hole in src]
    images = [complex(w) for w in evaluate(fstar, np.array(reps, dtype=complex))] if reps else []
    tree = cKDTree(_xy(img_pts))
    pairs = []
    for j, w in enumerate(images, start=1):
        d, _ = tree.query([w.real, w.imag])
        if d < AMBIGUITY_FACTOR * h_img:
            raise AmbiguousMapping(f"image of hole {j} representative lies {d:.3g} from the image curve")
        i, c = dst_raster.cell_of(w)
        label = int(dst.labels[i, c]) if 0 <= i < dst_raster.height and 0 <= c < dst_raster.width else 0
        if label not in renumber:
            raise AmbiguousMapping(f"image of hole {j} representative is in no hole of the image curve")
        pairs.append((j, renumber[label]))
    return HoleMapping(pairs, reps, images, len(src), len(dst_keep))


# -- the extension report ---------------------------------------------------------

@dataclass
class ExtensionReport:
    injective_on_K: InjectivityResult
    criterion: CriterionResult
    fit: PolyFit
    injective_on_hull: InjectivityResult
    hull_image_gap: float
    hole_mapping: HoleMapping | None
    falsification_events: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.criterion.holds == self.injective_on_hull.injective

    def to_dict(self) -> dict:
        return {
            "injective_on_K": self.injective_on_K.to_dict(),
            "criterion": self.criterion.to_dict(),
            "fit": self.fit.to_dict(),
            "injective_on_hull": self.injective_on_hull.to_dict(),
            "hull_image_gap": self.hull_image_gap,
            "hole_mapping": None if self.hole_mapping is None else self.hole_mapping.to_dict(),
            "biconditional_consistent": self.consistent,
            "falsification_events": list(self.falsification_events),
        }


def subsample(grid: GridCompactum, region: np.ndarray | None = None,
              limit: int = HULL_SAMPLES) -> np.ndarray:
    """Cell centers of ``region`` on a strided lattice of at most ~``limit`` points."""
    region = grid.mask if region is None else region
    stride = max(1, int(math.ceil(math.sqrt(region.sum() / limit))))
    sub = np.zeros_like(region)
    sub[::stride, ::stride] = region[::stride, ::stride]
    return grid.cell_centers(sub)


def check_extension_injectivity(f, K: GridCompactum, delta: float | None = None,
                                eps: float = 1e-6, h_image: float | None = None,
                                degree_max: int = DEGREE_MAX,
                                samples: int = BOUNDARY_SAMPLES,
                                hull_samples: int = HULL_SAMPLES) -> ExtensionReport:
    """Fit the extension, test it for injectivity on the hull, and compare
    with the outer-boundary criterion. Disagreement is a falsification event."""
    delta = 5 * K.h if delta is None else delta
    h_img = K.h if h_image is None else h_image
    hyp = injective_on_samples(f, K.samples(K.h / 2), delta, eps)
    if not hyp.injective:
        c = hyp.collisions[0]
        raise HypothesisFailed(f"f is not injective on K: f({c.z:.4g}) ~ f({c.w:.4g})")
    labeling = complement_components(K)
    fit = fit_on_outer_boundary(f, K, degree_max, samples)
    hull = polynomial_hull(K, labeling)
    crit = outer_boundary_criterion(f, K, h_img, samples=samples)
    ext = certified_collisions(fit, subsample(hull, limit=hull_samples), hull, delta)

    hull_img = _cell_image_raster(hull, fit(hull.cell_centers()), h_img)
    f_img = _cell_image_raster(K, evaluate(f, K.cell_centers()), h_img)
    gap = hausdorff(hull_img.cell_centers(), polynomial_hull(f_img).cell_centers())

    events = []
    mapping = None
    if crit.holds:
        mapping = hole_mapping(fit, K, crit, f=f, samples=samples)
        if not mapping.bijective:
            events.append("hole mapping is not a bijection although the criterion holds")
        if gap > CRITERION_FACTOR * h_img:
            events.append(f"hull image gap {gap:.3g} exceeds {CRITERION_FACTOR:g}h on a criterion-true case")
    if crit.holds != ext.injective:
        events.append(f"criterion says {crit.holds} but the extension is "
                      f"{'injective' if ext.injective else 'not injective'}")
    return ExtensionReport(hyp, crit, fit, ext, gap, mapping, events)


# -- regular holes ------------------------------------------------------------------

@dataclass
class RegularHoleVerdict:
    hole: int
    injective: bool
    fit: PolyFit
    collisions: InjectivityResult
    falsification_events: list[str] = field(default_factory=list)
    regular: bool = True

    def to_dict(self) -> dict:
        return {"hole": self.hole, "regular": self.regular, "injective": self.injective,
                "fit": self.fit.to_dict(), "collisions": self.collisions.to_dict(),
                "falsification_events": list(self.falsification_events)}


def regular_hole_injectivity(f, K: GridCompactum, hole_id: int,
                             labeling: RegionLabeling | None = None,
                             delta: float | None = None, eps: float = 1e-6,
                             degree_max: int = DEGREE_MAX,
                             samples: int = BOUNDARY_SAMPLES,
                             search: bool = False) -> RegularHoleVerdict:
    """Injectivity of the extension on the closure of a regular hole of K.

    The polynomial is fitted on the cycle around the hole and tested on the
    hole's cells plus one surrounding layer. With ``search=True`` a
    non-regular hole is examined the same way, but only as a search for
    collisions: nothing is predicted there, so no event is recorded.
    """
    labeling = complement_components(K) if labeling is None else labeling
    regular = regular_hole(K, hole_id, labeling)
    if not regular and not search:
        raise NotRegular(f"hole {hole_id} is not the only hole of its boundary")
    delta = 5 * K.h if delta is None else delta
    hyp = injective_on_samples(f, K.samples(K.h / 2), delta, eps)
    if not hyp.injective:
        raise HypothesisFailed("f is not injective on K")
    cyc = hole_cycle(K, hole_id, labeling)
    z = cyc.resample(max(samples, len(cyc)))
    fit = fit_polynomial(z, evaluate(f, z), degree_max=degree_max)
    closure = ndimage.binary_dilation(labeling.hole_mask(hole_id), structure=EIGHT)
    region = K.with_mask(closure)
    res = certified_collisions(fit, subsample(region, closure), region, delta)
    events = [] if res.injective or not regular else [f"extension not injective on regular hole {hole_id}"]
    return RegularHoleVerdict(hole_id, res.injective, fit, res, events, regular)


# -- annulus demonstration ------------------------------------------------------------

@dataclass
class GapDemo:
    r: float
    R: float
    boundary_injective: bool
    margin: float
    collision: Collision
    interior_collisions: int

    def to_dict(self) -> dict:
        return {"r": self.r, "R": self.R, "boundary_injective": self.boundary_injective,
                "margin": self.margin, "collision": self.collision.to_dict(),
                "interior_collisions": self.interior_collisions}


def joukowski(z):
    z = np.asarray(z, dtype=complex)
    return z + 1 / z


def boundary_injectivity_gap_demo(r: float, R: float, samples: int = 1024,
                                  tol: float = 1e-9) -> GapDemo:
    """``z + 1/z`` on the annulus ``r <= |z| <= R``: injective on both boundary
    circles but not on the annulus (``z`` and ``1/z`` collide)."""
    if not (0 < r < 1 < R):
        raise BadRadii("radii must satisfy 0 < r < 1 < R")
    if abs(r * R - 1) <= tol:
        raise BadRadii("rR = 1: the boundary circles are swapped by z -> 1/z")
    theta = 2 * math.pi * np.arange(samples) / samples
    bd = np.concatenate([r * np.exp(1j * theta), R * np.exp(1j * theta)])
    fb = joukowski(bd)
    # smallest divided difference |f(z)-f(w)|/|z-w| over distinct boundary samples
    margin = math.inf
    for k in range(0, bd.size, 256):
        dz = bd[k:k + 256, None] - bd[None, :]
        df = fb[k:k + 256, None] - fb[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.abs(df) / np.abs(dz)
        q[dz == 0] = np.inf
        margin = min(margin, float(q.min()))
    # interior collisions: z and 1/z = conj(z) on the unit circle, which lies in K
    u = np.exp(1j * theta)
    sep = np.abs(u - u.conj())
    k = int(np.argmax(sep))
    z, w = complex(u[k]), complex(u[k].conj())
    witness = Collision(z, w, float(abs(joukowski(z) - joukowski(w))))
    # a polar grid closed under z -> 1/z exposes the collisions numerically
    span = min(-math.log(r), math.log(R))
    rho = np.exp(np.linspace(-span, span, 41))
    grid = (rho[:, None] * np.exp(1j * theta[None, ::8])).ravel()
    inner = injective_on_samples(joukowski, grid, delta=0.5 * (1 - r), eps=1e-9)
    return GapDemo(r, R, margin > 0, margin, witness, inner.candidates)


def composition_bound(h_coeffs, phi_values: np.ndarray, phi_residual: float) -> float:
    """Upper bound for the fit residual of ``h o phi`` given a fit of ``phi``.

    If ``|p - phi| <= e`` on K then ``|h(p) - h(phi)| <= max|h'| * e`` where the
    max runs over the ``e``-neighbourhood of phi(K); ``h o p`` is itself a
    polynomial, so the best fit of ``h o phi`` at degree ``deg h * deg p`` is
    within ``(1 + max|h'|) * e`` (the extra ``e`` absorbs the held-out split).
    """
    c = np.asarray(h_coeffs, dtype=complex)
    dc = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1, dtype=complex)
    ring = phi_values[:, None] + phi_residual * np.exp(2j * np.pi * np.arange(8) / 8)[None, :]
    dmax = float(np.abs(np.polynomial.polynomial.polyval(
        np.concatenate([phi_values, ring.ravel()]), dc)).max())
    return (1 + dmax) * phi_residual
