"""Zero/pole counting by the argument principle, and the homotopic Rouche check.

``count_via_argument`` sums winding numbers of ``f`` along the oriented
boundary cycles of a region; ``oracle_count`` counts listed zeros and poles by
cell membership. The two routes share nothing but the region.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .eilenberg import homotopy_class
from .errors import (InputError, OnBoundary, ParseError, PoleOnBoundary,
                     ZeroOnBoundary)
from .grid import BoundaryCycle, GridCompactum, trace_boundary
from .winding import SampledPath, evaluate, winding_number

DEFAULT_SAMPLES = 4096
PROXIMITY = 3.0  # reject listed zeros/poles within PROXIMITY*h of a boundary sample
ZERO_TOL = 1e-10
POLE_TOL = 1e10


@dataclass(frozen=True)
class MeromorphicSpec:
    """``prod (z-a)**n / prod (z-b)**p * factor(z)`` with a zero-free factor."""

    zeros: tuple = ()
    poles: tuple = ()
    factor: object = None
    factor_expr: str | None = None

    def __post_init__(self):
        net = defaultdict(int)
        for loc, m in self.zeros:
            if int(m) < 1:
                raise ValueError("multiplicities must be >= 1")
            net[complex(loc)] += int(m)
        for loc, m in self.poles:
            if int(m) < 1:
                raise ValueError("multiplicities must be >= 1")
            net[complex(loc)] -= int(m)
        key = lambda item: (item[0].real, item[0].imag)
        object.__setattr__(self, "zeros", tuple(sorted(((z, m) for z, m in net.items() if m > 0), key=key)))
        object.__setattr__(self, "poles", tuple(sorted(((z, -m) for z, m in net.items() if m < 0), key=key)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for a, m in self.zeros:
            out = out * (z - a) ** m
        for b, m in self.poles:
            out = out / (z - b) ** m
        if self.factor is not None:
            out = out * evaluate(self.factor, z)
        return out

    def locations(self) -> np.ndarray:
        return np.array([a for a, _ in self.zeros] + [b for b, _ in self.poles], dtype=complex)

    def to_dict(self) -> dict:
        d = {"zeros": [[a.real, a.imag, m] for a, m in self.zeros],
             "poles": [[b.real, b.imag, m] for b, m in self.poles]}
        if self.factor_expr is not None:
            d["factor"] = self.factor_expr
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MeromorphicSpec":
        if not isinstance(d, dict) or set(d) - {"zeros", "poles", "factor"}:
            raise ParseError("meromorphic spec needs keys among zeros, poles, factor")

        def entries(key):
            out = []
            for item in d.get(key, []):
                if not (isinstance(item, (list, tuple)) and len(item) in (2, 3)):
                    raise ParseError(f"{key} entries are [re, im] or [re, im, multiplicity]")
                m = int(item[2]) if len(item) == 3 else 1
                out.append((complex(item[0], item[1]), m))
            return tuple(out)

        factor = expr = None
        if "factor" in d:
            from .expr import compile_expression
            expr = str(d["factor"])
            factor = compile_expression(expr)
        try:
            return cls(entries("zeros"), entries("poles"), factor, expr)
        except ValueError as exc:
            raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class CountResult:
    n: int | None
    p: int | None
    n_minus_p: int

    def to_dict(self) -> dict:
        return {"n": self.n, "p": self.p, "n_minus_p": self.n_minus_p}


def _points(cycle, samples):
    if isinstance(cycle, BoundaryCycle):
        return cycle.resample(max(samples, len(cycle))), cycle.h
    if isinstance(cycle, SampledPath):
        return cycle.points, None
    return np.asarray(cycle, dtype=complex), None


def _check_locations(spec: MeromorphicSpec, pts: np.ndarray, radius: float):
    if radius <= 0:
        return
    tree = cKDTree(np.column_stack([pts.real, pts.imag]))
    for kind, items, exc in (("zero", spec.zeros, ZeroOnBoundary),
                             ("pole", spec.poles, PoleOnBoundary)):
        for loc, _ in items:
            d, _ = tree.query([loc.real, loc.imag])
            if d < radius:
                raise exc(f"{kind} at {loc} lies within {radius:g} of the boundary")


def count_via_argument(f, cycles, samples: int = DEFAULT_SAMPLES,
                       h: float | None = None) -> int:
    """n - p inside the region bounded by the oriented ``cycles``."""
    total = 0
    for cyc in cycles:
        pts, ch = _points(cyc, samples)
        step = h if h is not None else ch
        if isinstance(f, MeromorphicSpec) and step is not None:
            _check_locations(f, pts, PROXIMITY * step)
        vals = evaluate(f, pts)
        mag = np.abs(vals)
        if not np.all(np.isfinite(vals)) or mag.max() >= POLE_TOL:
            raise PoleOnBoundary("function has a pole on the boundary samples")
        if mag.min() <= ZERO_TOL:
            raise ZeroOnBoundary("function vanishes on the boundary samples")
        total += winding_number(SampledPath(vals, closed=True), 0)
    return total


def oracle_count(spec: MeromorphicSpec, region: GridCompactum,
                 cycles: list[BoundaryCycle] | None = None) -> CountResult:
    """Count listed zeros and poles whose cell belongs to the region."""
    cycles = trace_boundary(region) if cycles is None else cycles
    locs = spec.locations()
    if locs.size:
        verts = np.concatenate([c.vertices for c in cycles])
        d, _ = cKDTree(np.column_stack([verts.real, verts.imag])).query(
            np.column_stack([locs.real, locs.imag]))
        if (d < PROXIMITY * region.h).any():
            raise OnBoundary(f"a listed zero or pole lies within {PROXIMITY:g}h of the boundary")
    n = sum(m for a, m in spec.zeros if region.inside(a))
    p = sum(m for b, m in spec.poles if region.inside(b))
    return CountResult(int(n), int(p), int(n - p))


@dataclass
class RoucheVerdict:
    hypothesis_holds: bool
    classes: tuple
    counts: tuple[int, int]
    counts_equal: bool
    oracle: tuple[CountResult | None, CountResult | None]
    argument_vs_oracle_consistent: bool | None
    falsification_events: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "hypothesis_holds": self.hypothesis_holds,
            "homotopy_classes": [list(c) for c in self.classes],
            "counts": list(self.counts),
            "counts_equal": self.counts_equal,
            "oracle": [o.to_dict() if o is not None else None for o in self.oracle],
            "argument_vs_oracle_consistent": self.argument_vs_oracle_consistent,
            "falsification_events": list(self.falsification_events),
        }


def homotopic_rouche_check(f, g, K: GridCompactum, samples: int = DEFAULT_SAMPLES) -> RoucheVerdict:
    """Evaluate the homotopic Rouche theorem on the region K.

    The theorem: if f and g are zero- and pole-free on the boundary and
    homotopic there in C*, then n - p agrees. A run where the hypothesis holds
    but the counts differ is recorded as a falsification event.
    """
    cycles = trace_boundary(K)
    cf = count_via_argument(f, cycles, samples)
    cg = count_via_argument(g, cycles, samples)
    classes = (homotopy_class(f, cycles, samples), homotopy_class(g, cycles, samples))
    hyp = classes[0] == classes[1]
    events = []
    if hyp and cf != cg:
        events.append(f"homotopic Rouche: hypothesis holds but counts differ ({cf} vs {cg})")
    oracles = tuple(oracle_count(s, K, cycles) if isinstance(s, MeromorphicSpec) else None
                    for s in (f, g))
    consistent = None
    checked = [(c, o) for c, o in zip((cf, cg), oracles) if o is not None]
    if checked:
        consistent = all(c == o.n_minus_p for c, o in checked)
        if not consistent:
            events.append("argument principle disagrees with the zero/pole oracle")
    return RoucheVerdict(hyp, classes, (cf, cg), cf == cg, oracles, consistent, events)


def random_specs(region: GridCompactum, count: int, seed: int = 0,
                 max_points: int = 3, max_multiplicity: int = 3,
                 clearance: float = 4.0) -> list[MeromorphicSpec]:
    """Deterministic random MeromorphicSpecs around ``region``.

    Zeros and poles are drawn uniformly in the region's bounding box grown by
    10%, rejecting locations within ``clearance*h`` of the region boundary.
    Each spec has 1..max_points zeros and 0..max_points poles with
    multiplicities 1..max_multiplicity; the analytic factor is trivial.
    """
    if count < 1:
        raise InputError("count must be >= 1")
    rng = np.random.default_rng(seed)
    cycles = trace_boundary(region)
    verts = np.concatenate([c.vertices for c in cycles])
    tree = cKDTree(np.column_stack([verts.real, verts.imag]))
    pts = region.cell_centers()
    x0, x1, y0, y1 = pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max()
    gx, gy = 0.1 * (x1 - x0), 0.1 * (y1 - y0)

    def draw():
        while True:
            z = complex(rng.uniform(x0 - gx, x1 + gx), rng.uniform(y0 - gy, y1 + gy))
            if tree.query([z.real, z.imag])[0] >= clearance * region.h:
                return z

    specs = []
    for _ in range(count):
        nz = int(rng.integers(1, max_points + 1))
        npole = int(rng.integers(0, max_points + 1))
        zeros = tuple((draw(), int(rng.integers(1, max_multiplicity + 1))) for _ in range(nz))
        poles = tuple((draw(), int(rng.integers(1, max_multiplicity + 1))) for _ in range(npole))
        specs.append(MeromorphicSpec(zeros, poles))
    return specs
