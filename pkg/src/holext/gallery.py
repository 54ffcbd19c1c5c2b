"""Worked example cases G1..G7.

Each case builds its compactum, runs the relevant operations and checks the
expected outcome. A failed check is a falsification event: the expected
outcomes are theorems, so a mismatch means a bug here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadRadii, UnknownCase
from .expr import compile_expression
from .extension import (boundary_injectivity_gap_demo, check_extension_injectivity,
                        injective_on_samples, joukowski, regular_hole_injectivity)
from .generators import generates_P, generator_table
from .grid import complement_components, rasterize, regular_hole
from .shapes import (Annulus, Circle, Disk, Segment, annulus_with_inner_circle,
                     disk_and_circle, tangent_circles)
from .winding import arg_growth, continuous_log, spiral_path

# -z on the small circle |z+1| = 1, z on the large circle |z-2| = 2
TANGENT_F = "where(abs(abs(z+1)-1) < abs(abs(z-2)-2), -z, z)"
# the same map with the full disk |z+1| <= 1 in place of its boundary circle
DISK_CIRCLE_F = "where(abs(z+1)-1 < abs(abs(z-2)-2), -z, z)"
DP_F = "z + 0.2*z^2"
BAND = 2.5  # curve band width in cells
SPIRAL_T = 40 * math.pi
SPIRAL_STEP = 0.005


@dataclass
class CaseResult:
    case: str
    title: str
    h: float | None
    tolerances: dict
    results: dict
    checks: dict[str, bool] = field(default_factory=dict)
    falsification_events: list[str] = field(default_factory=list)

    def check(self, name: str, ok) -> None:
        ok = bool(ok)
        self.checks[name] = ok
        if not ok:
            self.falsification_events.append(f"{self.case}: check '{name}' failed")

    def to_dict(self) -> dict:
        return {"title": self.title, "resolution": self.h, "tolerances": self.tolerances,
                "results": self.results, "checks": self.checks,
                "falsification_events": list(self.falsification_events)}


def _in_left_disk(z):
    return abs(z + 1) < 1


def _in_right_disk(z):
    return abs(z - 2) < 2


def case_g1(h: float = 0.02, degree_max: int = 80) -> CaseResult:
    """Two tangent circles: f is injective on K, its extension is not on the hull."""
    f = compile_expression(TANGENT_F)
    K = rasterize(tangent_circles(BAND * h), h)
    tol = {"delta_K": 0.1, "eps_K": 1e-6, "delta_hull": 5 * h, "criterion": 5 * h}
    hyp = injective_on_samples(f, K.samples(h / 2), tol["delta_K"], tol["eps_K"])
    rep = check_extension_injectivity(f, K, degree_max=degree_max)
    gp = generates_P(f, K, degree_max=degree_max)
    witness = rep.injective_on_hull.collisions[0] if rep.injective_on_hull.collisions else None
    crosses = witness is not None and (
        (_in_left_disk(witness.z) and _in_right_disk(witness.w) and not _in_left_disk(witness.w))
        or (_in_left_disk(witness.w) and _in_right_disk(witness.z) and not _in_left_disk(witness.z)))
    out = CaseResult("G1", "tangent circles: injective on K, not on the hull", h, tol, {
        "function": TANGENT_F,
        "holes": complement_components(K).n_holes,
        "injective_on_K": hyp,
        "extension": rep,
        "inverse_in_P": gp.inverse_in_P,
    })
    out.check("f injective on K", hyp.injective)
    out.check("criterion false", not rep.criterion.holds)
    out.check("criterion gap >= 0.4", rep.criterion.gap >= 0.4)
    out.check("extension not injective", not rep.injective_on_hull.injective)
    out.check("witness joins the two disks", crosses)
    out.check("inverse not in P(f(K))", gp.inverse_in_P.member is False)
    out.falsification_events.extend(f"G1: {e}" for e in rep.falsification_events)
    return out


def case_g2(h: float = 0.02, degree_max: int = 80) -> CaseResult:
    """Hole regularity and per-hole injectivity."""
    g = compile_expression(DISK_CIRCLE_F)
    f = compile_expression(TANGENT_F)
    ident = compile_expression("z")
    K1 = rasterize(disk_and_circle(BAND * h), h)
    K2 = rasterize(tangent_circles(BAND * h), h)
    K3 = rasterize(annulus_with_inner_circle(BAND * h), h)
    lab1, lab2, lab3 = (complement_components(K) for K in (K1, K2, K3))
    reg = {name: [regular_hole(K, j, lab) for j in range(1, lab.n_holes + 1)]
           for name, K, lab in (("K1", K1, lab1), ("K2", K2, lab2), ("K3", K3, lab3))}
    per_hole = {"K1": [regular_hole_injectivity(g, K1, 1, lab1, degree_max=degree_max)],
                "K2": [regular_hole_injectivity(f, K2, j, lab2, degree_max=degree_max) for j in (1, 2)]}
    # non-regular holes are searched for collisions, with nothing asserted
    k3 = [regular_hole_injectivity(ident, K3, j, lab3, degree_max=degree_max, search=True).to_dict()
          for j in range(1, lab3.n_holes + 1)]
    full = check_extension_injectivity(g, K1, degree_max=degree_max)
    out = CaseResult("G2", "hole regularity and per-hole injectivity", h, {"delta": 5 * h, "criterion": 5 * h}, {
        "functions": {"K1": DISK_CIRCLE_F, "K2": TANGENT_F, "K3": "z"},
        "holes": {"K1": lab1.n_holes, "K2": lab2.n_holes, "K3": lab3.n_holes},
        "regular": reg,
        "per_hole": {k: [v.to_dict() for v in vs] for k, vs in per_hole.items()} | {"K3": k3},
        "extension_K1": full,
    })
    out.check("K1 has one regular hole", reg["K1"] == [True])
    out.check("K2 has two regular holes", reg["K2"] == [True, True])
    out.check("K3 middle hole not regular, inner hole regular", reg["K3"] == [False, True])
    for k, vs in per_hole.items():
        for v in vs:
            out.check(f"{k} hole {v.hole}: extension injective", v.injective)
            out.falsification_events.extend(f"G2: {e}" for e in v.falsification_events)
    out.check("K1: extension over the whole hull not injective", not full.injective_on_hull.injective)
    out.falsification_events.extend(f"G2: {e}" for e in full.falsification_events)
    return out


def case_g3(h: float | None = None, degree_max: int = 80) -> CaseResult:
    """z + 1/z on an annulus: injective on the boundary, not inside."""
    demo = boundary_injectivity_gap_demo(0.5, 3.0)
    thin = boundary_injectivity_gap_demo(0.9, 1.1)
    try:
        boundary_injectivity_gap_demo(0.5, 2.0)
        rejected = False
    except BadRadii:
        rejected = True
    fi = complex(joukowski(1j) - joukowski(-1j))
    out = CaseResult("G3", "boundary injectivity without interior injectivity", None,
                     {"margin_min": 0.01, "collision": 1e-9}, {
                         "r=0.5,R=3": demo, "r=0.9,R=1.1": thin,
                         "f(i)-f(-i)": abs(fi), "rR=1 rejected": rejected})
    out.check("boundary injective with margin > 0.01", demo.boundary_injective and demo.margin > 0.01)
    out.check("|f(i) - f(-i)| < 1e-9", abs(fi) < 1e-9)
    out.check("interior collision found", demo.interior_collisions > 0
              and demo.collision.image_distance < 1e-9)
    out.check("thin annulus: positive margin, collision persists",
              thin.margin > 0 and thin.interior_collisions > 0)
    out.check("rR = 1 rejected", rejected)
    return out


def case_g4(h: float | None = None, degree_max: int = 80) -> CaseResult:
    """Clustering spiral: the argument grows without bound."""
    track = arg_growth("clustering", SPIRAL_T, SPIRAL_STEP)
    t = np.linspace(0.0, SPIRAL_T, track.theta.size)
    dev = float(np.abs(track.theta - t).max())
    out = CaseResult("G4", "clustering spiral has no continuous logarithm", None,
                     {"step": SPIRAL_STEP, "deviation_max": math.pi / 2}, {
                         "t_max": SPIRAL_T, "total_argument": track.total, "max_deviation": dev,
                         "turns": track.total / (2 * math.pi)})
    out.check("|arg - t| <= pi/2", dev <= math.pi / 2)
    out.check("argument grows by about t_max", abs(track.total - SPIRAL_T) <= math.pi / 2)
    return out


def case_g5(h: float | None = None, degree_max: int = 80) -> CaseResult:
    """Accessible spiral: log z(t) = it - log(1+t)."""
    path = spiral_path("accessible", SPIRAL_T, SPIRAL_STEP)
    L = continuous_log(path)
    exact = 1j * path.t - np.log1p(path.t)
    shift = 2j * math.pi * round(((L - exact).imag[0]) / (2 * math.pi))
    err = float(np.abs(L - exact - shift).max())
    out = CaseResult("G5", "accessible spiral logarithm", None, {"step": SPIRAL_STEP, "log": 1e-9},
                     {"t_max": SPIRAL_T, "max_error": err, "alignment": shift})
    out.check("log matches it - log(1+t) to 1e-9", err <= 1e-9)
    return out


def case_g6(h: float = 0.02, degree_max: int = 80) -> CaseResult:
    """z + 0.2 z^2 on the disk: boundary injectivity gives injectivity."""
    f = compile_expression(DP_F)
    K = rasterize(Disk(0, 1.0), h)
    rep = check_extension_injectivity(f, K, degree_max=degree_max)
    circle = Circle(0, 1.0, BAND * h).samples(h / 2)
    bd = injective_on_samples(f, circle, 5 * h, 1e-6)
    disk = Disk(0, 1.0).samples(0.015)
    dense = injective_on_samples(rep.fit, disk, 0.05, 1e-4)
    out = CaseResult("G6", "boundary injectivity on the circle extends to the disk", h,
                     {"delta": 0.05, "eps": 1e-4, "criterion": 5 * h}, {
                         "function": DP_F, "boundary": bd, "extension": rep, "disk_samples": dense})
    out.check("injective on the circle", bd.injective)
    out.check("criterion true with gap <= 5h", rep.criterion.holds and rep.criterion.gap <= 5 * h)
    out.check("at least 1e4 disk samples", dense.samples >= 10_000)
    out.check("no extension collision on disk samples", dense.injective)
    out.check("extension injective on the hull", rep.injective_on_hull.injective)
    out.check("hull image matches hull of the image", rep.hull_image_gap <= 5 * h)
    out.falsification_events.extend(f"G6: {e}" for e in rep.falsification_events)
    return out


# (name, shape factory, phi, expected verdicts for C, A, R, P)
GENERATOR_PAIRS = [
    ("segment, z", lambda h: Segment(0, 1, BAND * h), "z", (True, True, True, True)),
    ("circle, z", lambda h: Circle(0, 1.0, BAND * h), "z", (False, False, False, True)),
    ("disk, z", lambda h: Disk(0, 1.0), "z", (False, True, True, True)),
    ("annulus, z^2", lambda h: Annulus(0, 1.0, 2.0), "z^2", (False, False, False, False)),
    ("tangent circles, piecewise", lambda h: tangent_circles(BAND * h), TANGENT_F,
     (False, False, False, False)),
    ("disk(0, 0.5), (z+2)^3", lambda h: Disk(0, 0.5), "(z+2)^3", (False, True, True, True)),
    ("segment, exp(z)", lambda h: Segment(0, 1, BAND * h), "exp(z)", (True, True, True, True)),
    ("disk, z + 0.2z^2", lambda h: Disk(0, 1.0), DP_F, (False, True, True, True)),
]


def case_g7(h: float = 0.02, degree_max: int = 80) -> CaseResult:
    """Generator table."""
    rows = []
    out = CaseResult("G7", "single generators of C, A, R and P", h,
                     {"delta": 5 * h, "eps": 1e-6}, {})
    ident = compile_expression("z")
    for name, make, phi, expected in GENERATOR_PAIRS:
        K = rasterize(make(h), h)
        table = generator_table(compile_expression(phi), K, degree_max=degree_max)
        got = tuple(table[a].generates for a in "CARP")
        z_gen = generates_P(ident, K, degree_max=degree_max).generates
        rows.append({"pair": name, "phi": phi, "expected": dict(zip("CARP", expected)),
                     "verdicts": {a: v.to_dict() for a, v in table.items()}, "z_generates_P": z_gen})
        out.check(f"{name}: verdicts", got == expected)
        out.check(f"{name}: z generates P", z_gen is True)
    out.results = {"pairs": rows,
                   "note": "real-valued generators of C(K, R) are not covered: that case is elementary"}
    return out


CASES = {"G1": case_g1, "G2": case_g2, "G3": case_g3, "G4": case_g4,
         "G5": case_g5, "G6": case_g6, "G7": case_g7}


def run_case(case: str, h: float = 0.02, degree_max: int = 80) -> CaseResult:
    key = case.upper()
    if key not in CASES:
        raise UnknownCase(f"unknown gallery case {case!r}; expected one of {sorted(CASES)} or 'all'")
    return CASES[key](h=h, degree_max=degree_max)
