"""Single generators of the algebras C(K), A(K), R(K) and P(K).

For a homeomorphism ``phi`` of K onto its image:

* C(K) is generated by ``phi`` iff K has empty interior and connected complement;
* A(K) and R(K) are generated by ``phi`` iff K has connected complement;
* P(K) is generated by ``phi`` iff ``phi**-1`` lies in P(phi(K)).

The first three conditions are decided on the grid (or on the exact set for
thin primitives). Membership in P(.) cannot be decided from samples, so the
P verdict rests on a residual-curve heuristic and always carries its
confidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .extension import (COND_MAX, DEGREE_MAX, InjectivityResult, degree_schedule,
                        fit_polynomial, injective_on_samples)
from .grid import GridCompactum, complement_components, interior_empty
from .winding import evaluate

ALGEBRAS = ("C", "A", "R", "P")
MEMBER_TOL = 1e-6
PLATEAU_DROP = 0.02  # relative decrease over the top half that still counts as flat
MAX_FIT_POINTS = 8192
MIN_FIT_POINTS = 4096
HIGH, LOW = "HIGH", "LOW"


@dataclass
class Membership:
    """Outcome of the P-membership heuristic. ``member`` is None when undecided."""

    member: bool | None
    confidence: str
    residual: float
    noise_floor: float
    degrees: list[int]
    residuals: list[float]

    def to_dict(self) -> dict:
        return {"member": self.member, "confidence": self.confidence,
                "residual": self.residual, "noise_floor": self.noise_floor,
                "curve": [[d, r] for d, r in zip(self.degrees, self.residuals)]}

    def to_csv(self) -> str:
        return "degree,residual\n" + "".join(f"{d},{r!r}\n" for d, r in zip(self.degrees, self.residuals))


def _points(L) -> np.ndarray:
    if isinstance(L, GridCompactum):
        return L.samples(L.h)
    return np.asarray(L, dtype=complex).ravel()


def _thin_out(z: np.ndarray, limit: int) -> np.ndarray:
    if z.size <= limit:
        return np.arange(z.size)
    return np.linspace(0, z.size - 1, limit).round().astype(int)


def classify_curve(degrees, residuals, conditioning, noise_floor: float,
                   degree_max: int) -> tuple[bool | None, str]:
    """Member when the residual drops below MEMBER_TOL; non-member when the
    well-conditioned top half of the sweep is flat and well above the noise."""
    ok = [k for k, c in enumerate(conditioning) if c <= COND_MAX]
    best = min(residuals[k] for k in ok)
    if best < MEMBER_TOL:
        return True, HIGH
    top = [k for k in ok if degrees[k] >= degree_max / 2]
    if len(top) >= 2:
        first, last = residuals[top[0]], min(residuals[k] for k in top)
        if last >= 10 * noise_floor and (first - last) <= PLATEAU_DROP * first:
            return False, HIGH
    return None, LOW


def p_membership_heuristic(g, L, degree_max: int = DEGREE_MAX) -> Membership:
    """Numerical stand-in for ``g in P(L)``.

    ``L`` is a GridCompactum or an array of points; ``g`` is a callable or an
    array of values at those points. The fit uses samples of all of L, not
    only its outer boundary: a function can be a polynomial limit on the outer
    boundary without being one on L.
    """
    z = _points(L)
    y = evaluate(g, z) if callable(g) else np.asarray(g, dtype=complex).ravel()
    if y.shape != z.shape:
        raise InputError("points and values differ in length")
    keep = _thin_out(z, MAX_FIT_POINTS)
    z, y = z[keep], y[keep]
    degree_max = min(degree_max, z.size // 8 - 1)  # half the samples fit, 4 per coefficient
    fit = fit_polynomial(z, y, degree_max=degree_max)
    degrees = [s.degree for s in fit.curve]
    residuals = [s.residual for s in fit.curve]
    noise = 1e-12 * max(1.0, float(np.abs(y).max()))
    member, conf = classify_curve(degrees, residuals, [s.conditioning for s in fit.curve],
                                  noise, max(degree_schedule(degree_max)))
    return Membership(member, conf, fit.residual, noise, degrees, residuals)


# -- verdicts -------------------------------------------------------------------

def verdict_formula(algebra: str, is_homeo: bool, interior_empty: bool,
                    complement_connected: bool, inverse_in_P: bool | None) -> bool | None:
    """The theorems' conjunctions; None propagates an undecided membership."""
    if algebra == "C":
        return is_homeo and interior_empty and complement_connected
    if algebra in ("A", "R"):
        return is_homeo and complement_connected
    if algebra == "P":
        if not is_homeo:
            return False
        return inverse_in_P
    raise InputError(f"unknown algebra {algebra!r}; expected one of {ALGEBRAS}")


@dataclass
class GeneratorVerdict:
    algebra: str
    is_homeo: bool
    interior_empty: bool
    complement_connected: bool
    generates: bool | None
    heuristic: bool = False
    inverse_in_P: Membership | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"algebra": self.algebra, "is_homeo": self.is_homeo,
               "interior_empty": self.interior_empty,
               "complement_connected": self.complement_connected,
               "generates": self.generates, "heuristic": self.heuristic,
               "notes": list(self.notes)}
        if self.inverse_in_P is not None:
            out["inverse_in_P"] = self.inverse_in_P.to_dict()
        return out


def homeomorphism_check(phi, K: GridCompactum, delta: float | None = None,
                        eps: float = 1e-6) -> InjectivityResult:
    """Sample injectivity on K (continuity is given; K is compact)."""
    delta = 5 * K.h if delta is None else delta
    return injective_on_samples(phi, K.samples(K.h / 2), delta, eps)


def is_homeomorphism_onto_image(phi, K: GridCompactum, delta: float | None = None,
                                eps: float = 1e-6) -> bool:
    return homeomorphism_check(phi, K, delta, eps).injective


def _interior_empty(K: GridCompactum) -> tuple[bool, str]:
    if K.shape is not None and K.exact_thin:
        return True, "interior_empty from the exact thin set"
    value = interior_empty(K)
    note = "interior_empty from the grid predicate"
    if K.shape is None:
        note += " (bands drawn around curves have interior)"
    return value, note


def _topology(phi, K, delta, eps):
    homeo = is_homeomorphism_onto_image(phi, K, delta, eps)
    empty, note = _interior_empty(K)
    connected = complement_components(K).n_holes == 0
    return homeo, empty, connected, note


def _generates(algebra, phi, K, delta, eps):
    homeo, empty, connected, note = _topology(phi, K, delta, eps)
    g = verdict_formula(algebra, homeo, empty, connected, None)
    # a singly generated C, A or R forces a polynomially convex K
    assert not g or connected
    return GeneratorVerdict(algebra, homeo, empty, connected, g, notes=[note])


def generates_C(phi, K: GridCompactum, delta=None, eps=1e-6) -> GeneratorVerdict:
    return _generates("C", phi, K, delta, eps)


def generates_A(phi, K: GridCompactum, delta=None, eps=1e-6) -> GeneratorVerdict:
    return _generates("A", phi, K, delta, eps)


def generates_R(phi, K: GridCompactum, delta=None, eps=1e-6) -> GeneratorVerdict:
    return _generates("R", phi, K, delta, eps)


def generates_P(phi, K: GridCompactum, delta=None, eps=1e-6,
                degree_max: int = DEGREE_MAX) -> GeneratorVerdict:
    """Homeomorphism plus the membership heuristic for ``phi**-1`` on phi(K).

    The inverse needs no formula: its values at ``phi(z)`` are the samples ``z``.
    """
    homeo, empty, connected, note = _topology(phi, K, delta, eps)
    notes = [note]
    if not homeo:
        return GeneratorVerdict("P", False, empty, connected, False, notes=notes)
    z = K.samples(K.h)
    if z.size < MIN_FIT_POINTS:  # thin sets: sample more densely
        z = K.samples(K.h * z.size / MIN_FIT_POINTS)
    mem = p_membership_heuristic(z, evaluate(phi, z), degree_max)
    g = verdict_formula("P", homeo, empty, connected, mem.member)
    heuristic = not (mem.member and mem.residual < 1e-10)
    if mem.confidence == LOW:
        notes.append("membership undecided: residual curve neither converged nor flat")
    return GeneratorVerdict("P", homeo, empty, connected, g, heuristic, mem, notes)


def generator_table(phi, K: GridCompactum, delta=None, eps=1e-6,
                    degree_max: int = DEGREE_MAX) -> dict[str, GeneratorVerdict]:
    return {"C": generates_C(phi, K, delta, eps), "A": generates_A(phi, K, delta, eps),
            "R": generates_R(phi, K, delta, eps),
            "P": generates_P(phi, K, delta, eps, degree_max)}
