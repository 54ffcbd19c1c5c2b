"""Eilenberg representation of zero-free functions on a rasterized compactum.

A zero-free continuous ``f`` on K factors as ``prod_j (z - a_j)**s_j * exp(L)``
with one base point ``a_j`` per hole. The exponents are read off winding
numbers: if ``Gamma_j`` is the cycle surrounding hole ``j`` then

    wind(f o Gamma_j, 0) = sum_k s_k * wind(Gamma_j, a_k),

and the matrix ``wind(Gamma_j, a_k)`` is unitriangular up to a permutation
(holes nested inside ``Gamma_j`` contribute), so the system has a unique
integer solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericFailure, ObstructedLog, ZeroOnBoundary, ZeroOnK
from .grid import (BoundaryCycle, GridCompactum, RegionLabeling,
                   boundary_cycles, complement_components, hole_cycle)
from .winding import SampledPath, continuous_log, evaluate, winding_number

DEFAULT_SAMPLES = 2048
ZERO_FACTOR = 10 * np.finfo(float).eps


def _check_zero_free(values: np.ndarray, exc=ZeroOnK, where="K"):
    mag = np.abs(values)
    scale = max(1.0, float(np.max(mag[np.isfinite(mag)], initial=0.0)))
    if not np.all(np.isfinite(values)) or mag.min() <= ZERO_FACTOR * scale:
        raise exc(f"function vanishes (or is undefined) on {where}")


def _cycle_points(cycle, samples: int | None) -> np.ndarray:
    if isinstance(cycle, SampledPath):
        return cycle.points
    if isinstance(cycle, BoundaryCycle):
        n = len(cycle) if samples is None else max(samples, len(cycle))
        return cycle.resample(n)
    return np.asarray(cycle, dtype=complex)


@dataclass(eq=False)
class Factorization:
    base_points: list[complex]
    exponents: list[int]
    cycles: list[BoundaryCycle]
    points: list[np.ndarray] = field(repr=False)
    logs: list[np.ndarray] = field(repr=False)
    residual: float

    def reconstruct(self, k: int) -> np.ndarray:
        z = self.points[k]
        return _power_product(z, self.base_points, self.exponents) * np.exp(self.logs[k])

    def to_dict(self) -> dict:
        return {
            "exponents": list(self.exponents),
            "base_points": [[a.real, a.imag] for a in self.base_points],
            "residual": self.residual,
            "cycles": len(self.cycles),
        }


def _power_product(z, points, exponents) -> np.ndarray:
    out = np.ones_like(np.asarray(z, dtype=complex))
    for a, s in zip(points, exponents):
        if s:
            out = out * (z - a) ** s
    return out


def _exponents(f, K, labeling, samples):
    n = labeling.n_holes
    if n == 0:
        return [], []
    cycles = [hole_cycle(K, j, labeling) for j in range(1, n + 1)]
    reps = [hole.representative for hole in labeling.holes]
    w = np.empty(n, dtype=int)
    M = np.empty((n, n), dtype=int)
    for j, cyc in enumerate(cycles):
        pts = _cycle_points(cyc, samples)
        vals = evaluate(f, pts)
        _check_zero_free(vals)
        w[j] = winding_number(SampledPath(vals, closed=True), 0)
        geom = SampledPath(cyc.vertices, closed=True)
        for k, a in enumerate(reps):
            M[j, k] = winding_number(geom, a)
    s = np.rint(np.linalg.solve(M.astype(float), w.astype(float))).astype(int)
    if not np.array_equal(M @ s, w):
        raise NumericFailure("winding system has no integer solution")
    return [int(x) for x in s], reps


def eilenberg_exponents(f, K: GridCompactum, labeling: RegionLabeling | None = None,
                        samples: int = DEFAULT_SAMPLES) -> list[int]:
    """One integer exponent per hole of K, in hole order."""
    labeling = complement_components(K) if labeling is None else labeling
    _check_zero_free(evaluate(f, K.cell_centers()))
    return _exponents(f, K, labeling, samples)[0]


def factorize(f, K: GridCompactum, labeling: RegionLabeling | None = None,
              samples: int = DEFAULT_SAMPLES) -> Factorization:
    """Exponents, base points and a sampled continuous logarithm ``L`` on the
    boundary cycles of K."""
    labeling = complement_components(K) if labeling is None else labeling
    _check_zero_free(evaluate(f, K.cell_centers()))
    exps, reps = _exponents(f, K, labeling, samples)
    cycles = boundary_cycles(K, labeling)
    pts_all, logs, worst = [], [], 0.0
    for cyc in cycles:
        z = cyc.resample(samples)
        fz = evaluate(f, z)
        _check_zero_free(fz)
        prod = _power_product(z, reps, exps)
        try:
            L = continuous_log(SampledPath(fz / prod, closed=True))
        except ObstructedLog as exc:
            raise ObstructedLog(f"residual map winds around 0 ({exc}); exponents inconsistent") from None
        rel = np.abs(fz - prod * np.exp(L)) / np.abs(fz)
        worst = max(worst, float(rel.max()))
        pts_all.append(z)
        logs.append(L)
    return Factorization(list(reps), list(exps), cycles, pts_all, logs, worst)


def has_continuous_log(f, K: GridCompactum, labeling: RegionLabeling | None = None) -> bool:
    return all(s == 0 for s in eilenberg_exponents(f, K, labeling))


def homotopy_class(f, cycles, samples: int | None = None) -> tuple[int, ...]:
    """Winding numbers of ``f`` around 0 along each cycle.

    Two zero-free maps on the same cycles are homotopic through zero-free
    maps iff their class vectors agree.
    """
    out = []
    for cyc in cycles:
        vals = evaluate(f, _cycle_points(cyc, samples))
        _check_zero_free(vals, ZeroOnBoundary, "the boundary")
        out.append(winding_number(SampledPath(vals, closed=True), 0))
    return tuple(out)


def homotopic(f, g, cycles, samples: int | None = None) -> bool:
    return homotopy_class(f, cycles, samples) == homotopy_class(g, cycles, samples)
