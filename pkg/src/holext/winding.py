"""Continuous arguments along sampled paths.

Everything here rests on one rule: consecutive samples must differ in
argument by less than pi, so that the principal increment ``angle(v[k+1]/v[k])``
is the true increment. A step at or beyond that bound raises
:class:`StepTooLarge` instead of being bridged silently.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (NonIntegerWinding, ObstructedLog, PointOnPath,
                     PreconditionError, StepTooLarge, ZeroOnPath)
from .shapes import spiral_point

MAX_STEP = math.pi
INTEGER_TOL = 0.01
MIN_POINTS = 8


def evaluate(f, z) -> np.ndarray:
    """``f(z)`` as a complex array of the same shape as ``z`` (constants broadcast)."""
    z = np.asarray(z, dtype=complex)
    return np.broadcast_to(np.asarray(f(z), dtype=complex), z.shape).copy()


@dataclass(eq=False)
class SampledPath:
    """Ordered samples of a curve. A closed path must not repeat its first
    point at the end; the closing step back to it is implied."""

    points: np.ndarray
    closed: bool = False
    t: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        if pts.size < MIN_POINTS:
            raise PreconditionError(f"a path needs at least {MIN_POINTS} points, got {pts.size}")
        self.points = pts
        if self.t is not None:
            self.t = np.asarray(self.t, dtype=float).ravel()
            if self.t.size != pts.size:
                raise ValueError("parameter and point counts differ")

    def __len__(self):
        return self.points.size

    def map(self, f) -> "SampledPath":
        """The path of values ``f(points)``."""
        return SampledPath(evaluate(f, self.points), self.closed, self.t)

    def reversed(self) -> "SampledPath":
        t = None if self.t is None else self.t[::-1]
        return SampledPath(self.points[::-1], self.closed, t)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,re,im\n")
        t = self.t if self.t is not None else [None] * len(self)
        for tk, z in zip(t, self.points):
            buf.write(f"{'' if tk is None else repr(float(tk))},{float(z.real)!r},{float(z.imag)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, closed: bool = False) -> "SampledPath":
        rows = [r.split(",") for r in text.strip().splitlines()[1:]]
        pts = np.array([complex(float(r[1]), float(r[2])) for r in rows])
        ts = [r[0] for r in rows]
        t = None if any(s == "" for s in ts) else np.array([float(s) for s in ts])
        return cls(pts, closed, t)


def circle_path(center: complex = 0, r: float = 1.0, n: int = 256, turns: int = 1) -> SampledPath:
    theta = 2 * math.pi * turns * np.arange(n * turns) / (n * turns)
    return SampledPath(center + r * np.exp(1j * theta), closed=True)


@dataclass(eq=False)
class ArgTrack:
    """Unwrapped argument per sample. For a closed path ``theta`` has one
    extra entry: the value after the closing step."""

    theta: np.ndarray
    closed: bool = False
    t: np.ndarray | None = None

    @property
    def total(self) -> float:
        return float(self.theta[-1] - self.theta[0])


def unwrap_phase(values, max_step: float = MAX_STEP) -> ArgTrack:
    """Continuous lift of ``arg(values)`` starting on the principal branch."""
    path = values if isinstance(values, SampledPath) else SampledPath(values)
    v = path.points
    if not np.all(np.isfinite(v)):
        raise ZeroOnPath("path has non-finite values")
    if np.any(v == 0):
        raise ZeroOnPath(f"path passes through 0 at sample {int(np.flatnonzero(v == 0)[0])}")
    seq = np.concatenate([v, v[:1]]) if path.closed else v
    step = np.angle(seq[1:] / seq[:-1])
    bad = np.abs(step) >= max_step * (1 - 1e-12)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise StepTooLarge(f"argument jumps by {step[k]:.3f} between samples {k} and {k + 1}")
    theta = np.angle(v[0]) + np.concatenate([[0.0], np.cumsum(step)])
    return ArgTrack(theta, path.closed, path.t)


def winding_residue(path: SampledPath, a: complex = 0) -> float:
    """Total argument change of ``path - a`` divided by 2 pi (not rounded)."""
    if not path.closed:
        raise PreconditionError("winding numbers need a closed path")
    return unwrap_phase(SampledPath(path.points - a, closed=True)).total / (2 * math.pi)


def winding_number(path: SampledPath, a: complex = 0, clearance: float = 0.0,
                   tol: float = INTEGER_TOL) -> int:
    """Winding number of a closed sampled path around ``a``.

    ``clearance`` is the minimum admissible distance from ``a`` to the
    samples (2h for grid-derived paths).
    """
    d = np.abs(path.points - a).min()
    if d <= clearance:
        raise PointOnPath(f"point lies within {clearance:g} of the path (distance {d:.3g})")
    w = winding_residue(path, a)
    n = round(w)
    if abs(w - n) >= tol:
        raise NonIntegerWinding(f"winding {w:.4f} is not within {tol} of an integer")
    return int(n)


def continuous_log(values) -> np.ndarray:
    """Samples ``L_k = log|v_k| + i*theta_k`` of a continuous logarithm."""
    path = values if isinstance(values, SampledPath) else SampledPath(values)
    track = unwrap_phase(path)
    if path.closed:
        w = track.total / (2 * math.pi)
        if abs(w) >= 0.5:
            raise ObstructedLog(f"closed path winds {round(w)} times around 0")
        theta = track.theta[:-1]
    else:
        theta = track.theta
    return np.log(np.abs(path.points)) + 1j * theta


def spiral_path(kind: str, t_max: float, step: float = 0.01) -> SampledPath:
    n = int(math.ceil(t_max / step)) + 1
    t = np.linspace(0.0, t_max, n)
    return SampledPath(spiral_point(kind, t), closed=False, t=t)


def arg_growth(kind: str, t_max: float, step: float = 0.01) -> ArgTrack:
    """Unwrapped argument of the exact spiral ``z(t)``, ``0 <= t <= t_max``."""
    if not t_max > 2 * math.pi:
        raise PreconditionError("t_max must exceed 2 pi")
    if not 0 < step <= 0.01:
        raise PreconditionError("sampling step must be in (0, 0.01]")
    return unwrap_phase(spiral_path(kind, t_max, step))
