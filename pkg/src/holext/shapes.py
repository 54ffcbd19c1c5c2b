"""Shape DSL for planar compacta.

A shape is a small tree of primitives. Curves (circle, segment, spiral) are
one-dimensional sets, which a grid cannot represent, so every curve carries a
``band`` width and is rasterized as the closed ``band/2`` neighbourhood of the
curve. The exact curve is still available through :meth:`Shape.samples`, and
``exact_thin`` records whether the exact set has empty interior.

JSON form (one object per node)::

    {"type": "disk",    "center": [re, im], "r": 1.0}
    {"type": "circle",  "center": [re, im], "r": 1.0, "band": 0.05}
    {"type": "annulus", "center": [re, im], "r_in": 1.0, "r_out": 2.0}
    {"type": "segment", "a": [re, im], "b": [re, im], "band": 0.05}
    {"type": "spiral",  "kind": "clustering" | "accessible",
                        "t_max": 125.0, "band": 0.05}
    {"type": "union",   "children": [...]}
    {"type": "translate", "offset": [re, im], "child": {...}}
    {"type": "scale",   "factor": 2.0 or [re, im], "child": {...}}

Complex values may be written as a number, a ``[re, im]`` pair or a string
such as ``"1-2j"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptySpec, ParseError

SPIRAL_KINDS = ("clustering", "accessible")


def spiral_point(kind: str, t):
    """Exact parametrization of the two spirals.

    ``clustering`` winds around the disk ``|z+1| <= 1`` and accumulates on its
    boundary circle; ``accessible`` winds into the origin.
    """
    t = np.asarray(t, dtype=float)
    if kind == "clustering":
        return -1.0 + (1.0 + 1.0 / (1.0 + t)) * np.exp(1j * t)
    if kind == "accessible":
        return np.exp(1j * t) / (1.0 + t)
    raise ValueError(f"unknown spiral kind {kind!r}")


def _circle_points(center: complex, r: float, spacing: float) -> np.ndarray:
    n = max(16, int(math.ceil(2 * math.pi * r / spacing)))
    theta = 2 * math.pi * np.arange(n) / n
    return center + r * np.exp(1j * theta)


def _lattice(xmin, xmax, ymin, ymax, spacing) -> np.ndarray:
    xs = np.arange(math.floor(xmin / spacing), math.ceil(xmax / spacing) + 1) * spacing
    ys = np.arange(math.floor(ymin / spacing), math.ceil(ymax / spacing) + 1) * spacing
    X, Y = np.meshgrid(xs, ys)
    return (X + 1j * Y).ravel()


class Shape:
    """Base class. Subclasses are frozen dataclasses."""

    exact_thin = False

    def distance(self, z: np.ndarray) -> np.ndarray:
        """Euclidean distance from each point to the (banded) set."""
        raise NotImplementedError

    def bbox(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax) of the banded set."""
        raise NotImplementedError

    def features(self) -> list[float]:
        """Widths and radii that must be resolved by the grid."""
        raise NotImplementedError

    def samples(self, spacing: float) -> np.ndarray:
        """Points of the exact (unbanded) set, at most ``spacing`` apart."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def contains(self, z, tol: float = 0.0) -> np.ndarray:
        return self.distance(np.asarray(z, dtype=complex)) <= tol


def _cjson(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


@dataclass(frozen=True)
class Disk(Shape):
    center: complex
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("disk radius must be > 0")

    def distance(self, z):
        return np.maximum(np.abs(z - self.center) - self.r, 0.0)

    def bbox(self):
        c = complex(self.center)
        return (c.real - self.r, c.real + self.r, c.imag - self.r, c.imag + self.r)

    def features(self):
        return [self.r]

    def samples(self, spacing):
        c = complex(self.center)
        pts = _lattice(*self.bbox(), spacing)
        pts = pts[np.abs(pts - c) < self.r]
        return np.concatenate([pts, _circle_points(c, self.r, spacing)])

    def to_dict(self):
        return {"type": "disk", "center": _cjson(self.center), "r": self.r}


@dataclass(frozen=True)
class Circle(Shape):
    center: complex
    r: float
    band: float

    exact_thin = True

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("circle radius must be > 0")
        if not self.band > 0:
            raise ValueError("circle band must be > 0")

    def distance(self, z):
        return np.maximum(np.abs(np.abs(z - self.center) - self.r) - self.band / 2, 0.0)

    def bbox(self):
        c = complex(self.center)
        R = self.r + self.band / 2
        return (c.real - R, c.real + R, c.imag - R, c.imag + R)

    def features(self):
        return [self.r, self.band]

    def samples(self, spacing):
        return _circle_points(complex(self.center), self.r, spacing)

    def to_dict(self):
        return {"type": "circle", "center": _cjson(self.center), "r": self.r,
                "band": self.band}


@dataclass(frozen=True)
class Annulus(Shape):
    center: complex
    r_in: float
    r_out: float

    def __post_init__(self):
        if not (self.r_in > 0 and self.r_out > self.r_in):
            raise ValueError("annulus needs 0 < r_in < r_out")

    def distance(self, z):
        rho = np.abs(z - self.center)
        return np.maximum(np.maximum(rho - self.r_out, self.r_in - rho), 0.0)

    def bbox(self):
        c = complex(self.center)
        R = self.r_out
        return (c.real - R, c.real + R, c.imag - R, c.imag + R)

    def features(self):
        return [self.r_in, self.r_out - self.r_in]

    def samples(self, spacing):
        c = complex(self.center)
        pts = _lattice(*self.bbox(), spacing)
        rho = np.abs(pts - c)
        pts = pts[(rho > self.r_in) & (rho < self.r_out)]
        return np.concatenate([pts, _circle_points(c, self.r_in, spacing),
                               _circle_points(c, self.r_out, spacing)])

    def to_dict(self):
        return {"type": "annulus", "center": _cjson(self.center),
                "r_in": self.r_in, "r_out": self.r_out}


@dataclass(frozen=True)
class Segment(Shape):
    a: complex
    b: complex
    band: float

    exact_thin = True

    def __post_init__(self):
        if not self.band > 0:
            raise ValueError("segment band must be > 0")

    def distance(self, z):
        a, b = complex(self.a), complex(self.b)
        d = b - a
        if d == 0:
            return np.maximum(np.abs(z - a) - self.band / 2, 0.0)
        s = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
        return np.maximum(np.abs(z - (a + s * d)) - self.band / 2, 0.0)

    def bbox(self):
        a, b = complex(self.a), complex(self.b)
        w = self.band / 2
        return (min(a.real, b.real) - w, max(a.real, b.real) + w,
                min(a.imag, b.imag) - w, max(a.imag, b.imag) + w)

    def features(self):
        return [self.band]

    def samples(self, spacing):
        a, b = complex(self.a), complex(self.b)
        n = max(2, int(math.ceil(abs(b - a) / spacing)) + 1)
        return a + (b - a) * np.linspace(0.0, 1.0, n)

    def to_dict(self):
        return {"type": "segment", "a": _cjson(self.a), "b": _cjson(self.b),
                "band": self.band}


@dataclass(frozen=True)
class Spiral(Shape):
    kind: str
    t_max: float
    band: float

    exact_thin = True

    def __post_init__(self):
        if self.kind not in SPIRAL_KINDS:
            raise ValueError(f"spiral kind must be one of {SPIRAL_KINDS}")
        if not self.t_max > 0:
            raise ValueError("spiral t_max must be > 0")
        if not self.band > 0:
            raise ValueError("spiral band must be > 0")

    def _curve(self, spacing):
        # |z'(t)| <= 2 for both kinds, so dt = spacing / 2 keeps samples close.
        n = int(math.ceil(self.t_max / (spacing / 2))) + 1
        return spiral_point(self.kind, np.linspace(0.0, self.t_max, n))

    @cached_property
    def _fine(self):
        pts = self._curve(self.band / 16)
        return pts, cKDTree(np.column_stack([pts.real, pts.imag]))

    def distance(self, z):
        _, tree = self._fine
        z = np.asarray(z, dtype=complex)
        d, _ = tree.query(np.column_stack([z.real.ravel(), z.imag.ravel()]))
        return np.maximum(d.reshape(z.shape) - self.band / 2, 0.0)

    def bbox(self):
        pts, _ = self._fine
        w = self.band / 2
        return (pts.real.min() - w, pts.real.max() + w,
                pts.imag.min() - w, pts.imag.max() + w)

    def features(self):
        return [self.band]

    def samples(self, spacing):
        return self._curve(spacing)

    def to_dict(self):
        return {"type": "spiral", "kind": self.kind, "t_max": self.t_max,
                "band": self.band}


@dataclass(frozen=True)
class Union(Shape):
    children: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.children:
            raise EmptySpec("union has no children")

    @property
    def exact_thin(self):
        return all(c.exact_thin for c in self.children)

    def distance(self, z):
        out = self.children[0].distance(z)
        for c in self.children[1:]:
            out = np.minimum(out, c.distance(z))
        return out

    def bbox(self):
        boxes = np.array([c.bbox() for c in self.children])
        return (boxes[:, 0].min(), boxes[:, 1].max(), boxes[:, 2].min(), boxes[:, 3].max())

    def features(self):
        return [f for c in self.children for f in c.features()]

    def samples(self, spacing):
        return np.concatenate([c.samples(spacing) for c in self.children])

    def to_dict(self):
        return {"type": "union", "children": [c.to_dict() for c in self.children]}


@dataclass(frozen=True)
class Translate(Shape):
    child: Shape
    offset: complex

    @property
    def exact_thin(self):
        return self.child.exact_thin

    def distance(self, z):
        return self.child.distance(z - self.offset)

    def bbox(self):
        x0, x1, y0, y1 = self.child.bbox()
        o = complex(self.offset)
        return (x0 + o.real, x1 + o.real, y0 + o.imag, y1 + o.imag)

    def features(self):
        return self.child.features()

    def samples(self, spacing):
        return self.child.samples(spacing) + self.offset

    def to_dict(self):
        return {"type": "translate", "offset": _cjson(self.offset),
                "child": self.child.to_dict()}


@dataclass(frozen=True)
class Scale(Shape):
    """Multiplication by a nonzero complex factor (rotation + dilation)."""

    child: Shape
    factor: complex

    def __post_init__(self):
        if self.factor == 0:
            raise ValueError("scale factor must be nonzero")

    @property
    def exact_thin(self):
        return self.child.exact_thin

    def distance(self, z):
        s = complex(self.factor)
        return abs(s) * self.child.distance(z / s)

    def bbox(self):
        x0, x1, y0, y1 = self.child.bbox()
        s = complex(self.factor)
        if s.imag == 0:
            c = np.array([x0 + 1j * y0, x1 + 1j * y1]) * s
            return (c.real.min(), c.real.max(), c.imag.min(), c.imag.max())
        # rotated: use the box of the image of the circumscribed disk
        mid = s * complex((x0 + x1) / 2, (y0 + y1) / 2)
        rad = abs(s) * math.hypot(x1 - x0, y1 - y0) / 2
        return (mid.real - rad, mid.real + rad, mid.imag - rad, mid.imag + rad)

    def features(self):
        return [abs(complex(self.factor)) * f for f in self.child.features()]

    def samples(self, spacing):
        s = complex(self.factor)
        return s * self.child.samples(spacing / abs(s))

    def to_dict(self):
        return {"type": "scale", "factor": _cjson(self.factor),
                "child": self.child.to_dict()}


# -- parsing ----------------------------------------------------------------

def _complex(value, path):
    if isinstance(value, bool):
        raise ParseError("expected a complex number", path=path)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise ParseError(f"expected a complex number, got {value!r}", path=path)


def _real(node, key, path):
    if key not in node:
        raise ParseError(f"missing field {key!r}", path=path)
    v = node[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"field {key!r} must be a number", path=f"{path}.{key}")
    return float(v)


_FIELDS = {
    "disk": {"type", "center", "r"},
    "circle": {"type", "center", "r", "band"},
    "annulus": {"type", "center", "r_in", "r_out"},
    "segment": {"type", "a", "b", "band"},
    "spiral": {"type", "kind", "t_max", "band"},
    "union": {"type", "children"},
    "translate": {"type", "offset", "child"},
    "scale": {"type", "factor", "child"},
}


def shape_from_dict(node, path: str = "$") -> Shape:
    """Build a shape tree from its JSON-style dict form."""
    if not isinstance(node, dict):
        raise ParseError("shape node must be an object", path=path)
    kind = node.get("type")
    if kind not in _FIELDS:
        raise ParseError(f"unknown shape type {kind!r}", path=path)
    extra = set(node) - _FIELDS[kind]
    if extra:
        raise ParseError(f"unexpected fields {sorted(extra)}", path=path)

    try:
        if kind == "disk":
            return Disk(_complex(node.get("center", 0), f"{path}.center"),
                        _real(node, "r", path))
        if kind == "circle":
            return Circle(_complex(node.get("center", 0), f"{path}.center"),
                          _real(node, "r", path), _real(node, "band", path))
        if kind == "annulus":
            return Annulus(_complex(node.get("center", 0), f"{path}.center"),
                           _real(node, "r_in", path), _real(node, "r_out", path))
        if kind == "segment":
            for key in ("a", "b"):
                if key not in node:
                    raise ParseError(f"missing field {key!r}", path=path)
            return Segment(_complex(node["a"], f"{path}.a"),
                           _complex(node["b"], f"{path}.b"),
                           _real(node, "band", path))
        if kind == "spiral":
            return Spiral(node.get("kind"), _real(node, "t_max", path),
                          _real(node, "band", path))
        if kind == "union":
            children = node.get("children")
            if not isinstance(children, list):
                raise ParseError("union needs a list of children", path=path)
            if not children:
                raise EmptySpec(f"union has no children (at {path})")
            return Union(tuple(shape_from_dict(c, f"{path}.children[{i}]")
                               for i, c in enumerate(children)))
        if kind == "translate":
            if "child" not in node:
                raise ParseError("missing field 'child'", path=path)
            return Translate(shape_from_dict(node["child"], f"{path}.child"),
                             _complex(node.get("offset", 0), f"{path}.offset"))
        if kind == "scale":
            if "child" not in node:
                raise ParseError("missing field 'child'", path=path)
            return Scale(shape_from_dict(node["child"], f"{path}.child"),
                         _complex(node.get("factor", 1), f"{path}.factor"))
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from None
    raise AssertionError(kind)


def parse_shape(text: str) -> Shape:
    """Parse shape JSON text; syntax errors carry line and column."""
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno,
                         column=exc.colno) from None
    if node is None or node == {}:
        raise EmptySpec("empty shape specification")
    return shape_from_dict(node)


# Named sets used throughout the gallery and tests.

def tangent_circles(band: float) -> Shape:
    """``|z+1| = 1`` union ``|z-2| = 2``; the circles touch at 0."""
    return Union((Circle(-1, 1.0, band), Circle(2, 2.0, band)))


def disk_and_circle(band: float) -> Shape:
    """``|z+1| <= 1`` union ``|z-2| = 2``."""
    return Union((Disk(-1, 1.0), Circle(2, 2.0, band)))


def annulus_with_inner_circle(band: float) -> Shape:
    """``1 <= |z| <= 2`` union ``|z| = 1/2``: one regular, one non-regular hole."""
    return Union((Annulus(0, 1.0, 2.0), Circle(0, 0.5, band)))
