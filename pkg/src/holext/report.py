"""JSON reports and SVG diagnostics.

Reports are serialized with sorted keys and ``repr``-exact floats so that
identical inputs and flags give byte-identical files. Wall-clock timings
break that, so they are only included on request.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


def jsonable(x):
    """Convert numpy scalars/arrays, complex numbers and non-finite floats."""
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(x.real), jsonable(x.imag)]
    return x


def input_digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return "sha256:" + h.hexdigest()


@dataclass
class Report:
    command: str
    digest: str
    h: float | None
    tolerances: dict
    results: dict
    falsification_events: list[str] = field(default_factory=list)
    timings: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input_digest": self.digest,
            "resolution": self.h,
            "tolerances": self.tolerances,
            "results": self.results,
            "falsification_events": list(self.falsification_events),
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def dumps(self) -> str:
        return json.dumps(jsonable(self.to_dict()), indent=2, sort_keys=True) + "\n"


# -- SVG ----------------------------------------------------------------------

@dataclass
class Svg:
    """Accumulates polylines and markers in data coordinates (y up)."""

    polylines: list = field(default_factory=list)
    markers: list = field(default_factory=list)

    def polyline(self, points, color: str, closed: bool = True, width: float = 1.0):
        self.polylines.append((np.asarray(points, dtype=complex), color, closed, width))

    def marker(self, z: complex, color: str, label: str = ""):
        self.markers.append((complex(z), color, label))

    def render(self, size: int = 600) -> str:
        pts = [p for p, *_ in self.polylines] + [np.array([m[0] for m in self.markers])]
        allp = np.concatenate([p for p in pts if p.size]) if any(p.size for p in pts) else np.zeros(1)
        x0, x1, y0, y1 = allp.real.min(), allp.real.max(), allp.imag.min(), allp.imag.max()
        span = max(x1 - x0, y1 - y0, 1e-9) * 1.1
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        s = size / span

        def xy(z):
            return f"{(z.real - cx) * s + size / 2:.2f},{size / 2 - (z.imag - cy) * s:.2f}"

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
               f'viewBox="0 0 {size} {size}">', f'<rect width="{size}" height="{size}" fill="white"/>']
        for p, color, closed, width in self.polylines:
            d = "M" + " L".join(xy(z) for z in p) + (" Z" if closed else "")
            out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="{width}"/>')
        for z, color, label in self.markers:
            out.append(f'<circle cx="{xy(z).split(",")[0]}" cy="{xy(z).split(",")[1]}" r="3" fill="{color}"/>')
            if label:
                x, y = xy(z).split(",")
                out.append(f'<text x="{float(x) + 4:.2f}" y="{float(y) - 4:.2f}" font-size="10">{label}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
