"""Iso-level polyline extraction on a rectilinear grid (marching squares)."""

from __future__ import annotations

import numpy as np


def _interp(p1, p2, v1, v2, level):
    s = (level - v1) / (v2 - v1)
    return (p1[0] + s * (p2[0] - p1[0]), p1[1] + s * (p2[1] - p1[1]))


def _cell_segments(x0, x1, y0, y1, z00, z10, z01, z11, level):
    """Zero to two crossing segments of one grid cell."""
    corners = [
        ((x0, y0), z00), ((x1, y0), z10), ((x1, y1), z11), ((x0, y1), z01),
    ]
    crossings = []
    for e in range(4):
        (p1, v1), (p2, v2) = corners[e], corners[(e + 1) % 4]
        if (v1 - level) * (v2 - level) < 0.0:
            crossings.append((e, _interp(p1, p2, v1, v2, level)))
    if len(crossings) == 2:
        return [(crossings[0][1], crossings[1][1])]
    if len(crossings) == 4:
        center = 0.25 * (z00 + z10 + z01 + z11)
        pts = [c[1] for c in crossings]
        if (center - level) * (z00 - level) >= 0.0:
            return [(pts[0], pts[3]), (pts[1], pts[2])]
        return [(pts[0], pts[1]), (pts[2], pts[3])]
    return []


def _chain(segments, decimals=12):
    """Join segments sharing endpoints into polylines (greedy, deterministic)."""
    key = lambda p: (round(p[0], decimals), round(p[1], decimals))
    seg_ends = {}
    for idx, (a, b) in enumerate(segments):
        seg_ends.setdefault(key(a), []).append((idx, 0))
        seg_ends.setdefault(key(b), []).append((idx, 1))
    used = [False] * len(segments)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        a, b = segments[start]
        line = [a, b]
        for head in (1, 0):
            while True:
                k = key(line[-1 if head else 0])
                nxt = next(((i, e) for i, e in seg_ends.get(k, []) if not used[i]), None)
                if nxt is None:
                    break
                i, e = nxt
                used[i] = True
                p = segments[i][1 - e]
                if head:
                    line.append(p)
                else:
                    line.insert(0, p)
        polylines.append(line)
    return polylines


def iso_contours(x: np.ndarray, y: np.ndarray, Z: np.ndarray, level: float):
    """Polylines where the node-sampled surface Z crosses `level`.

    x, y are the grid coordinate vectors and Z ((len(x), len(y))) the values;
    returns a list of point lists.  Nodes exactly on the level are nudged by
    a relative epsilon so every crossing is transversal.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (len(x), len(y)):
        raise ValueError(f"Z shape {Z.shape} does not match grid {(len(x), len(y))}")
    scale = np.abs(Z).max() or 1.0
    Zs = np.where(Z == level, Z + 1e-14 * scale, Z)
    segments = []
    for i in range(len(x) - 1):
        for k in range(len(y) - 1):
            segments.extend(_cell_segments(
                x[i], x[i + 1], y[k], y[k + 1],
                Zs[i, k], Zs[i + 1, k], Zs[i, k + 1], Zs[i + 1, k + 1], level,
            ))
    return _chain(segments)


def level_bands(values: np.ndarray, n_levels: int = 10) -> np.ndarray:
    """Evenly spaced interior levels between min and max of the field."""
    lo, hi = float(np.min(values)), float(np.max(values))
    return lo + (hi - lo) * (np.arange(1, n_levels + 1)) / (n_levels + 1)
