#!/usr/bin/env python3
"""Generate unit-circle Delaunay meshes in .node/.ele format.

Vertices are laid out on concentric rings (plus the center), each ring
rotated by an incommensurate offset so the point set has no exact
symmetries that could produce degenerate cocircular quadruples.  Ring
counts are trimmed so the Delaunay triangulation hits the requested
triangle count exactly: for V points with H on the convex hull the
triangulation has 2V - H - 2 triangles.
"""

import argparse
import math
import os

import numpy as np
from scipy.spatial import Delaunay

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def ring_counts(rings, target):
    outer = 6 * rings
    interior_sum = (target - outer) // 2
    assert 2 * interior_sum + outer == target, "target has wrong parity"
    counts = [6 * k for k in range(1, rings)]
    excess = sum(counts) - interior_sum
    assert excess >= 0, "target too large for this ring count"
    while excess > 0:
        for k in range(rings - 1, 1, -1):
            if excess > 0 and counts[k - 1] > 3 * k:
                counts[k - 1] -= 1
                excess -= 1
    return counts, outer


def build_points(rings, target):
    counts, outer = ring_counts(rings, target)
    pts = [(0.0, 0.0)]
    for k, n in enumerate(counts + [outer], start=1):
        r = k / rings
        phase = k * GOLDEN_ANGLE
        for i in range(n):
            a = phase + 2.0 * math.pi * i / n
            pts.append((r * math.cos(a), r * math.sin(a)))
    return np.asarray(pts), outer


def min_angle_deg(p, tris):
    worst = 180.0
    for t in tris:
        v = p[t]
        for i in range(3):
            a, b, c = v[i], v[(i + 1) % 3], v[(i + 2) % 3]
            u, w = b - a, c - a
            cosang = np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w))
            worst = min(worst, math.degrees(math.acos(np.clip(cosang, -1, 1))))
    return worst


def generate(rings, target, base):
    pts, outer = build_points(rings, target)
    tri = Delaunay(pts)
    assert len(tri.coplanar) == 0, "qhull dropped points"
    simplices = tri.simplices
    assert len(simplices) == target, f"got {len(simplices)} triangles"
    assert len(set(simplices.ravel().tolist())) == len(pts), "unused points"

    hull = set(tri.convex_hull.ravel().tolist())
    assert len(hull) == outer
    for v in hull:
        assert abs(np.hypot(*pts[v]) - 1.0) < 1e-14, "hull vertex off the circle"

    # orient counterclockwise
    tris = []
    for a, b, c in simplices:
        u, w = pts[b] - pts[a], pts[c] - pts[a]
        if u[0] * w[1] - u[1] * w[0] < 0:
            b, c = c, b
        tris.append((a, b, c))

    h = 0.0
    for a, b, c in tris:
        for u, v in ((a, b), (b, c), (c, a)):
            h = max(h, float(np.linalg.norm(pts[u] - pts[v])))
    alpha = min_angle_deg(pts, np.asarray(tris))

    with open(base + ".node", "w") as f:
        f.write(f"# unit-circle mesh, {len(pts)} vertices"
                f" ({outer} on the boundary)\n")
        f.write(f"{len(pts)} 2 0 0\n")
        for i, (x, y) in enumerate(pts, start=1):
            f.write(f"{i} {float(x)!r} {float(y)!r}\n")
    with open(base + ".ele", "w") as f:
        f.write(f"# unit-circle mesh, {len(tris)} triangles,"
                f" h = {h:.4f}, min angle = {alpha:.1f} deg\n")
        f.write(f"{len(tris)} 3 0\n")
        for i, (a, b, c) in enumerate(tris, start=1):
            f.write(f"{i} {a + 1} {b + 1} {c + 1}\n")
    print(f"{base}: {len(pts)} vertices, {len(tris)} triangles, "
          f"h = {h:.4f}, min angle = {alpha:.1f} deg")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="data")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    generate(12, 824, os.path.join(args.outdir, "circle824"))
    generate(6, 216, os.path.join(args.outdir, "circle216"))


if __name__ == "__main__":
    main()
