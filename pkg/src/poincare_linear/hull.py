"""Geodesic convex hulls in the Poincare disk and reference-point learning.

Extreme points (the Graham anchor, the Quickhull end points) are selected in
Klein coordinates ``2x / (1 + |x|^2)``, where geodesics are straight chords;
a coordinate extremum there is always a hull vertex, which is not true of
raw Poincare coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import LabeledDataset, require_binary
from .geometry import (
    Hyperplane,
    _as_points,
    _log_map,
    _mobius_add,
    _mobius_scalar_mul,
    _norm,
    dist_to_hyperplane,
    distance,
    geodesic_point,
)

PAIR_CAP = 2000
_ROW_BLOCK = 256
_GOLDEN_STEPS = 80
_POLISH_STEPS = 20


@dataclass(frozen=True, eq=False)
class ConvexHull2D:
    """Hull vertices in counterclockwise order."""

    vertices: np.ndarray

    def __len__(self):
        return len(self.vertices)

    def vertex_set(self):
        return {tuple(v) for v in self.vertices.tolist()}


@dataclass(frozen=True)
class MinDistPair:
    a: np.ndarray
    b: np.ndarray
    dist: float
    index: tuple = (0, 0)


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def orientation(a, b, x):
    """Cross product of ``log_a(b)`` and ``log_a(x)``; positive when ``x`` is
    to the left of the directed geodesic ``a -> b``."""
    a = np.asarray(a, dtype=float)
    return _cross(_log_map(a, np.asarray(b, dtype=float)), _log_map(a, np.asarray(x, dtype=float)))


def klein(x):
    x = np.asarray(x, dtype=float)
    return 2.0 * x / (1.0 + np.sum(x * x, axis=-1, keepdims=True))


def _from_klein(k):
    return k / (1.0 + np.sqrt(1.0 - np.sum(k * k, axis=-1, keepdims=True)))


def _prepare(points):
    pts = _as_points(points, "points")
    pts = pts.reshape(-1, pts.shape[-1]) if pts.ndim == 1 else pts
    if pts.shape[1] != 2:
        raise ValueError(f"convex hulls are only supported for d = 2, got d = {pts.shape[1]}")
    if len(pts) == 0:
        raise ValueError("need at least one point")
    _, first = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(first)]


def graham_scan(points) -> ConvexHull2D:
    pts = _prepare(points)
    if len(pts) < 3:
        return ConvexHull2D(pts)
    k = klein(pts)
    i0 = np.lexsort((k[:, 0], k[:, 1]))[0]
    p0 = pts[i0]
    rest = np.delete(pts, i0, axis=0)

    # direction of the supporting geodesic through p0 (horizontal in Klein)
    k0 = k[i0]
    step = 1e-3 * (1.0 - np.linalg.norm(k0))
    ref = _log_map(p0, _from_klein(k0 + np.array([step, 0.0])))
    v = _log_map(p0, rest)
    angle = np.arctan2(_cross(ref, v), v @ ref)
    order = np.lexsort((np.linalg.norm(v, axis=1), angle))

    stack = [p0]
    for x in list(rest[order]) + [p0]:
        while len(stack) > 1 and orientation(stack[-2], stack[-1], x) < 0:
            stack.pop()
        stack.append(x)
    return ConvexHull2D(np.array(stack[:-1]))


def _chord_hyperplane(P, Q):
    m = geodesic_point(P, Q, 0.5)
    v = _log_map(m, Q)
    return Hyperplane(m, np.array([-v[1], v[0]]))


def _find_hull(S, P, Q):
    """Ordered hull chain strictly between P and Q for points right of P -> Q."""
    if len(S) == 0:
        return []
    k = np.argmax(dist_to_hyperplane(S, _chord_hyperplane(P, Q)))
    F = S[k]
    S = np.delete(S, k, axis=0)
    right_pf = S[orientation(P, F, S) < 0]
    right_fq = S[orientation(F, Q, S) < 0]
    return _find_hull(right_pf, P, F) + [F] + _find_hull(right_fq, F, Q)


def quickhull(points) -> ConvexHull2D:
    pts = _prepare(points)
    if len(pts) < 3:
        return ConvexHull2D(pts)
    k = klein(pts)
    ia = np.lexsort((k[:, 1], k[:, 0]))[0]
    ib = np.lexsort((-k[:, 1], -k[:, 0]))[0]
    A, B = pts[ia], pts[ib]
    h = _chord_hyperplane(A, B)
    rest = np.delete(pts, [ia, ib], axis=0)
    side = _log_map(h.p, rest) @ h.w
    lower = _find_hull(rest[side < 0], A, B)
    upper = _find_hull(rest[side > 0], B, A)
    return ConvexHull2D(np.array([A] + lower + [B] + upper))


def hull_membership(hull: ConvexHull2D, points, tol=1e-12):
    """True for points on the inner side of (or on) every hull edge."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    V = hull.vertices
    ok = np.ones(len(pts), dtype=bool)
    if len(V) < 3:
        return ok
    for u, w in zip(V, np.roll(V, -1, axis=0)):
        ok &= orientation(u, w, pts) >= -tol
    return ok


def strip_collinear(hull: ConvexHull2D, tol=1e-12) -> ConvexHull2D:
    """Drop vertices lying on the geodesic through their neighbours."""
    V = hull.vertices
    if len(V) < 3:
        return hull
    keep = [abs(orientation(V[i - 1], V[i], V[(i + 1) % len(V)])) > tol for i in range(len(V))]
    return ConvexHull2D(V[np.array(keep)])


def pairwise_distance(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    out = np.empty((len(A), len(B)))
    for s in range(0, len(A), _ROW_BLOCK):
        out[s : s + _ROW_BLOCK] = distance(A[s : s + _ROW_BLOCK, None, :], B[None, :, :])
    return out


def min_distance_pair(plus, minus) -> MinDistPair:
    """Exhaustive closest cross pair; ties go to the smallest (i, j)."""
    plus = np.asarray(plus, dtype=float)
    minus = np.asarray(minus, dtype=float)
    if len(plus) == 0 or len(minus) == 0:
        raise ValueError("both point sets must be nonempty")
    D = pairwise_distance(plus, minus)
    i, j = np.unravel_index(np.argmin(D), D.shape)
    return MinDistPair(plus[i], minus[j], float(D[i, j]), (int(i), int(j)))


def project_to_segment(x, u, v):
    """Closest point to ``x`` on the geodesic segment ``[u, v]`` (broadcasts).

    After translating ``u`` to the origin the segment is a diameter, and in
    Klein coordinates the perpendicular to a diameter is a Euclidean
    perpendicular chord, so the foot is an orthogonal projection there.
    """
    xs = _mobius_add(-u, x)
    vs = _mobius_add(-u, v)
    kv = _norm(klein(vs))
    e = vs / np.where(_norm(vs) > 0, _norm(vs), 1.0)[..., None]
    s = np.clip(np.einsum("...i,...i->...", klein(xs), e), 0.0, kv)
    return _mobius_add(u, _from_klein(s[..., None] * e))


def _edges(V):
    return V, np.roll(V, -1, axis=0)


def hull_distance_pair(hull_plus, hull_minus) -> MinDistPair:
    """Closest pair of points on the boundaries of two hull polygons.

    Unlike :func:`min_distance_pair` this also considers edge interiors:
    two facing geodesic edges can have their closest points strictly inside
    both (along a common perpendicular).  For every edge pair the distance
    from ``gamma(t)`` on the first edge to the second edge is convex in
    ``t``, so a golden-section search finds the exact minimum.  ``index``
    holds the (edge of plus, edge of minus) pair; ties go to the smallest.
    """
    A = np.asarray(hull_plus, dtype=float).reshape(-1, 2)
    B = np.asarray(hull_minus, dtype=float).reshape(-1, 2)
    if len(A) == 0 or len(B) == 0:
        raise ValueError("both point sets must be nonempty")
    a0, a1 = _edges(A)
    b0, b1 = _edges(B)
    ia, ib = np.meshgrid(np.arange(len(A)), np.arange(len(B)), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    a0, a1, b0, b1 = a0[ia], a1[ia], b0[ib], b1[ib]
    step = _mobius_add(-a0, a1)

    def point(t):
        return _mobius_add(a0, _mobius_scalar_mul(t[:, None], step))

    def dist(t):
        x = point(t)
        return distance(x, project_to_segment(x, b0, b1))

    g = (np.sqrt(5.0) - 1.0) / 2.0
    lo, hi = np.zeros(len(ia)), np.ones(len(ia))
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = dist(c), dist(d)
    for _ in range(_GOLDEN_STEPS):
        left = fc <= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        c, d = hi - g * (hi - lo), lo + g * (hi - lo)
        fc, fd = dist(c), dist(d)
    # the minimum may sit on an endpoint, which the open search never evaluates exactly
    cand_t = np.stack([np.zeros(len(ia)), np.ones(len(ia)), (lo + hi) / 2.0])
    cand_f = np.stack([dist(t) for t in cand_t])
    pick = np.argmin(cand_f, axis=0)
    t_best = cand_t[pick, np.arange(len(ia))]
    f_best = cand_f[pick, np.arange(len(ia))]
    k = int(np.argmin(f_best))
    a = point(t_best[k : k + 1])[0]
    b = project_to_segment(a, b0[k], b1[k])
    # the value search pins t only to ~sqrt(machine eps); alternating exact
    # projections between the two edges polish the pair
    for _ in range(_POLISH_STEPS):
        a_new = project_to_segment(b, a0[k], a1[k])
        b_new = project_to_segment(a_new, b0[k], b1[k])
        if distance(a_new, b_new) > distance(a, b):
            break
        a, b = a_new, b_new
    return MinDistPair(a, b, float(distance(a, b)), (int(ia[k]), int(ib[k])))


def reference_midpoint(pair: MinDistPair):
    return geodesic_point(pair.a, pair.b, 0.5)


def learn_reference_point(ds: LabeledDataset, cap=PAIR_CAP, seed=0, search="boundary"):
    """Midpoint of the closest pair between the two classes.

    In the disk the pair is searched on the two hulls: over their whole
    boundaries (``search="boundary"``, the exact hull-to-hull distance) or
    over hull vertices only (``search="vertices"``).  In higher dimensions
    it is searched over all points, subsampled to ``cap`` per class.
    """
    if search not in ("boundary", "vertices"):
        raise ValueError(f"unknown search mode {search!r}")
    require_binary(ds)
    plus = ds.points[ds.labels == 1]
    minus = ds.points[ds.labels == -1]
    if len(plus) == 0 or len(minus) == 0:
        raise ValueError("both classes must be present")
    if ds.dim == 2:
        plus = graham_scan(plus).vertices
        minus = graham_scan(minus).vertices
        if search == "boundary":
            return reference_midpoint(hull_distance_pair(plus, minus))
    else:
        rng = np.random.default_rng(seed)
        if len(plus) > cap:
            plus = plus[np.sort(rng.choice(len(plus), cap, replace=False))]
        if len(minus) > cap:
            minus = minus[np.sort(rng.choice(len(minus), cap, replace=False))]
    return reference_midpoint(min_distance_pair(plus, minus))
