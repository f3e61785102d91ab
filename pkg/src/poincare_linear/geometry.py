"""Poincare ball primitives (curvature -1).

Every function accepts single points of shape ``(d,)`` or batches of shape
``(n, d)`` and broadcasts over the leading axis.  Tangent vectors are plain
arrays; the base point is always passed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# largest admissible norm / atanh argument
BOUNDARY = 1.0 - 1e-15


class DomainError(ValueError):
    """A point lies on or outside the unit sphere."""


def _as_points(x, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise ValueError(f"{name} must have at least one dimension")
    sq = np.einsum("...i,...i->...", x, x)
    if np.any(~np.isfinite(sq)) or np.any(sq >= 1.0):
        raise DomainError(f"{name} must lie strictly inside the unit ball")
    return x


def _check_dims(*arrays):
    d = arrays[0].shape[-1]
    for a in arrays[1:]:
        if a.shape[-1] != d:
            raise ValueError(f"dimension mismatch: {d} vs {a.shape[-1]}")


def _dot(x, y):
    return np.einsum("...i,...i->...", x, y)


def _norm(x):
    return np.sqrt(_dot(x, x))


def _artanh(r):
    return np.arctanh(np.clip(r, 0.0, BOUNDARY))


def _project(x):
    """Pull round-off excursions back inside the ball."""
    n = _norm(x)
    scale = np.where(n > BOUNDARY, BOUNDARY / np.where(n > 0, n, 1.0), 1.0)
    return x * scale[..., None]


def conformal_factor(p):
    """sigma_p = 2 / (1 - |p|^2)."""
    p = np.asarray(p, dtype=float)
    return 2.0 / (1.0 - _dot(p, p))


def _mobius_add(x, y):
    xy = _dot(x, y)[..., None]
    x2 = _dot(x, x)[..., None]
    y2 = _dot(y, y)[..., None]
    num = (1.0 + 2.0 * xy + y2) * x + (1.0 - x2) * y
    den = 1.0 + 2.0 * xy + x2 * y2
    return _project(num / den)


def mobius_add(x, y):
    """Mobius (gyrovector) addition ``x (+) y``."""
    x = _as_points(x, "x")
    y = _as_points(y, "y")
    _check_dims(x, y)
    return _mobius_add(x, y)


def _mobius_scalar_mul(r, x):
    n = _norm(x)[..., None]
    safe = np.where(n > 0, n, 1.0)
    out = np.tanh(r * _artanh(n)) * x / safe
    return _project(np.where(n > 0, out, 0.0))


def mobius_scalar_mul(r, x):
    """Mobius scalar multiplication ``r (x) x``; the origin maps to itself."""
    x = _as_points(x)
    r = np.asarray(r, dtype=float)
    return _mobius_scalar_mul(r[..., None] if r.ndim else r, x)


def distance(x, y):
    """Hyperbolic distance ``2 atanh |(-x) (+) y|``."""
    x = _as_points(x, "x")
    y = _as_points(y, "y")
    _check_dims(x, y)
    same = np.all(x == y, axis=-1)
    return np.where(same, 0.0, 2.0 * _artanh(_norm(_mobius_add(-x, y))))


def geodesic_point(x, y, t):
    """Point at fraction ``t`` along the geodesic from ``x`` to ``y``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    x = _as_points(x, "x")
    y = _as_points(y, "y")
    _check_dims(x, y)
    return _mobius_add(x, _mobius_scalar_mul(t, _mobius_add(-x, y)))


def exp_map(p, v):
    p = _as_points(p, "p")
    v = np.asarray(v, dtype=float)
    _check_dims(p, v)
    n = _norm(v)[..., None]
    safe = np.where(n > 0, n, 1.0)
    step = np.tanh(conformal_factor(p)[..., None] * n / 2.0) * v / safe
    return _mobius_add(p, np.where(n > 0, _project(step), 0.0))


def log_map(p, x):
    """Tangent vector at ``p`` pointing to ``x``; zero when ``x == p``."""
    p = _as_points(p, "p")
    x = _as_points(x, "x")
    _check_dims(p, x)
    return _log_map(p, x)


def _log_map(p, x):
    u = _mobius_add(-p, x)
    n = np.where(np.all(p == x, axis=-1), 0.0, _norm(u))[..., None]
    safe = np.where(n > 0, n, 1.0)
    sigma = conformal_factor(p)[..., None]
    return np.where(n > 0, (2.0 / sigma) * _artanh(n) * u / safe, 0.0)


@dataclass(frozen=True)
class Hyperplane:
    """Poincare hyperplane through reference point ``p`` with normal ``w``."""

    p: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        p = _as_points(self.p, "p").reshape(-1)
        w = np.asarray(self.w, dtype=float).reshape(-1)
        if p.shape != w.shape:
            raise ValueError(f"dimension mismatch: p has {p.size}, w has {w.size}")
        if not np.all(np.isfinite(w)) or not np.any(w != 0):
            raise ValueError("hyperplane normal must be finite and nonzero")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "w", w)

    @property
    def dim(self):
        return self.p.size

    @property
    def sigma(self):
        return float(conformal_factor(self.p))


def dist_to_hyperplane(x, h: Hyperplane):
    """Closed-form distance from ``x`` to ``h`` using the Mobius difference."""
    x = _as_points(x)
    _check_dims(x, h.p)
    u = _mobius_add(-h.p, x)
    num = 2.0 * np.abs(_dot(u, h.w))
    den = (1.0 - _dot(u, u)) * np.linalg.norm(h.w)
    return np.arcsinh(num / den)


def dist_to_hyperplane_tangent(v, h: Hyperplane):
    """Same distance as :func:`dist_to_hyperplane`, from ``v = log_p(x)``."""
    v = np.asarray(v, dtype=float)
    _check_dims(v, h.p)
    n = _norm(v)
    th = np.tanh(h.sigma * n / 2.0)
    num = 2.0 * th * np.abs(_dot(v, h.w))
    den = (1.0 - th**2) * np.linalg.norm(h.w) * np.where(n > 0, n, 1.0)
    return np.where(n > 0, np.arcsinh(num / den), 0.0)


def eta_weight(v, p):
    """Per-point weight turning ``|<v, w>|`` (unit w) into ``sinh`` of the
    hyperplane distance.  Zero for the zero vector."""
    v = np.asarray(v, dtype=float)
    n = _norm(v)
    th = np.tanh(conformal_factor(p) * n / 2.0)
    return np.where(n > 0, 2.0 * th / ((1.0 - th**2) * np.where(n > 0, n, 1.0)), 0.0)


def hyperplane_side(x, h: Hyperplane):
    x = _as_points(x)
    _check_dims(x, h.p)
    return np.sign(_dot(_log_map(h.p, x), h.w)).astype(int)
