"""Poincare perceptron, second-order perceptron and their mistake bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._kernels import perceptron_epochs
from ..dataset import LabeledDataset, require_binary
from ..geometry import Hyperplane, _as_points, eta_weight, log_map

_CHUNK = 512
_RANK_RTOL = 1e-12
_SPAN_RTOL = 1e-9


class BoundNotComputable(ValueError):
    """The second-order bound diverges for a zero ridge parameter."""


@dataclass(eq=False)
class PerceptronModel:
    p: np.ndarray
    w: np.ndarray
    updates: int
    converged: bool
    epochs: int = 0

    @property
    def hyperplane(self):
        return Hyperplane(self.p, self.w)


@dataclass(eq=False)
class SecondOrderState:
    """``mistake_columns`` is d x k; column j is the scaled tangent vector of
    the j-th mistake."""

    xi: np.ndarray
    mistake_columns: np.ndarray
    a: float

    @property
    def mistakes(self):
        return self.mistake_columns.shape[1]


def scaled_tangent(points, p):
    """Rows ``z_i = eta_i * log_p(x_i)``."""
    v = log_map(p, points)
    return eta_weight(v, p)[:, None] * v


def perceptron_train(ds: LabeledDataset, p, max_epochs=1000) -> PerceptronModel:
    """Mistake-driven updates ``w += eta * y * log_p(x)`` from ``w = 0``.

    Data are visited in index order; training stops after the first pass
    without mistakes or after ``max_epochs`` passes.
    """
    require_binary(ds)
    p = _as_points(p, "p").reshape(-1)
    U = ds.labels[:, None] * scaled_tangent(ds.points, p)
    w, updates, converged, epochs = perceptron_epochs(np.ascontiguousarray(U), int(max_epochs))
    return PerceptronModel(p, w, int(updates), bool(converged), int(epochs))


def perceptron_bound(p_norm, R, eps):
    """Worst-case update count ``(2 R_p / ((1 - R_p^2) sinh eps))^2``."""
    if not 0 <= p_norm < 1 or not 0 < R < 1 or eps <= 0:
        raise ValueError("need 0 <= p_norm < 1, 0 < R < 1, eps > 0")
    rp = (p_norm + R) / (1 + p_norm * R)
    return (2 * rp / ((1 - rp**2) * math.sinh(eps))) ** 2


class _Ridge:
    """Tracks u = (aI + X X^T)^+ xi and the span of X for a = 0."""

    def __init__(self, d, a):
        self.a = a
        self.d = d
        self.M = np.zeros((d, d))
        self.Binv = np.eye(d) / a if a > 0 else None
        self.basis = np.zeros((d, 0))
        self.u = np.zeros(d)

    def add(self, z, xi):
        self.M += np.outer(z, z)
        if self.a > 0:
            bz = self.Binv @ z
            self.Binv -= np.outer(bz, bz) / (1.0 + z @ bz)
            self.u = self.Binv @ xi
        else:
            lam, vec = np.linalg.eigh(self.M)
            keep = lam > _RANK_RTOL * lam.max()
            self.basis = vec[:, keep]
            self.u = (self.basis / lam[keep]) @ (self.basis.T @ xi)

    def full_rank(self):
        return self.a > 0 or self.basis.shape[1] == self.d

    def outside_span(self, Z):
        """Rows of Z with a component outside the span of past mistakes."""
        if self.full_rank():
            return np.zeros(len(Z), dtype=bool)
        resid = Z - (Z @ self.basis) @ self.basis.T
        return np.linalg.norm(resid, axis=1) > _SPAN_RTOL * np.linalg.norm(Z, axis=1)


def second_order_train(ds: LabeledDataset, p, a=0.0, max_epochs=1000):
    """Second-order perceptron in the tangent space at ``p``.

    The prediction for ``z_t`` is ``sign(<w_t, z_t>)`` with
    ``w_t = (aI + S S^T)^+ xi`` and ``S = [X z_t]``.  By Sherman-Morrison this
    sign equals ``sign(z_t^T (aI + X X^T)^+ xi)`` when ``z_t`` lies in the
    span of ``aI + X X^T``; otherwise (only possible for ``a == 0``) the
    prediction is exactly zero, which counts as a mistake.

    Returns ``(SecondOrderState, PerceptronModel)``; the model's normal is
    ``(aI + X X^T)^+ xi`` after training.
    """
    require_binary(ds)
    if a < 0:
        raise ValueError("a must be non-negative")
    p = _as_points(p, "p").reshape(-1)
    Z = scaled_tangent(ds.points, p)
    y = ds.labels.astype(float)
    U = y[:, None] * Z
    n, d = Z.shape

    ridge = _Ridge(d, float(a))
    xi = np.zeros(d)
    cols = []
    converged = False
    epochs = 0
    for epochs in range(1, max_epochs + 1):
        clean = True
        i = 0
        while i < n:
            stop = min(i + _CHUNK, n)
            bad = (U[i:stop] @ ridge.u <= 0) | ridge.outside_span(Z[i:stop])
            hits = np.flatnonzero(bad)
            if hits.size == 0:
                i = stop
                continue
            j = i + hits[0]
            xi += U[j]
            cols.append(Z[j])
            ridge.add(Z[j], xi)
            clean = False
            i = j + 1
        if clean:
            converged = True
            break

    X = np.array(cols).T if cols else np.zeros((d, 0))
    state = SecondOrderState(xi, X, float(a))
    model = PerceptronModel(p, ridge.u.copy(), len(cols), converged, epochs)
    return state, model


def second_order_bound(state: SecondOrderState, w_star, eps):
    """Mistake bound ``sqrt((a + w*^T X X^T w*) sum_j log(1 + lam_j / a)) / sinh(eps)``."""
    w_star = np.asarray(w_star, dtype=float)
    if abs(np.linalg.norm(w_star) - 1.0) > 1e-9:
        raise ValueError("w_star must have unit norm")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if state.mistakes == 0:
        return 0.0
    if state.a <= 0:
        raise BoundNotComputable("bound requires a > 0")
    X = state.mistake_columns
    lam = np.clip(np.linalg.eigvalsh(X @ X.T), 0.0, None)
    lam_w = float(np.sum((X.T @ w_star) ** 2))
    return math.sqrt((state.a + lam_w) * float(np.sum(np.log1p(lam / state.a)))) / math.sinh(eps)
