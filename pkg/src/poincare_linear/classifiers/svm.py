"""Soft-margin SVM in the tangent space, trained by stochastic subgradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._kernels import svm_sgd_steps
from ..dataset import LabeledDataset, require_binary
from ..geometry import Hyperplane, _as_points, log_map


@dataclass(eq=False)
class SvmModel:
    p: np.ndarray
    w: np.ndarray
    C: float
    objective_trace: list = field(default_factory=list)
    iterations: int = 0
    euclidean: bool = False

    @property
    def hyperplane(self):
        return Hyperplane(self.p, self.w)


def svm_objective(V, y, w, C):
    """``0.5 |w|^2 + C * sum(max(0, 1 - y <v, w>))``."""
    return 0.5 * float(w @ w) + C * float(np.maximum(0.0, 1.0 - y * (V @ w)).sum())


# checkpoints over which the best objective must improve by more than tol
STALL_WINDOW = 10


def _sgd(V, y, C, tol, max_iters, seed):
    n, d = V.shape
    if C <= 0:
        raise ValueError("C must be positive")
    if tol is None:
        tol = 1e-6 * n * C
    if max_iters is None:
        max_iters = 100 * n
    rng = np.random.default_rng(seed)
    V = np.ascontiguousarray(V, dtype=float)
    yf = y.astype(float)
    w = np.zeros(d)
    trace = [n * C]
    best = [n * C]
    best_w = w.copy()
    t = 0
    while t < max_iters:
        steps = min(n, max_iters - t)
        t = svm_sgd_steps(V, yf, w, rng.integers(0, n, size=steps), t, float(n * C))
        f = svm_objective(V, yf, w, C)
        trace.append(f)
        if f < best[-1]:
            best_w = w.copy()
        best.append(min(f, best[-1]))
        # single-checkpoint differences are dominated by sampling noise
        if len(best) > STALL_WINDOW and best[-1 - STALL_WINDOW] - best[-1] <= tol:
            break
    if not np.any(best_w):
        best_w = w
    return best_w, trace, t


def svm_train(ds: LabeledDataset, p, C=1000.0, tol=None, max_iters=None, seed=0) -> SvmModel:
    """Poincare SVM with reference point ``p``.

    Starting from ``w = 0`` each step samples one example uniformly and moves
    ``w`` against the stochastic subgradient ``w - N C y v`` (or ``w`` when the
    hinge is inactive) with step ``1 / (t + 1000)``.  The full objective is
    evaluated every ``N`` steps and the lowest-objective checkpoint is
    returned.  Training stops once the best objective improves by no more
    than ``tol`` (default ``1e-6 N C``) over ``STALL_WINDOW`` checkpoints, or
    after ``max_iters`` steps (default ``100 N``).
    """
    require_binary(ds)
    p = _as_points(p, "p").reshape(-1)
    V = log_map(p, ds.points)
    w, trace, t = _sgd(V, ds.labels, C, tol, max_iters, seed)
    return SvmModel(p, w, float(C), trace, t)


def euclidean_svm_train(ds: LabeledDataset, C=1000.0, tol=None, max_iters=None, seed=0) -> SvmModel:
    """Baseline: the same solver on raw coordinates (linear, through the origin)."""
    require_binary(ds)
    w, trace, t = _sgd(ds.points, ds.labels, C, tol, max_iters, seed)
    return SvmModel(np.zeros(ds.dim), w, float(C), trace, t, euclidean=True)


def decision_scores(model, points):
    """Raw scores ``<log_p(x), w>`` (``<x, w>`` for Euclidean models)."""
    points = np.asarray(points, dtype=float)
    if points.shape[-1] != model.w.size:
        raise ValueError(f"model dimension {model.w.size} does not match data dimension {points.shape[-1]}")
    if getattr(model, "euclidean", False):
        return points @ model.w
    return log_map(model.p, points) @ model.w


def predict_binary(model, x):
    """Return ``(sign, score)`` for a single point or arrays for a batch."""
    score = decision_scores(model, x)
    return np.sign(score).astype(int), score


def accuracy(model, ds: LabeledDataset):
    sign, _ = predict_binary(model, ds.points)
    return float(np.mean(sign == ds.labels))
