"""Compiled inner loops for the online/stochastic trainers."""

import numba
import numpy as np


@numba.njit(cache=True)
def perceptron_epochs(U, max_epochs):
    """Cyclic perceptron on rows ``U[i] = y_i * z_i``.

    A row is a mistake when ``<U[i], w> <= 0``; the update is ``w += U[i]``.
    Returns ``(w, updates, converged, epochs)``.
    """
    n, d = U.shape
    w = np.zeros(d)
    updates = 0
    for epoch in range(max_epochs):
        clean = True
        for i in range(n):
            s = 0.0
            for j in range(d):
                s += U[i, j] * w[j]
            if s <= 0.0:
                for j in range(d):
                    w[j] += U[i, j]
                updates += 1
                clean = False
        if clean:
            return w, updates, True, epoch + 1
    return w, updates, False, max_epochs


@numba.njit(cache=True)
def svm_sgd_steps(V, y, w, idx, t0, nc):
    """Run ``len(idx)`` subgradient steps in place; returns the new step count."""
    d = V.shape[1]
    t = t0
    for k in range(idx.size):
        i = idx[k]
        t += 1
        s = 0.0
        for j in range(d):
            s += V[i, j] * w[j]
        lr = 1.0 / (t + 1000.0)
        if 1.0 - y[i] * s < 0.0:
            for j in range(d):
                w[j] -= lr * w[j]
        else:
            c = nc * y[i]
            for j in range(d):
                w[j] -= lr * (w[j] - c * V[i, j])
    return t
