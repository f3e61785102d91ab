"""Platt scaling: map raw scores to probabilities ``1 / (1 + exp(A s + B))``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PlattParams:
    A: float
    B: float

    def predict_proba(self, scores):
        """Probability of the positive class."""
        f = self.A * np.asarray(scores, dtype=float) + self.B
        # 1/(1+e^f) evaluated without overflow on either tail
        e = np.exp(-np.abs(f))
        return np.where(f >= 0, e / (1.0 + e), 1.0 / (1.0 + e))


def _nll(f, t):
    return float(np.sum(np.where(f >= 0, t * f + np.log1p(np.exp(-f)), (t - 1) * f + np.log1p(np.exp(f)))))


def platt_fit(scores, labels, max_iter=200, min_step=1e-10, sigma=1e-12, gtol=1e-5) -> PlattParams:
    """Fit (A, B) by damped Newton on the smoothed-target log loss.

    Targets are ``(N+ + 1) / (N+ + 2)`` for positives and ``1 / (N- + 2)``
    for negatives (Lin, Lin and Weng's formulation of Platt's method).
    """
    s = np.asarray(scores, dtype=float).reshape(-1)
    y = np.asarray(labels).reshape(-1)
    if s.size != y.size:
        raise ValueError("scores and labels differ in length")
    pos = int(np.sum(y > 0))
    neg = y.size - pos
    if pos == 0 or neg == 0:
        raise ValueError("Platt scaling needs both positive and negative examples")

    t = np.where(y > 0, (pos + 1.0) / (pos + 2.0), 1.0 / (neg + 2.0))
    A, B = 0.0, math.log((neg + 1.0) / (pos + 1.0))
    fval = _nll(A * s + B, t)
    for _ in range(max_iter):
        f = A * s + B
        e = np.exp(-np.abs(f))
        p = np.where(f >= 0, e / (1 + e), 1 / (1 + e))
        q = 1.0 - p
        d2 = p * q
        h11 = sigma + float(np.sum(s * s * d2))
        h22 = sigma + float(np.sum(d2))
        h21 = float(np.sum(s * d2))
        d1 = t - p
        g1 = float(np.sum(s * d1))
        g2 = float(np.sum(d1))
        if abs(g1) < gtol and abs(g2) < gtol:
            break
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB
        step = 1.0
        while step >= min_step:
            nA, nB = A + step * dA, B + step * dB
            nf = _nll(nA * s + nB, t)
            if nf < fval + 1e-4 * step * gd:
                A, B, fval = nA, nB, nf
                break
            step /= 2.0
        else:
            break
    return PlattParams(float(A), float(B))
