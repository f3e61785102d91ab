"""Labeled point sets and the separability/margin check."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import DomainError, Hyperplane, dist_to_hyperplane, log_map


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Points in the ball with integer labels.

    Binary tasks use labels in {-1, +1}; multi-class tasks use 0..K-1.
    """

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if pts.size == 0 else pts.reshape(1, -1)
        lab = np.asarray(self.labels).reshape(-1)
        if lab.size and not np.all(lab == np.round(lab)):
            raise ValueError("labels must be integers")
        lab = lab.astype(np.int64)
        if pts.shape[0] != lab.size:
            raise ValueError(f"{pts.shape[0]} points but {lab.size} labels")
        if pts.size:
            sq = np.einsum("ij,ij->i", pts, pts)
            bad = np.flatnonzero(~(sq < 1.0))
            if bad.size:
                raise DomainError(f"point {bad[0]} has norm >= 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)

    def __len__(self):
        return self.labels.size

    def __eq__(self, other):
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (
            self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.labels, other.labels)
        )

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def classes(self):
        return np.unique(self.labels)

    @property
    def is_binary(self):
        return set(np.unique(self.labels).tolist()) <= {-1, 1}

    def max_norm(self):
        return float(np.sqrt(np.max(np.einsum("ij,ij->i", self.points, self.points))))

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return LabeledDataset(self.points[idx], self.labels[idx])

    def one_vs_rest(self, cls):
        """Relabel as +1 for ``cls`` and -1 otherwise."""
        return LabeledDataset(self.points, np.where(self.labels == cls, 1, -1))


def require_binary(ds: LabeledDataset):
    if len(ds) == 0:
        raise ValueError("empty dataset")
    if not ds.is_binary:
        raise ValueError("binary training requires labels in {-1, +1}")


@dataclass
class MarginReport:
    sign: list = field(default_factory=list)
    margin: list = field(default_factory=list)
    norm: list = field(default_factory=list)
    min_distance: float = float("inf")

    @property
    def satisfied(self):
        return not (self.sign or self.margin or self.norm)

    def __bool__(self):
        return self.satisfied


def check_margin_assumption(ds: LabeledDataset, h: Hyperplane, eps, R) -> MarginReport:
    """Check that ``h`` separates ``ds`` with margin ``eps`` and all norms <= R.

    The returned report is truthy iff every clause holds; it lists the
    offending indices per clause.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 0 < R < 1:
        raise ValueError("R must lie in (0, 1)")
    require_binary(ds)
    v = log_map(h.p, ds.points)
    signed = ds.labels * (v @ h.w)
    dist = dist_to_hyperplane(ds.points, h)
    norms = np.linalg.norm(ds.points, axis=1)
    return MarginReport(
        sign=np.flatnonzero(~(signed > 0)).tolist(),
        margin=np.flatnonzero(~(dist >= eps)).tolist(),
        norm=np.flatnonzero(norms > R).tolist(),
        min_distance=float(dist.min()),
    )
