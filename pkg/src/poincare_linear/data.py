"""Synthetic margin-separable data, dataset files and stratified splits."""

from __future__ import annotations

import io
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import LabeledDataset
from .geometry import Hyperplane, dist_to_hyperplane, hyperplane_side

PROBE_DRAWS = 1_000_000
MIN_ACCEPT_RATE = 1e-6
_MAX_BATCH_VALUES = 4_000_000


class UnsatisfiableConfig(ValueError):
    """Rejection sampling cannot produce points for this configuration."""


class DatasetFormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class SynthConfig:
    """``p_frac`` is the reference-point norm as a fraction of ``R``."""

    N: int
    d: int
    eps: float
    p_frac: float = 0.2
    R: float = 0.95
    seed: int = 0

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise ValueError("N and d must be positive")
        if not 0 < self.R < 1:
            raise ValueError("R must lie in (0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 0 <= self.p_frac < 1:
            raise ValueError("p_frac must lie in [0, 1)")


def _unit(rng, n, d):
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_ball(rng, n, d, radius):
    """Uniform samples (Euclidean measure) from the ball of given radius."""
    r = radius * rng.random(n) ** (1.0 / d)
    return _unit(rng, n, d) * r[:, None]


def generate_synthetic(cfg: SynthConfig):
    """Sample ``cfg.N`` points separated by a random hyperplane with margin ``eps``.

    Returns ``(dataset, hyperplane)``; the hyperplane normal has unit norm.
    """
    rng = np.random.default_rng(cfg.seed)
    w = _unit(rng, 1, cfg.d)[0]
    p = _unit(rng, 1, cfg.d)[0] * (cfg.p_frac * cfg.R)
    h = Hyperplane(p, w)

    max_rows = max(1, _MAX_BATCH_VALUES // cfg.d)
    pts, labs = [], []
    have = drawn = 0
    batch = min(max(2 * cfg.N, 1024), max_rows)
    while have < cfg.N:
        x = sample_ball(rng, batch, cfg.d, cfg.R)
        side = hyperplane_side(x, h)
        keep = (side != 0) & (dist_to_hyperplane(x, h) >= cfg.eps)
        drawn += batch
        have += int(keep.sum())
        pts.append(x[keep])
        labs.append(side[keep])
        if drawn >= PROBE_DRAWS and have / drawn < MIN_ACCEPT_RATE:
            raise UnsatisfiableConfig(
                f"acceptance rate {have / drawn:.2e} over {drawn} draws; "
                f"eps={cfg.eps} is too large for this geometry"
            )
        rate = max(have / drawn, MIN_ACCEPT_RATE)
        batch = int(min(max(1.2 * (cfg.N - have) / rate, 1024), max_rows))
    X = np.concatenate(pts)[: cfg.N]
    y = np.concatenate(labs)[: cfg.N]
    return LabeledDataset(X, y), h


def format_dataset(ds: LabeledDataset) -> str:
    buf = io.StringIO()
    buf.write(f"# d={ds.dim} n={len(ds)}\n")
    for lab, row in zip(ds.labels.tolist(), ds.points.tolist()):
        buf.write(",".join([str(lab)] + [repr(v) for v in row]))
        buf.write("\n")
    return buf.getvalue()


def parse_dataset(text: str) -> LabeledDataset:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise DatasetFormatError("empty dataset file")
    header = lines[0].strip()
    try:
        if not header.startswith("#"):
            raise ValueError
        fields = dict(tok.split("=", 1) for tok in header[1:].split())
        d, n = int(fields["d"]), int(fields["n"])
    except (ValueError, KeyError):
        raise DatasetFormatError(f"bad header {header!r}", 1) from None
    if n == 0:
        raise DatasetFormatError("empty dataset", 1)

    X = np.empty((n, d))
    y = np.empty(n, dtype=np.int64)
    i = 0
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if i >= n:
            raise DatasetFormatError(f"more rows than header count {n}", lineno)
        parts = line.split(",")
        if len(parts) != d + 1:
            raise DatasetFormatError(f"expected {d} coordinates, got {len(parts) - 1}", lineno)
        try:
            y[i] = int(parts[0])
            X[i] = [float(v) for v in parts[1:]]
        except ValueError:
            raise DatasetFormatError(f"malformed row {line!r}", lineno) from None
        if not np.dot(X[i], X[i]) < 1.0:
            raise DatasetFormatError("point norm must be < 1", lineno)
        i += 1
    if i != n:
        raise DatasetFormatError(f"header declares {n} rows, found {i}")
    return LabeledDataset(X, y)


def save_dataset(ds: LabeledDataset, path):
    """Write ``ds``; ``path == "-"`` writes to stdout."""
    text = format_dataset(ds)
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def load_dataset(path) -> LabeledDataset:
    """Read a dataset file; ``path == "-"`` reads stdin."""
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    return parse_dataset(text)


def train_test_split(ds: LabeledDataset, fraction, seed=0):
    """Stratified random split; ``fraction`` of each class goes to training.

    Per-class training counts are ``round(fraction * n_c)``, kept within
    ``[1, n_c - 1]`` so that every class of size >= 2 appears on both sides.
    Singleton classes go to training.
    """
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in np.unique(ds.labels):
        idx = np.flatnonzero(ds.labels == c)
        if idx.size == 1:
            train.append(idx)
            continue
        k = int(np.clip(np.floor(fraction * idx.size + 0.5), 1, idx.size - 1))
        perm = rng.permutation(idx)
        train.append(perm[:k])
        test.append(perm[k:])
    tr = np.sort(np.concatenate(train))
    te = np.sort(np.concatenate(test)) if test else np.array([], dtype=np.int64)
    return ds.subset(tr), ds.subset(te)
