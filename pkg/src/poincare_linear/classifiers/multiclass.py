"""One-vs-rest multi-class wrapper with Platt-calibrated fusion."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dataset import LabeledDataset
from ..hull import learn_reference_point
from .perceptron import perceptron_train, second_order_train
from .platt import PlattParams, platt_fit
from .svm import decision_scores, euclidean_svm_train, svm_train

ALGORITHMS = ("perceptron", "second-order", "svm", "euclidean-svm")


@dataclass(eq=False)
class MultiClassModel:
    classes: list
    models: list
    platt: list
    algorithm: str = "svm"
    hyperparameters: dict = field(default_factory=dict)

    @property
    def K(self):
        return len(self.classes)

    @property
    def dim(self):
        return self.models[0].w.size


def train_binary(ds: LabeledDataset, algorithm, p=None, *, C=1000.0, tol=None, max_iters=None,
                 seed=0, max_epochs=1000, a=0.0):
    """Dispatch to one of the binary trainers; ``p`` is unused for the Euclidean SVM."""
    if algorithm == "perceptron":
        return perceptron_train(ds, p, max_epochs=max_epochs)
    if algorithm == "second-order":
        return second_order_train(ds, p, a=a, max_epochs=max_epochs)[1]
    if algorithm == "svm":
        return svm_train(ds, p, C=C, tol=tol, max_iters=max_iters, seed=seed)
    if algorithm == "euclidean-svm":
        return euclidean_svm_train(ds, C=C, tol=tol, max_iters=max_iters, seed=seed)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")


def ovr_train(ds: LabeledDataset, algorithm="svm", classes=None, **hyper) -> MultiClassModel:
    """Train one binary classifier per class against the rest.

    Each classifier gets its own reference point, learned from the hulls of
    its relabeled data, and a Platt calibration fitted on training scores.
    """
    if classes is None:
        classes = np.unique(ds.labels).tolist()
    classes = sorted(int(c) for c in classes)
    if len(classes) < 2:
        raise ValueError("one-vs-rest needs at least two classes")
    counts = {c: int(np.sum(ds.labels == c)) for c in classes}
    empty = [c for c, n in counts.items() if n == 0]
    if empty:
        raise ValueError(f"classes without training examples: {empty}")

    models, platts = [], []
    for c in classes:
        rel = ds.one_vs_rest(c)
        p = None if algorithm == "euclidean-svm" else learn_reference_point(rel, seed=hyper.get("seed", 0))
        m = train_binary(rel, algorithm, p, **hyper)
        models.append(m)
        platts.append(platt_fit(decision_scores(m, ds.points), rel.labels))
    return MultiClassModel(classes, models, platts, algorithm, dict(hyper))


def ovr_proba(model: MultiClassModel, points):
    """Per-class calibrated probabilities, shape ``(n, K)``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    cols = [pl.predict_proba(decision_scores(m, pts)) for m, pl in zip(model.models, model.platt)]
    return np.stack(cols, axis=1)


def ovr_predict(model: MultiClassModel, points):
    """Return ``(class_ids, probabilities)``; ties go to the smallest class id."""
    single = np.ndim(points) == 1
    prob = ovr_proba(model, points)
    labels = np.asarray(model.classes)[np.argmax(prob, axis=1)]
    if single:
        return int(labels[0]), prob[0]
    return labels, prob


__all__ = ["ALGORITHMS", "MultiClassModel", "PlattParams", "ovr_predict", "ovr_proba", "ovr_train", "train_binary"]
