"""JSON model documents.

Layout::

    {"dimension": d, "algorithm": "...", "hyperparameters": {...},
     "multiclass": bool,
     "classes": [{"class_id": k, "p": [...], "w": [...],
                  "platt": {"A": .., "B": ..} | null,
                  "training_stats": {...}}],
     "training_stats": {...}}

Floats go through ``repr`` (shortest round-trip form), so save/load is
bit-exact.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .multiclass import ALGORITHMS, MultiClassModel
from .perceptron import PerceptronModel
from .platt import PlattParams
from .svm import SvmModel


class SavedModel(NamedTuple):
    model: object
    algorithm: str
    hyperparameters: dict


def _stats(m):
    if isinstance(m, SvmModel):
        return {"C": m.C, "iterations": m.iterations, "objective_trace": list(map(float, m.objective_trace))}
    return {"updates": m.updates, "converged": m.converged, "epochs": m.epochs}


def _entry(class_id, m, platt):
    return {
        "class_id": int(class_id),
        "p": np.asarray(m.p, dtype=float).tolist(),
        "w": np.asarray(m.w, dtype=float).tolist(),
        "platt": None if platt is None else {"A": platt.A, "B": platt.B},
        "training_stats": _stats(m),
    }


def model_to_dict(model, algorithm=None, hyperparameters=None):
    if isinstance(model, MultiClassModel):
        entries = [_entry(c, m, pl) for c, m, pl in zip(model.classes, model.models, model.platt)]
        algorithm = model.algorithm
        hyperparameters = model.hyperparameters
    else:
        if algorithm is None:
            algorithm = ("euclidean-svm" if model.euclidean else "svm") if isinstance(model, SvmModel) else "perceptron"
        entries = [_entry(1, model, None)]
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return {
        "dimension": int(np.asarray(entries[0]["w"]).size),
        "algorithm": algorithm,
        "hyperparameters": dict(hyperparameters or {}),
        "multiclass": isinstance(model, MultiClassModel),
        "classes": entries,
        "training_stats": {"classes": len(entries)},
    }


def _model(entry, algorithm):
    p = np.array(entry["p"], dtype=float)
    w = np.array(entry["w"], dtype=float)
    st = entry["training_stats"]
    if algorithm in ("svm", "euclidean-svm"):
        return SvmModel(p, w, st["C"], list(st["objective_trace"]), st["iterations"], algorithm == "euclidean-svm")
    return PerceptronModel(p, w, st["updates"], st["converged"], st["epochs"])


def model_from_dict(doc) -> SavedModel:
    algorithm = doc["algorithm"]
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    hyper = dict(doc.get("hyperparameters", {}))
    entries = doc["classes"]
    for e in entries:
        if len(e["w"]) != doc["dimension"] or len(e["p"]) != doc["dimension"]:
            raise ValueError(f"class {e['class_id']}: vector length does not match dimension {doc['dimension']}")
    if not doc.get("multiclass", False):
        return SavedModel(_model(entries[0], algorithm), algorithm, hyper)
    model = MultiClassModel(
        [int(e["class_id"]) for e in entries],
        [_model(e, algorithm) for e in entries],
        [PlattParams(e["platt"]["A"], e["platt"]["B"]) for e in entries],
        algorithm,
        hyper,
    )
    return SavedModel(model, algorithm, hyper)


def save_model(path, model, algorithm=None, hyperparameters=None):
    """Write atomically so a failure never leaves a partial file behind."""
    text = json.dumps(model_to_dict(model, algorithm, hyperparameters), indent=1)
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def load_model(path) -> SavedModel:
    return model_from_dict(json.loads(Path(path).read_text()))
