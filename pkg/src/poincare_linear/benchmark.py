"""Seeded benchmark suites reproducing the perceptron update table and the
SVM accuracy/scaling sweeps on synthetic data."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .classifiers.perceptron import perceptron_bound, perceptron_train, second_order_train
from .classifiers.svm import accuracy, euclidean_svm_train, svm_train
from .data import SynthConfig, generate_synthetic, train_test_split

R_DEFAULT = 0.95
TABLE1_EPS = (1.0, 0.1, 0.01, 0.001)
TABLE1_P_FRACS = (0.2, 0.6)
FIG4_D = (2, 10, 100, 1000)
FIG4_N = (1_000, 10_000, 100_000)
FIG4_N_FULL = FIG4_N + (1_000_000,)
# large enough that every table1 cell converges
TABLE1_MAX_EPOCHS = 200_000


def _quantiles(values):
    q = np.quantile(np.asarray(values, dtype=float), [0.25, 0.5, 0.75])
    return {"q25": float(q[0]), "q50": float(q[1]), "q75": float(q[2])}


def _summary(values):
    v = np.asarray(values, dtype=float)
    return {"mean": float(v.mean()), "max": float(v.max()), "min": float(v.min()), **_quantiles(v)}


def table1_run(N, d, eps, p_frac, R, seed, max_epochs=TABLE1_MAX_EPOCHS):
    ds, h = generate_synthetic(SynthConfig(N, d, eps, p_frac, R, seed))
    t0 = time.perf_counter()
    pm = perceptron_train(ds, h.p, max_epochs=max_epochs)
    t1 = time.perf_counter()
    _, sm = second_order_train(ds, h.p, a=0.0, max_epochs=max_epochs)
    t2 = time.perf_counter()
    return {
        "seed": seed,
        "perceptron": pm.updates,
        "perceptron_converged": pm.converged,
        "second_order": sm.updates,
        "second_order_converged": sm.converged,
        "perceptron_seconds": t1 - t0,
        "second_order_seconds": t2 - t1,
    }


def svm_run(N, d, eps, p_frac, R, seed, C=1000.0, max_iters=None):
    ds, h = generate_synthetic(SynthConfig(N, d, eps, p_frac, R, seed))
    train, test = train_test_split(ds, 0.7, seed)
    t0 = time.perf_counter()
    pm = svm_train(train, h.p, C=C, max_iters=max_iters, seed=seed)
    t1 = time.perf_counter()
    em = euclidean_svm_train(train, C=C, max_iters=max_iters, seed=seed)
    t2 = time.perf_counter()
    return {
        "seed": seed,
        "poincare_accuracy": accuracy(pm, test),
        "euclidean_accuracy": accuracy(em, test),
        "poincare_seconds": t1 - t0,
        "euclidean_seconds": t2 - t1,
    }


def _call(args):
    fn, kw = args
    return fn(**kw)


def _map(fn, kwargs_list, jobs):
    tasks = [(fn, kw) for kw in kwargs_list]
    if jobs <= 1:
        return [_call(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_call, tasks))


def table1(seeds, N=10_000, d=10, eps_values=TABLE1_EPS, p_fracs=TABLE1_P_FRACS, R=R_DEFAULT,
           jobs=1, max_epochs=TABLE1_MAX_EPOCHS):
    """One record per (eps, |p|) cell with update statistics and the worst-case bound."""
    seeds = list(seeds)
    grid = [(eps, pf) for pf in p_fracs for eps in eps_values]
    kwargs = [dict(N=N, d=d, eps=eps, p_frac=pf, R=R, seed=s, max_epochs=max_epochs) for eps, pf in grid for s in seeds]
    runs = _map(table1_run, kwargs, jobs)
    cells = []
    for k, (eps, pf) in enumerate(grid):
        rs = runs[k * len(seeds) : (k + 1) * len(seeds)]
        bound = perceptron_bound(pf * R, R, eps)
        perc = [r["perceptron"] for r in rs]
        sec = [r["second_order"] for r in rs]
        cells.append({
            "suite": "table1", "N": N, "d": d, "eps": eps, "p_norm": pf * R, "seeds": seeds,
            "bound": bound,
            "perceptron": {**_summary(perc), "values": perc,
                           "converged": all(r["perceptron_converged"] for r in rs),
                           "seconds": sum(r["perceptron_seconds"] for r in rs)},
            "second_order": {**_summary(sec), "values": sec,
                             "converged": all(r["second_order_converged"] for r in rs),
                             "seconds": sum(r["second_order_seconds"] for r in rs)},
            "bound_ok": max(perc) <= bound,
            "second_order_wins": float(np.mean(np.asarray(sec) < np.asarray(perc))),
        })
    return cells


def figure4(seeds, p_fracs=TABLE1_P_FRACS, eps=0.01, R=R_DEFAULT, full=False, jobs=1, C=1000.0,
            n_values=None, d_values=FIG4_D, d_sweep_n=10_000):
    """Accuracy and wall time of Poincare vs Euclidean SVM.

    The N sweep runs at d = 2; the d sweep runs at ``d_sweep_n`` points and
    reuses the d = 2 cell of the N sweep when the sizes coincide.
    """
    seeds = list(seeds)
    if n_values is None:
        n_values = FIG4_N_FULL if full else FIG4_N
    grid = [(2, n) for n in n_values]
    grid += [(d, d_sweep_n) for d in d_values if (d, d_sweep_n) not in grid]
    grid = [(d, n, pf) for pf in p_fracs for d, n in grid]
    kwargs = [dict(N=n, d=d, eps=eps, p_frac=pf, R=R, seed=s, C=C) for d, n, pf in grid for s in seeds]
    runs = _map(svm_run, kwargs, jobs)
    cells = []
    for k, (d, n, pf) in enumerate(grid):
        rs = runs[k * len(seeds) : (k + 1) * len(seeds)]
        cell = {"suite": "figure4-desk", "N": n, "d": d, "eps": eps, "p_norm": pf * R, "seeds": seeds}
        for algo in ("poincare", "euclidean"):
            acc = [r[f"{algo}_accuracy"] for r in rs]
            secs = [r[f"{algo}_seconds"] for r in rs]
            cell[algo] = {"accuracy": {**_summary(acc), "values": acc}, "seconds": _summary(secs)}
        cells.append(cell)
    return cells


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def report_lines(cells):
    """Flatten cells to ``key=value`` lines, one per (cell, algorithm)."""
    lines = []
    for c in cells:
        head = {k: c[k] for k in ("suite", "N", "d", "eps", "p_norm")}
        if c["suite"] == "table1":
            for algo in ("second_order", "perceptron"):
                s = c[algo]
                row = {**head, "algorithm": algo, "mean": s["mean"], "max": s["max"], "q25": s["q25"],
                       "q50": s["q50"], "q75": s["q75"], "converged": s["converged"], "seconds": s["seconds"]}
                if algo == "perceptron":
                    row.update(bound=c["bound"], bound_ok=c["bound_ok"])
                row["seeds"] = c["seeds"]
                lines.append(" ".join(f"{k}={_fmt(v)}" for k, v in row.items()))
        else:
            for algo in ("poincare", "euclidean"):
                a = c[algo]["accuracy"]
                row = {**head, "algorithm": f"{algo}-svm", "acc_mean": a["mean"], "acc_q25": a["q25"],
                       "acc_q50": a["q50"], "acc_q75": a["q75"], "acc_min": a["min"],
                       "seconds_mean": c[algo]["seconds"]["mean"], "seeds": c["seeds"]}
                lines.append(" ".join(f"{k}={_fmt(v)}" for k, v in row.items()))
    return lines
