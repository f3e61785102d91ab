"""Command-line front end.

Exit codes: 0 success, 1 usage or validation error, 2 runtime failure,
3 training finished without converging.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import benchmark
from .classifiers import (
    ALGORITHMS,
    MultiClassModel,
    decision_scores,
    load_model,
    ovr_predict,
    ovr_train,
    save_model,
    train_binary,
)
from .classifiers.svm import SvmModel
from .data import SynthConfig, UnsatisfiableConfig, generate_synthetic, load_dataset, save_dataset
from .dataset import LabeledDataset
from .hull import graham_scan, hull_membership, learn_reference_point, quickhull, strip_collinear

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_NOT_CONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _kv(**fields):
    out = []
    for k, v in fields.items():
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = f"{v:.10g}"
        out.append(f"{k}={v}")
    return " ".join(out)


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_generate(args):
    cfg = SynthConfig(args.n, args.d, args.eps, args.p_frac, args.R, args.seed)
    try:
        ds, h = generate_synthetic(cfg)
    except UnsatisfiableConfig as exc:
        raise UsageError(str(exc)) from None
    save_dataset(ds, args.out)
    truth_path = args.truth or (None if args.out == "-" else f"{args.out}.truth.json")
    if truth_path:
        truth = {"p": h.p.tolist(), "w": h.w.tolist(), "eps": cfg.eps, "R": cfg.R,
                 "p_frac": cfg.p_frac, "N": cfg.N, "d": cfg.d, "seed": cfg.seed}
        Path(truth_path).write_text(json.dumps(truth, indent=1) + "\n")
    return EXIT_OK


def _reference_point(value, ds: LabeledDataset, seed):
    if value == "learn":
        return learn_reference_point(ds, seed=seed)
    if value == "origin":
        return np.zeros(ds.dim)
    try:
        p = np.asarray(json.loads(Path(value).read_text())["p"], dtype=float)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read reference point from {value}: {exc}") from None
    if p.size != ds.dim:
        raise UsageError(f"reference point has dimension {p.size}, data has {ds.dim}")
    return p


def cmd_train(args):
    ds = load_dataset(args.input)
    hyper = dict(C=args.c, tol=args.tol, max_iters=args.max_iters, seed=args.seed,
                 max_epochs=args.max_epochs, a=args.a)
    t0 = time.perf_counter()
    if ds.is_binary:
        p = None if args.algo == "euclidean-svm" else _reference_point(args.ref_point, ds, args.seed)
        model = train_binary(ds, args.algo, p, **hyper)
        seconds = time.perf_counter() - t0
        acc = float(np.mean(np.sign(decision_scores(model, ds.points)) == ds.labels))
        stats = dict(algorithm=args.algo, n=len(ds), d=ds.dim, train_accuracy=acc)
        if isinstance(model, SvmModel):
            stats.update(iterations=model.iterations, objective=min(model.objective_trace))
            converged = True
        else:
            stats.update(updates=model.updates, epochs=model.epochs, converged=model.converged)
            converged = model.converged
    else:
        model = ovr_train(ds, args.algo, **hyper)
        seconds = time.perf_counter() - t0
        pred, _ = ovr_predict(model, ds.points)
        stats = dict(algorithm=args.algo, n=len(ds), d=ds.dim, classes=model.K,
                     train_accuracy=float(np.mean(pred == ds.labels)))
        converged = all(getattr(m, "converged", True) for m in model.models)
    save_model(args.out, model, args.algo, hyper)
    print(_kv(**stats, seconds=seconds))
    if not converged:
        print("training did not converge within max_epochs", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _check_dim(model_dim, ds):
    if model_dim != ds.dim:
        raise UsageError(f"model dimension {model_dim} does not match data dimension {ds.dim}")


def _predictions(model, ds):
    if isinstance(model, MultiClassModel):
        _check_dim(model.dim, ds)
        labels, prob = ovr_predict(model, ds.points)
        return labels, prob
    _check_dim(model.w.size, ds)
    score = decision_scores(model, ds.points)
    return np.sign(score).astype(int), score


def cmd_predict(args):
    saved = load_model(args.model)
    ds = load_dataset(args.input)
    labels, extra = _predictions(saved.model, ds)
    rows = []
    for i, lab in enumerate(labels.tolist()):
        vals = np.atleast_1d(extra[i]).tolist()
        rows.append(",".join([str(i), str(lab)] + [repr(float(v)) for v in vals]))
    _write_text(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_evaluate(args):
    saved = load_model(args.model)
    ds = load_dataset(args.input)
    if len(ds) == 0:
        raise UsageError("empty test set")
    pred, _ = _predictions(saved.model, ds)
    acc = float(np.mean(pred == ds.labels))
    print(_kv(algorithm=saved.algorithm, n=len(ds), accuracy=acc))
    classes = saved.model.classes if isinstance(saved.model, MultiClassModel) else [-1, 1]
    for c in classes:
        tp = int(np.sum((pred == c) & (ds.labels == c)))
        npred = int(np.sum(pred == c))
        ntrue = int(np.sum(ds.labels == c))
        precision = tp / npred if npred else 0.0
        recall = tp / ntrue if ntrue else 0.0
        print(_kv(**{"class": c}, precision=precision, recall=recall, support=ntrue))
    return EXIT_OK


def _seed_list(text):
    seeds = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def cmd_benchmark(args):
    seeds = _seed_list(args.seeds) if args.seeds else list(range(args.n_seeds))
    if args.suite == "table1":
        cells = benchmark.table1(seeds, N=args.n, d=args.d, jobs=args.jobs)
    else:
        cells = benchmark.figure4(seeds, full=args.full, jobs=args.jobs)
    _write_text(args.out, "\n".join(benchmark.report_lines(cells)) + "\n")
    if args.json:
        Path(args.json).write_text(json.dumps(cells, indent=1) + "\n")
    return EXIT_OK


def cmd_hull(args):
    ds = load_dataset(args.input)
    if ds.dim != 2:
        raise UsageError(f"hull is only supported for d = 2 (got d = {ds.dim})")
    pts = ds.points if args.label is None else ds.points[ds.labels == args.label]
    if len(pts) == 0:
        raise UsageError(f"no points with label {args.label}")
    algo = quickhull if args.algo == "quickhull" else graham_scan
    hull = algo(pts)
    lines = [",".join(repr(float(v)) for v in row) for row in hull.vertices.tolist()]
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.check:
        g, q = strip_collinear(graham_scan(pts)), strip_collinear(quickhull(pts))
        match = g.vertex_set() == q.vertex_set() and bool(hull_membership(hull, pts).all())
        print(_kv(status="MATCH" if match else "MISMATCH", vertices=len(hull)), file=sys.stderr)
        if not match:
            return EXIT_RUNTIME
    return EXIT_OK


def build_parser():
    ap = _Parser(prog="poincare-linear", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a margin-separable synthetic dataset")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--eps", type=float, required=True)
    g.add_argument("--p-frac", type=float, default=0.2, help="|p| as a fraction of R")
    g.add_argument("--R", type=float, default=0.95)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.add_argument("--truth", help="ground-truth sidecar (default: <out>.truth.json)")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("train", help="train a binary or one-vs-rest model")
    t.add_argument("--algo", choices=ALGORITHMS, default="svm")
    t.add_argument("--input", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--c", type=float, default=1000.0)
    t.add_argument("--tol", type=float)
    t.add_argument("--max-iters", type=int)
    t.add_argument("--max-epochs", type=int, default=1000)
    t.add_argument("--a", type=float, default=0.0, help="second-order ridge parameter")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--ref-point", default="learn", help="'learn', 'origin' or a JSON file with key 'p'")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="label points with a saved model")
    pr.add_argument("--model", required=True)
    pr.add_argument("--input", required=True)
    pr.add_argument("--out", default="-")
    pr.set_defaults(func=cmd_predict)

    e = sub.add_parser("evaluate", help="accuracy and per-class precision/recall")
    e.add_argument("--model", required=True)
    e.add_argument("--input", required=True)
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("benchmark", help="run a seeded benchmark suite")
    b.add_argument("--suite", choices=("table1", "figure4-desk"), required=True)
    b.add_argument("--seeds", help="explicit seed list, e.g. '0-19' or '1,5,9'")
    b.add_argument("--n-seeds", type=int, default=20)
    b.add_argument("--n", type=int, default=10_000, help="table1 point count")
    b.add_argument("--d", type=int, default=10, help="table1 dimension")
    b.add_argument("--full", action="store_true", help="include N = 10^6 in figure4-desk")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", default="-")
    b.add_argument("--json", help="also write the full report as JSON")
    b.set_defaults(func=cmd_benchmark)

    h = sub.add_parser("hull", help="geodesic convex hull of 2-D points")
    h.add_argument("--input", required=True)
    h.add_argument("--class-filter", "--label", dest="label", type=int, help="only use points with this label")
    h.add_argument("--algo", choices=("graham", "quickhull"), default="graham")
    h.add_argument("--check", action="store_true", help="cross-check Graham scan against Quickhull")
    h.add_argument("--out", default="-")
    h.set_defaults(func=cmd_hull)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
