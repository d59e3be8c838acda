"""Batch front door: ingest scored CSVs, run the optimizers, sampler,
asymptotics and sweeps, and emit JSON reports or plot-ready CSV.

Scored-data CSV contract: header row with required columns ``p`` (float in
[0,1]) and ``group`` (0/1), optional ``y`` (0/1). Single-result commands emit
JSON; curve commands emit CSV. All randomness is seeded from the config
(flag ``--seed``, or the RASHOMON_SEED environment variable as the default),
and identical invocations produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .asymptotics import (
    RegimeError,
    average_metric,
    expected_tolerance_used,
    flip_probabilities,
    rashomon_base,
    uniform_closed_forms,
)
from .baseline import estimate_bayes_probs, load_feature_csv, sample_linear_models
from .core import Dataset, FlipVector, MetricKind, RashomonQuery, disparity, used_tolerance
from .fairopt import optimize_ppr, optimize_rate
from .oracle import DEFAULT_LIMIT, enumerate_rashomon
from .sampler import GibbsConfig, gibbs_sample_array

MEMBER_JSON_CAP = 4096  # oracle JSON includes explicit members only up to this size


def ingest(path) -> Dataset:
    """Read a scored CSV into a Dataset, reporting parse errors with line numbers."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        for required in ("p", "group"):
            if required not in header:
                raise ValueError(f"{path}: missing required column '{required}'")
        p_col = header.index("p")
        g_col = header.index("group")
        y_col = header.index("y") if "y" in header else None
        ps, groups, ys = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}: line {lineno}: expected {len(header)} fields, "
                                 f"got {len(row)}")
            try:
                p = float(row[p_col])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: p={row[p_col]!r} is not a number") from None
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{path}: line {lineno}: p={p} outside [0, 1]")
            if row[g_col] not in ("0", "1"):
                raise ValueError(f"{path}: line {lineno}: group={row[g_col]!r} must be 0 or 1")
            ps.append(p)
            groups.append(int(row[g_col]))
            if y_col is not None:
                if row[y_col] not in ("0", "1"):
                    raise ValueError(f"{path}: line {lineno}: y={row[y_col]!r} must be 0 or 1")
                ys.append(int(row[y_col]))
    if not ps:
        raise ValueError(f"{path}: empty dataset")
    return Dataset(ps, groups, ys if y_col is not None else None)


def emit(dataset: Dataset, path) -> None:
    """Write a Dataset back to scored CSV; probabilities round-trip exactly."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        has_y = dataset.y is not None
        writer.writerow(["p", "group"] + (["y"] if has_y else []))
        for i in range(dataset.n):
            row = [repr(float(dataset.p[i])), int(dataset.group[i])]
            if has_y:
                row.append(int(dataset.y[i]))
            writer.writerow(row)


def _parse_metric(name: str) -> MetricKind:
    return MetricKind(name.lower())


def parse_epsilons(spec: str) -> list[float]:
    """start:stop:step sweep, inclusive of stop; start == stop degenerates to one value."""
    try:
        start, stop, step = (float(part) for part in spec.split(":"))
    except ValueError:
        raise ValueError(f"bad sweep spec {spec!r}, expected start:stop:step") from None
    if start < 0 or stop < start or step <= 0:
        raise ValueError(f"bad sweep spec {spec!r}: need 0 <= start <= stop and step > 0")
    if start == stop:
        return [start]
    count = int(round((stop - start) / step))
    eps = [start + k * step for k in range(count + 1)]
    return [e for e in eps if e <= stop + 1e-12]


def _optimize_report(query: RashomonQuery, metric: MetricKind) -> dict:
    report = (optimize_ppr(query) if metric is MetricKind.PPR
              else optimize_rate(query, metric))
    return {
        "metric": metric.value,
        "epsilon": query.epsilon,
        "initial_disparity": report.initial_disparity,
        "final_disparity": report.final_disparity,
        "flips": report.flip.flipped_indices().tolist(),
        "used_tolerance": report.used_tolerance,
        "gap_bound": report.gap_bound,
    }


def _sample_summary(query: RashomonQuery, config: GibbsConfig) -> dict:
    ds = query.dataset
    samples = gibbs_sample_array(query, config)
    used = samples @ ds.weights / ds.n
    frac = used / query.epsilon if query.epsilon > 0 else np.zeros(len(samples))
    summary = {
        "epsilon": query.epsilon,
        "n_samples": int(samples.shape[0]),
        "flip_frequencies": samples.mean(axis=0).tolist(),
        "mean_flip_fraction": float(samples.mean()),
        "mean_tolerance_used_fraction": float(frac.mean()),
        "tolerance_used_fraction_quantiles": [float(np.percentile(frac, 2.5)),
                                              float(np.percentile(frac, 97.5))],
        "mean_disparity": {},
        "disparity_quantiles": {},
    }
    for metric in MetricKind:
        try:
            disps = np.array([disparity(ds, FlipVector(row), metric) for row in samples])
        except ValueError:
            continue
        summary["mean_disparity"][metric.value] = float(disps.mean())
        summary["disparity_quantiles"][metric.value] = [
            float(np.percentile(disps, 2.5)), float(np.percentile(disps, 97.5))]
    return summary


def _cmd_optimize(args) -> dict:
    ds = ingest(args.input)
    return _optimize_report(RashomonQuery(ds, args.epsilon), _parse_metric(args.metric))


def _cmd_sample(args) -> dict:
    ds = ingest(args.input)
    config = GibbsConfig(iterations=args.iterations, burn_in=args.burn_in,
                         thin=args.thin, seed=args.seed)
    return _sample_summary(RashomonQuery(ds, args.epsilon), config)


def _cmd_flipprobs(args) -> list[list]:
    ds = ingest(args.input)
    sol = flip_probabilities(RashomonQuery(ds, args.epsilon))
    rows = [["index", "p", "w", "q"]]
    for i in range(ds.n):
        rows.append([i, repr(float(ds.p[i])), repr(float(ds.weights[i])),
                     repr(float(sol.q[i]))])
    return rows


def _cmd_size(args) -> list[list]:
    ds = ingest(args.input)
    rows = [["epsilon", "C", "log_base", "log10_size"]]
    for eps in parse_epsilons(args.epsilons):
        if eps == 0.0:
            # exact limit: B(0) = 1; C diverges there and is reported as 0
            rows.append([repr(0.0), repr(0.0), repr(0.0), repr(0.0)])
            continue
        curve = rashomon_base(ds.weights, eps, args.grid_points)
        rows.append([repr(eps), repr(float(curve.c_values[-1])),
                     repr(float(curve.log_base[-1])), repr(float(curve.log10_size[-1]))])
    return rows


def _cmd_oracle(args) -> dict:
    ds = ingest(args.input)
    result = enumerate_rashomon(RashomonQuery(ds, args.epsilon), limit=args.limit)
    payload = {
        "epsilon": args.epsilon,
        "n": result.n,
        "size": result.size,
        "exact_q": result.exact_q.tolist(),
        "exact_min": {m.value: result.exact_min[m] for m in result.exact_min},
        "exact_avg": {m.value: result.exact_avg[m] for m in result.exact_avg},
    }
    if result.size <= MEMBER_JSON_CAP:
        payload["members"] = [result.flip_vector(c).flipped_indices().tolist()
                              for c in result.member_codes]
    else:
        payload["members_omitted"] = True
    return payload


def _cmd_sweep(args) -> list[list]:
    ds = ingest(args.input)
    rows = [["epsilon", "method", "metric", "stat", "value"]]

    def add(eps, method, metric, stat, value):
        rows.append([repr(float(eps)), method, metric, stat, repr(float(value))])

    for k, eps in enumerate(parse_epsilons(args.epsilons)):
        query = RashomonQuery(ds, eps)
        for metric in MetricKind:
            try:
                report = (optimize_ppr(query) if metric is MetricKind.PPR
                          else optimize_rate(query, metric))
            except ValueError:
                continue
            add(eps, "optimal", metric.value, "final_disparity", report.final_disparity)
            add(eps, "optimal", metric.value, "gap_bound", report.gap_bound)
            if eps > 0:
                add(eps, "optimal", metric.value, "tolerance_used_fraction",
                    report.used_tolerance / eps)
        config = GibbsConfig(iterations=args.iterations, burn_in=args.burn_in,
                             thin=args.thin, seed=args.seed ^ k)
        summary = _sample_summary(query, config)
        for metric, mean in summary["mean_disparity"].items():
            lo, hi = summary["disparity_quantiles"][metric]
            add(eps, "gibbs", metric, "mean", mean)
            add(eps, "gibbs", metric, "p2.5", lo)
            add(eps, "gibbs", metric, "p97.5", hi)
        add(eps, "gibbs", "flip_fraction", "mean", summary["mean_flip_fraction"])
        if eps > 0:
            add(eps, "gibbs", "tolerance_used_fraction", "mean",
                summary["mean_tolerance_used_fraction"])
            add(eps, "gibbs", "tolerance_used_fraction", "p2.5",
                summary["tolerance_used_fraction_quantiles"][0])
            add(eps, "gibbs", "tolerance_used_fraction", "p97.5",
                summary["tolerance_used_fraction_quantiles"][1])
        if eps > 0:
            try:
                sol = flip_probabilities(query)
            except (RegimeError, ValueError):
                continue
            for metric in MetricKind:
                try:
                    add(eps, "asymptotic", metric.value, "mean",
                        average_metric(query, metric, sol.q))
                except ValueError:
                    continue
            add(eps, "asymptotic", "flip_fraction", "mean", float(sol.q.mean()))
            add(eps, "asymptotic", "tolerance_used_fraction", "mean",
                expected_tolerance_used(ds.weights, eps, sol.q) / eps)
    return rows


def _cmd_estimate(args) -> None:
    fds = load_feature_csv(args.features)
    p_hat = estimate_bayes_probs(fds, folds=args.folds, seed=args.seed)
    ds = Dataset(p_hat, fds.group, fds.y)
    emit(ds, args.output)


def _cmd_linear_sample(args) -> dict:
    fds = load_feature_csv(args.features)
    p_hat = estimate_bayes_probs(fds, folds=args.folds, seed=args.seed)
    ds = Dataset(p_hat, fds.group, fds.y)
    query = RashomonQuery(ds, args.epsilon)
    run = sample_linear_models(fds, query, n_models=args.n_models, seed=args.seed)
    payload = {
        "epsilon": args.epsilon,
        "n_models": len(run.draws),
        "n_skipped": run.n_skipped,
        "in_set_fraction": run.in_set_fraction,
        "in_set_disparity": {},
    }
    in_set = [d.flip for d in run.draws if d.in_rashomon]
    for metric in MetricKind:
        try:
            disps = np.array([disparity(ds, flip, metric) for flip in in_set])
        except ValueError:
            continue
        if disps.size:
            payload["in_set_disparity"][metric.value] = {
                "mean": float(disps.mean()),
                "p2.5": float(np.percentile(disps, 2.5)),
                "p97.5": float(np.percentile(disps, 97.5)),
            }
    return payload


def _write_json(payload: dict, path) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _write_csv(rows: list[list], path) -> None:
    if path is None or path == "-":
        csv.writer(sys.stdout).writerows(rows)
    else:
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rashomon",
        description="Analyze the largest possible Rashomon set of a scored binary "
                    "classification dataset.")
    parser.add_argument("--version", action="version", version=__version__)
    default_seed = int(os.environ.get("RASHOMON_SEED", "0"))
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_eps=True):
        p.add_argument("--input", required=True, help="scored CSV (p,group[,y])")
        p.add_argument("--output", default="-", help="output path (default stdout)")
        if needs_eps:
            p.add_argument("--epsilon", type=float, required=True)

    p = sub.add_parser("optimize", help="fairest model in R_N(eps) for one metric")
    add_common(p)
    p.add_argument("--metric", choices=[m.value for m in MetricKind], required=True)

    p = sub.add_parser("sample", help="Gibbs-sample R_N(eps) uniformly; summary JSON")
    add_common(p)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--seed", type=int, default=default_seed)

    p = sub.add_parser("flipprobs", help="per-record asymptotic flip probabilities; CSV")
    add_common(p)

    p = sub.add_parser("size", help="set-size curve over an epsilon sweep; CSV")
    add_common(p, needs_eps=False)
    p.add_argument("--epsilons", required=True, help="start:stop:step")
    p.add_argument("--grid-points", type=int, default=256)

    p = sub.add_parser("oracle", help="exhaustively enumerate R_N(eps); JSON")
    add_common(p)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                   help=f"refuse N beyond this (default {DEFAULT_LIMIT})")

    p = sub.add_parser("sweep", help="long-format CSV over eps x method x metric")
    add_common(p, needs_eps=False)
    p.add_argument("--epsilons", required=True, help="start:stop:step")
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--thin", type=int, default=10)
    p.add_argument("--seed", type=int, default=default_seed)

    p = sub.add_parser("estimate", help="features CSV -> cross-validated scored CSV")
    p.add_argument("--features", required=True, help="feature CSV (numeric cols + y,group)")
    p.add_argument("--output", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=default_seed)

    p = sub.add_parser("linear-sample", help="sample penalized logistic models; summary JSON")
    p.add_argument("--features", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-models", type=int, default=1000)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=default_seed)
    return parser


_JSON_COMMANDS = {
    "optimize": _cmd_optimize,
    "sample": _cmd_sample,
    "oracle": _cmd_oracle,
    "linear-sample": _cmd_linear_sample,
}

_CSV_COMMANDS = {
    "flipprobs": _cmd_flipprobs,
    "size": _cmd_size,
    "sweep": _cmd_sweep,
}


def run(args) -> int:
    """Execute one parsed command; returns the process exit status."""
    try:
        if args.command in _JSON_COMMANDS:
            _write_json(_JSON_COMMANDS[args.command](args), args.output)
        elif args.command in _CSV_COMMANDS:
            _write_csv(_CSV_COMMANDS[args.command](args), args.output)
        elif args.command == "estimate":
            _cmd_estimate(args)
        else:  # pragma: no cover - argparse enforces the choices
            raise ValueError(f"unknown command {args.command!r}")
    except RegimeError as exc:
        _fail("regime_violation", f"{exc} (hint: pick a smaller --epsilon)")
        return 1
    except (ValueError, OSError) as exc:
        _fail(type(exc).__name__, str(exc))
        return 1
    return 0


def _fail(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
