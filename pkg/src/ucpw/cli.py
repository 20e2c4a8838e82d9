"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 computation error.
Every failure prints one ``error[<kind>]: <message>`` line to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from pathlib import Path

from . import estimators as est
from . import evaluation as ev
from . import harness, sizing, stats
from .dataset_io import load_weight_profile, parse_dataset, write_dataset
from .domain import DEFAULT_PROFILE
from .errors import ComputationError, DataError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_COMPUTE = 0, 1, 2, 3
WEIGHTS_ENV = "UCPW_WEIGHTS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text, arity=None, name="value"):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None
    if arity is not None and len(vals) != arity:
        raise UsageError(f"{name}: expected {arity} values, got {len(vals)}")
    return vals


def _ints(text, name):
    vals = _floats(text, 3, name)
    if any(v != int(v) or v < 0 for v in vals):
        raise UsageError(f"{name}: counts must be non-negative integers")
    return [int(v) for v in vals]


def _profile(args):
    path = args.weights or os.environ.get(WEIGHTS_ENV)
    return load_weight_profile(path) if path else DEFAULT_PROFILE


def _load(path):
    dataset, notes = parse_dataset(path)
    for n in notes:
        print(f"warning: {n}", file=sys.stderr)
    return dataset


def _emit(args, payload, text):
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps(harness._clean(payload), indent=2, allow_nan=False) + "\n")
    else:
        sys.stdout.write(text)


def cmd_size(args):
    profile = _profile(args)
    actors = _ints(args.actors, "--actors")
    usecases = _ints(args.usecases, "--usecases")
    tech = _floats(args.tech, 13, "--tech")
    env = _floats(args.env, 8, "--env")
    b = sizing.ucp_size(
        sizing.uaw(actors, profile), sizing.uuc(usecases, profile),
        sizing.tcf(tech, profile), sizing.ef(env, profile),
    )
    payload = dict(b.to_dict(), efactor=sizing.efactor(env, profile))
    _emit(args, payload, "".join(f"{k}: {v:.6g}\n" for k, v in payload.items()))


def cmd_estimate(args):
    model = args.model
    profile = _profile(args)
    env = _floats(args.env, 8, "--env") if args.env is not None else None
    if model in est.HISTORY_KINDS and not args.train:
        raise UsageError(f"--model {model} needs --train")
    if model not in ("karner", "naive") and env is None:
        raise UsageError(f"--model {model} needs --env")
    training = _load(args.train) if model in est.HISTORY_KINDS else None
    fitted = est.fit(model, training, profile, args.alpha, args.floor)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", est.ProductivityFloorWarning)
        effort = est.estimate(fitted, args.ucp, env)
    payload = {"model": model, "ucp": args.ucp, "effort": effort,
               "floored": any(issubclass(w.category, est.ProductivityFloorWarning) for w in caught)}
    if model in est.HISTORY_KINDS:
        payload["fit"] = fitted.to_dict()
        if args.save_fit:
            Path(args.save_fit).write_text(json.dumps(fitted.to_dict(), indent=2) + "\n", encoding="utf-8")
    text = f"effort: {effort!r}\n"
    if model in est.HISTORY_KINDS:
        text += "".join(f"{k}: {v!r}\n" for k, v in fitted.params.items())
    if payload["floored"]:
        text += "note: productivity floor applied\n"
    _emit(args, payload, text)


def cmd_benchmark(args):
    dataset = _load(args.dataset)
    models = tuple(m.strip() for m in args.models.split(",")) if args.models else est.KINDS
    try:
        config = harness.BenchmarkConfig(
            models=models, seed=args.seed, runs=args.runs, alpha=args.alpha,
            profile=_profile(args), exact_baseline=args.exact_baseline,
            allow_partial=args.allow_partial,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = harness.benchmark(dataset, config)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    if args.plot_data:
        rows = report.plot_rows(dataset)
        with open(args.plot_data, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render())


def cmd_regress(args):
    dataset = _load(args.dataset)
    profile = _profile(args)
    excluded = []
    if args.drop_outliers:
        efs = [sizing.efactor(r.env_factors, profile) for r in dataset]
        flagged = set(stats.dixon_q(efs, args.alpha)) | set(stats.dixon_q(dataset.productivity, args.alpha))
        excluded = [dataset[i].id for i in sorted(flagged)]
        dataset = dataset.subset(r for i, r in enumerate(dataset) if i not in flagged)
    fitted = est.efreg_fit(dataset, profile, args.floor)
    config = harness.BenchmarkConfig(models=("efreg",), alpha=args.alpha, profile=profile, floor=args.floor)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", est.ProductivityFloorWarning)
        preds = harness.loocv(dataset, "efreg", config)
    payload = {
        "dataset": dataset.name,
        "n": len(dataset),
        "excluded": excluded,
        "intercept": fitted.params["intercept"],
        "slope": fitted.params["slope"],
        "adj_r_squared": fitted.params["adj_r_squared"],
        "loocv": {"mae": ev.mae(preds), "mbre": ev.mbre(preds), "mibre": ev.mibre(preds)},
    }
    p = fitted.params
    text = "".join(f"excluded outlier: {i}\n" for i in excluded)
    text += (f"productivity = {p['intercept']:.4g} {'+' if p['slope'] >= 0 else '-'} "
             f"{abs(p['slope']):.4g} x EFactor   Adj. R^2 = {100 * p['adj_r_squared']:.1f}%\n")
    text += "LOOCV MAE {mae:.1f}  MBRE {mbre:.3f}  MIBRE {mibre:.3f}\n".format(**payload["loocv"])
    _emit(args, payload, text)


def cmd_split(args):
    dataset = _load(args.dataset)
    keys = dataset.tag_keys()
    if args.by not in keys:
        raise DataError(f"unknown tag key {args.by!r}; available: {', '.join(keys) or '(none)'}")
    subsets = harness.split_homogeneous(dataset, args.by, args.min_fraction)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for s in subsets:
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in s.value)
        fname = f"{dataset.name}_{args.by}_{safe}.csv"
        write_dataset(s.dataset, out_dir / fname)
        manifest.append({"value": s.value, "file": fname, "n": len(s.dataset),
                         "below_minimum": s.below_minimum})
    (out_dir / "manifest.json").write_text(
        json.dumps({"dataset": dataset.name, "key": args.by, "subsets": manifest}, indent=2) + "\n",
        encoding="utf-8")
    text = "".join(
        f"{m['value']}: {m['n']} projects -> {m['file']}{' (below minimum size)' if m['below_minimum'] else ''}\n"
        for m in manifest)
    _emit(args, {"key": args.by, "subsets": manifest}, text)


def cmd_describe(args):
    dataset = _load(args.dataset)
    desc = harness.describe_dataset(dataset, _profile(args))
    payload = desc.to_dict()
    grubbs = stats.grubbs(dataset.productivity, args.alpha)
    payload["grubbs_productivity_outliers"] = [dataset[i].id for i in grubbs]
    text = harness.render_description(desc)
    text += f"Grubbs outliers in productivity (alpha={args.alpha}): {', '.join(payload['grubbs_productivity_outliers']) or 'none'}\n"
    _emit(args, payload, text)


def build_parser():
    p = _Parser(prog="ucpw", description="Use Case Points effort estimation toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, dataset=False):
        sp.add_argument("--weights", help=f"JSON weight profile (default: ${WEIGHTS_ENV})")
        sp.add_argument("--json", action="store_true", help="structured output")
        if dataset:
            sp.add_argument("--dataset", required=True)

    sp = sub.add_parser("size", help="compute UCP from counts and ratings")
    common(sp)
    sp.add_argument("--actors", required=True, help="simple,average,complex")
    sp.add_argument("--usecases", required=True, help="simple,average,complex")
    sp.add_argument("--tech", required=True, help="13 comma-separated ratings")
    sp.add_argument("--env", required=True, help="8 comma-separated ratings")
    sp.set_defaults(func=cmd_size)

    sp = sub.add_parser("estimate", help="estimate effort for one project")
    common(sp)
    sp.add_argument("--model", required=True, choices=est.KINDS)
    sp.add_argument("--ucp", required=True, type=float)
    sp.add_argument("--env", help="8 comma-separated ratings")
    sp.add_argument("--train", help="training dataset CSV (history-based models)")
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--floor", type=float, default=est.DEFAULT_FLOOR)
    sp.add_argument("--save-fit", help="write the fitted model as JSON")
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("benchmark", help="LOOCV benchmark of several models")
    common(sp, dataset=True)
    sp.add_argument("--models", help="comma-separated subset of " + ",".join(est.KINDS))
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--runs", type=int, default=1000)
    sp.add_argument("--exact-baseline", action="store_true")
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--plot-data", help="write actual vs estimated productivity CSV here")
    sp.add_argument("--allow-partial", action="store_true")
    sp.set_defaults(func=cmd_benchmark)

    sp = sub.add_parser("regress", help="productivity ~ EFactor regression")
    common(sp, dataset=True)
    sp.add_argument("--drop-outliers", action="store_true")
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--floor", type=float, default=est.DEFAULT_FLOOR)
    sp.set_defaults(func=cmd_regress)

    sp = sub.add_parser("split", help="split a dataset by a tag column")
    common(sp, dataset=True)
    sp.add_argument("--by", required=True)
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--min-fraction", type=float, default=0.5)
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("describe", help="descriptive statistics and correlations")
    common(sp, dataset=True)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.set_defaults(func=cmd_describe)
    return p


def _fail(code, kind, exc):
    msg = " ".join(str(exc).split())
    print(f"error[{kind}]: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", exc)
    except (DataError, OSError) as exc:
        return _fail(EXIT_DATA, "data", exc)
    except (ComputationError, ArithmeticError) as exc:
        return _fail(EXIT_COMPUTE, "computation", exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
