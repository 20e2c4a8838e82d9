"""Benchmark every model on the bundled datasets and their homogeneous subsets.

Writes one JSON report per (dataset, subset) plus a summary table of MAE and
SA against random guessing.  Pass --data to use other CSV files, e.g. the
transcribed Ochodek dataset.
"""
import argparse
import warnings
from importlib import resources
from pathlib import Path

from ucpw import estimators as est
from ucpw.dataset_io import load_dataset
from ucpw.harness import BenchmarkConfig, benchmark, split_homogeneous

BUNDLED = ("ochodek_surrogate.csv", "industrial_surrogate.csv", "education_surrogate.csv")
SPLIT_KEYS = ("origin", "language", "app_type")


def run(dataset, config, out_dir, rows):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", est.ProductivityFloorWarning)
        report = benchmark(dataset, config)
    safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in dataset.name)
    (out_dir / f"{safe}.json").write_text(report.to_json(), encoding="utf-8")
    for m, r in report.models.items():
        rows.append((dataset.name, len(dataset), m, r.mae, r.sa_vs_guessing))


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--data", type=Path, nargs="*", help="dataset CSVs (default: bundled surrogates)")
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--runs", type=int, default=1000)
    args = parser.parse_args()

    paths = args.data or [Path(resources.files("ucpw") / "data" / name) for name in BUNDLED]
    args.out.mkdir(parents=True, exist_ok=True)
    config = BenchmarkConfig(seed=args.seed, runs=args.runs)
    rows = []
    for path in paths:
        dataset = load_dataset(path)
        run(dataset, config, args.out, rows)
        keys = [k for k in SPLIT_KEYS if k in dataset.tag_keys()]
        for key in keys:
            for sub in split_homogeneous(dataset, key):
                # subsets under half the parent are too small to say much
                if sub.below_minimum or len(sub.dataset) == len(dataset):
                    continue
                run(sub.dataset, config, args.out, rows)

    print(f"{'dataset':40s} {'n':>3s} {'model':7s} {'MAE':>9s} {'SA':>7s}")
    for name, n, m, mae, sa in rows:
        sa_txt = "-" if sa is None else f"{sa:.3f}"
        print(f"{name:40s} {n:3d} {m:7s} {mae:9.1f} {sa_txt:>7s}")


if __name__ == "__main__":
    main()
