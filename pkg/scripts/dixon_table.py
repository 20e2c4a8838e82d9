"""Regenerate the Dixon Q critical-value table by simulation under normality.

Prints a Python literal suitable for pasting into ``ucpw.stats``.  The ratio
used at each sample size follows Dixon's scheme: r10 for n=3..7, r11 for
8..10, r21 for 11..13 and r22 for 14..30.  Critical values are the upper
quantile of a single-tail ratio at alpha/2, i.e. two-sided tests at alpha.
"""
import argparse

import numpy as np


def upper_ratio(xs):
    """Upper-tail Dixon ratio for rows of an already sorted array."""
    n = xs.shape[1]
    if n <= 7:
        num, den = xs[:, -1] - xs[:, -2], xs[:, -1] - xs[:, 0]
    elif n <= 10:
        num, den = xs[:, -1] - xs[:, -2], xs[:, -1] - xs[:, 1]
    elif n <= 13:
        num, den = xs[:, -1] - xs[:, -3], xs[:, -1] - xs[:, 1]
    else:
        num, den = xs[:, -1] - xs[:, -3], xs[:, -1] - xs[:, 2]
    return num / den


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--draws", type=int, default=2_000_000)
    parser.add_argument("--seed", type=int, default=20110101)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    alphas = (0.10, 0.05, 0.01)
    chunk = 250_000
    print("{")
    for n in range(3, 31):
        stats = []
        for _ in range(args.draws // chunk):
            xs = np.sort(rng.standard_normal((chunk, n)), axis=1)
            stats.append(upper_ratio(xs))
        stats = np.concatenate(stats)
        qs = np.quantile(stats, [1 - a / 2 for a in alphas])
        print(f"    {n}: ({qs[0]:.3f}, {qs[1]:.3f}, {qs[2]:.3f}),")
    print("}")


if __name__ == "__main__":
    main()
