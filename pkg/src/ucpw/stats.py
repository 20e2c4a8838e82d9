"""Statistical primitives: moments, correlation, simple regression and tests.

All functions are deterministic.  The Lilliefors p-value uses a Monte Carlo
null distribution drawn from a fixed internal seed and cached per sample
size.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats as sps

from .errors import DegenerateSeriesError, InsufficientDataError, UnsupportedSizeError

KS_NULL_DRAWS = 4000
KS_SEED = 19670618


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    stdev: float
    min: float
    median: float
    max: float
    skewness: float
    kurtosis: float

    def to_dict(self):
        return {k: getattr(self, k) for k in
                ("n", "mean", "stdev", "min", "median", "max", "skewness", "kurtosis")}


@dataclass(frozen=True)
class RegressionFit:
    intercept: float
    slope: float
    r_squared: float
    adj_r_squared: float
    n: int

    def predict(self, x):
        return self.intercept + self.slope * x

    def to_dict(self):
        return {"intercept": self.intercept, "slope": self.slope, "r_squared": self.r_squared,
                "adj_r_squared": self.adj_r_squared, "n": self.n}


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    reject: bool

    __test__ = False  # keep pytest from collecting this class

    def to_dict(self):
        return {"statistic": self.statistic, "p_value": self.p_value, "reject": self.reject}


def _result(statistic, p, alpha):
    p = min(1.0, max(0.0, float(p)))
    return TestResult(float(statistic), p, p < alpha)


def _array(xs, name="xs"):
    a = np.asarray(xs, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return a


def describe(xs) -> DescriptiveStats:
    """Sample moments with n-1 stdev, adjusted Fisher-Pearson skewness and
    excess kurtosis (a normal sample gives roughly 0).

    Skewness needs n >= 3 and kurtosis n >= 4; below that, or for a constant
    sample, they are NaN.
    """
    a = _array(xs)
    n = a.size
    if n < 2:
        raise InsufficientDataError(f"describe needs at least 2 values, got {n}")
    sd = float(a.std(ddof=1))
    d = a - a.mean()
    m2 = float(np.mean(d ** 2))
    skew = kurt = math.nan
    if m2 > 0.0:
        g1 = float(np.mean(d ** 3)) / m2 ** 1.5
        g2 = float(np.mean(d ** 4)) / m2 ** 2 - 3.0
        if n >= 3:
            skew = math.sqrt(n * (n - 1)) / (n - 2) * g1
        if n >= 4:
            kurt = (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * g2 + 6.0)
    return DescriptiveStats(
        n=n,
        mean=float(a.mean()),
        stdev=sd,
        min=float(a.min()),
        median=float(np.median(a)),
        max=float(a.max()),
        skewness=skew,
        kurtosis=kurt,
    )


def pearson(xs, ys, alpha: float = 0.05) -> TestResult:
    """Pearson's r with a two-sided t-test p-value (n-2 degrees of freedom)."""
    x, y = _array(xs), _array(ys, "ys")
    if x.size != y.size:
        raise ValueError("xs and ys must have equal length")
    n = x.size
    if n < 3:
        raise InsufficientDataError(f"pearson needs at least 3 pairs, got {n}")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSeriesError("correlation undefined for a constant series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = 2.0 * sps.t.sf(abs(t), n - 2)
    return _result(r, p, alpha)


def ols_simple(xs, ys) -> RegressionFit:
    """Least-squares line y = a + b·x with R² and adjusted R²."""
    x, y = _array(xs), _array(ys, "ys")
    if x.size != y.size:
        raise ValueError("xs and ys must have equal length")
    n = x.size
    if n < 3:
        raise InsufficientDataError(f"regression needs at least 3 points, got {n}")
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateSeriesError("singular fit: predictor is constant")
    dy = y - y.mean()
    slope = float(dx @ dy) / sxx
    intercept = float(y.mean() - slope * x.mean())
    syy = float(dy @ dy)
    if syy == 0.0:
        r2 = 0.0
    else:
        resid = y - intercept - slope * x
        r2 = max(0.0, 1.0 - float(resid @ resid) / syy)
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - 2)
    return RegressionFit(intercept, slope, r2, adj, n)


def ks_statistic(xs, cdf) -> float:
    """Two-sided KS distance between the ECDF of ``xs`` and ``cdf``."""
    a = np.sort(_array(xs))
    n = a.size
    f = cdf(a)
    d_plus = np.max(np.arange(1, n + 1) / n - f)
    d_minus = np.max(f - np.arange(0, n) / n)
    return float(max(d_plus, d_minus))


def _lilliefors_stat(a):
    sd = a.std(ddof=1)
    return ks_statistic(a, lambda v: sps.norm.cdf(v, loc=a.mean(), scale=sd))


@lru_cache(maxsize=64)
def _lilliefors_null(n):
    rng = np.random.default_rng([KS_SEED, n])
    z = np.sort(rng.standard_normal((KS_NULL_DRAWS, n)), axis=1)
    mu = z.mean(axis=1, keepdims=True)
    sd = z.std(axis=1, ddof=1, keepdims=True)
    f = sps.norm.cdf((z - mu) / sd)
    d_plus = (np.arange(1, n + 1) / n - f).max(axis=1)
    d_minus = (f - np.arange(0, n) / n).max(axis=1)
    out = np.maximum(d_plus, d_minus)
    out.setflags(write=False)
    return out


def ks_normality(xs, alpha: float = 0.05) -> TestResult:
    """KS test against a normal with mean and stdev estimated from ``xs``.

    Because the parameters come from the sample, the p-value is taken from a
    simulated Lilliefors null distribution rather than the KS table.
    """
    a = _array(xs)
    n = a.size
    if n < 4:
        raise InsufficientDataError(f"ks_normality needs at least 4 values, got {n}")
    if a.std() == 0.0:
        # a point mass is as far from normal as it gets
        return TestResult(1.0, 0.0, True)
    d = _lilliefors_stat(a)
    null = _lilliefors_null(n)
    p = (np.count_nonzero(null >= d - 1e-12) + 1) / (null.size + 1)
    return _result(d, p, alpha)


def rankdata(values):
    """Mid-ranks (1-based) with ties averaged."""
    return sps.rankdata(values, method="average")


@lru_cache(maxsize=256)
def _exact_u_distribution(n1, n2):
    counts = {}
    for combo in itertools.combinations(range(1, n1 + n2 + 1), n1):
        u = sum(combo) - n1 * (n1 + 1) // 2
        counts[u] = counts.get(u, 0) + 1
    return counts


def mann_whitney(xs, ys, alpha: float = 0.05) -> TestResult:
    """Two-sided Mann-Whitney U test; the statistic is U for ``xs``.

    Exact p-value by enumerating rank assignments when n1+n2 <= 12 and there
    are no ties, otherwise the normal approximation with tie and continuity
    corrections.
    """
    x, y = _array(xs), _array(ys, "ys")
    n1, n2 = x.size, y.size
    if n1 == 0 or n2 == 0:
        raise InsufficientDataError("mann_whitney needs two non-empty samples")
    ranks = rankdata(np.concatenate([x, y]))
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    n = n1 + n2
    _, tie_counts = np.unique(np.concatenate([x, y]), return_counts=True)
    has_ties = bool(np.any(tie_counts > 1))

    if n <= 12 and not has_ties:
        dist = _exact_u_distribution(n1, n2)
        total = sum(dist.values())
        ui = round(u)
        lower = sum(c for k, c in dist.items() if k <= ui) / total
        upper = sum(c for k, c in dist.items() if k >= ui) / total
        return _result(u, 2.0 * min(lower, upper), alpha)

    mu = n1 * n2 / 2.0
    tie_term = float(np.sum(tie_counts ** 3 - tie_counts)) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0.0:
        return _result(u, 1.0, alpha)
    z = max(0.0, abs(u - mu) - 0.5) / math.sqrt(var)
    return _result(u, 2.0 * sps.norm.sf(z), alpha)


def grubbs_critical(n: int, alpha: float) -> float:
    """Two-sided Grubbs critical value for sample size ``n``."""
    t = sps.t.isf(alpha / (2 * n), n - 2)
    return (n - 1) / math.sqrt(n) * math.sqrt(t * t / (n - 2 + t * t))


def grubbs(xs, alpha: float = 0.05) -> list[int]:
    """Iterative two-sided Grubbs test.

    Repeatedly removes the point farthest from the mean while its G statistic
    exceeds the critical value.  Returns indices into ``xs`` in removal order.
    """
    a = _array(xs)
    if a.size < 3:
        raise InsufficientDataError(f"grubbs needs at least 3 values, got {a.size}")
    remaining = list(range(a.size))
    removed = []
    while len(remaining) >= 3:
        vals = a[remaining]
        sd = vals.std(ddof=1)
        if sd == 0.0:
            break
        dev = np.abs(vals - vals.mean())
        j = int(np.argmax(dev))
        if dev[j] / sd <= grubbs_critical(len(remaining), alpha):
            break
        removed.append(remaining.pop(j))
    return removed


# Two-sided critical values indexed by n, columns alpha = 0.10, 0.05, 0.01.
# n = 3..7 (r10) are the published Rorabacher (1991) values; the rest were
# simulated under normality with scripts/dixon_table.py (2e6 draws per n).
DIXON_ALPHAS = (0.10, 0.05, 0.01)
DIXON_CRITICAL = {
    3: (0.941, 0.970, 0.994),
    4: (0.765, 0.829, 0.926),
    5: (0.642, 0.710, 0.821),
    6: (0.560, 0.625, 0.740),
    7: (0.507, 0.568, 0.680),
    8: (0.554, 0.615, 0.722),
    9: (0.511, 0.570, 0.675),
    10: (0.478, 0.535, 0.637),
    11: (0.575, 0.622, 0.708),
    12: (0.546, 0.592, 0.676),
    13: (0.521, 0.566, 0.650),
    14: (0.546, 0.591, 0.672),
    15: (0.524, 0.569, 0.650),
    16: (0.505, 0.550, 0.630),
    17: (0.489, 0.532, 0.611),
    18: (0.474, 0.517, 0.595),
    19: (0.462, 0.504, 0.581),
    20: (0.450, 0.492, 0.568),
    21: (0.440, 0.481, 0.555),
    22: (0.430, 0.471, 0.546),
    23: (0.421, 0.461, 0.535),
    24: (0.413, 0.453, 0.526),
    25: (0.406, 0.445, 0.518),
    26: (0.399, 0.438, 0.510),
    27: (0.393, 0.431, 0.503),
    28: (0.386, 0.425, 0.496),
    29: (0.381, 0.419, 0.489),
    30: (0.376, 0.414, 0.484),
}


def dixon_ratios(sorted_xs):
    """(low-tail, high-tail) Dixon ratios for an ascending sequence.

    Uses r10 for n = 3..7, r11 for 8..10, r21 for 11..13 and r22 for 14..30.
    """
    x = list(sorted_xs)
    n = len(x)
    if n <= 7:
        gap, far = 1, 0
    elif n <= 10:
        gap, far = 1, 1
    elif n <= 13:
        gap, far = 2, 1
    else:
        gap, far = 2, 2
    low_den = x[n - 1 - far] - x[0]
    high_den = x[n - 1] - x[far]
    low = (x[gap] - x[0]) / low_den if low_den > 0 else 0.0
    high = (x[n - 1] - x[n - 1 - gap]) / high_den if high_den > 0 else 0.0
    return low, high


def dixon_critical(n: int, alpha: float) -> float:
    if n not in DIXON_CRITICAL:
        raise UnsupportedSizeError(f"dixon_q supports 3 <= n <= 30, got {n}")
    for i, a in enumerate(DIXON_ALPHAS):
        if math.isclose(alpha, a):
            return DIXON_CRITICAL[n][i]
    raise UnsupportedSizeError(f"dixon_q alpha must be one of {DIXON_ALPHAS}, got {alpha}")


def dixon_q(xs, alpha: float = 0.05) -> list[int]:
    """Dixon's Q test on both extremes; at most one outlier per tail.

    Returns indices into ``xs`` (low tail first).  Ties at an extreme resolve
    to the first occurrence.
    """
    a = _array(xs)
    crit = dixon_critical(a.size, alpha)
    order = sorted(range(a.size), key=lambda i: (a[i], i))
    low, high = dixon_ratios(a[order])
    flagged = []
    if low > crit:
        flagged.append(order[0])
    if high > crit:
        top = a[order[-1]]
        flagged.append(min(i for i in order if a[i] == top))
    return flagged
