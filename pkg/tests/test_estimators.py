import json
import math
import statistics

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import int_ratings, random_dataset
from ucpw import estimators as est
from ucpw import stats
from ucpw.domain import Dataset, ProjectRecord
from ucpw.errors import DomainError, FitError
from ucpw.sizing import efactor

env8 = st.tuples(*[int_ratings] * 8)


def project(i, ucp, effort, env=(3,) * 8):
    return ProjectRecord(id=f"p{i}", ucp=ucp, effort=effort, env_factors=env)


def nassif_data(alpha=8.16, beta=1.17, n=12, seed=4):
    rng = np.random.default_rng(seed)
    recs = []
    for i in range(n):
        env = tuple(rng.integers(0, 6, 8).astype(float))
        ucp = float(rng.uniform(20, 300))
        p = est.nassif_productivity_factor(efactor(env))
        recs.append(project(i, ucp, alpha / p * ucp ** beta, env))
    return Dataset("eq8", tuple(recs))


# -- karner / S&W ------------------------------------------------------------

@pytest.mark.parametrize("ucp, pr, effort", [(100, 20, 2000), (1, 1, 1), (75, 20, 1500)])
def test_karner(ucp, pr, effort):
    assert est.karner_estimate(ucp, pr) == effort


def test_karner_domain():
    with pytest.raises(DomainError):
        est.karner_estimate(0)
    with pytest.raises(DomainError):
        est.karner_estimate(10, -1)


@pytest.mark.parametrize("env, count", [((0,) * 8, 6), ((3,) * 8, 0), ((0, 0, 5, 5, 5, 5, 5, 5), 4)])
def test_sw_total_count(env, count):
    assert est.sw_total_count(env) == count


@pytest.mark.parametrize("env, effort", [
    ((3,) * 8, 200),                    # count 0
    ((0, 0, 5, 5, 5, 5, 5, 5), 280),    # count 4
    ((0,) * 8, 360),                    # count 6
])
def test_sw_estimate(env, effort):
    assert est.sw_estimate(10, env) == effort


@given(st.floats(0.1, 1e4), env8)
def test_sw_image(ucp, env):
    ratio = est.sw_estimate(ucp, env) / ucp
    assert any(math.isclose(ratio, level, rel_tol=1e-12) for level in est.SW_LEVELS)


# -- Nassif ------------------------------------------------------------------

@pytest.mark.parametrize("s, p", [(-1, 0.4), (0, 0.7), (9.99, 0.7), (10, 1.0), (15, 1.0), (20, 1.3), (25, 1.3)])
def test_nassif_productivity_factor(s, p):
    assert est.nassif_productivity_factor(s) == p


def test_nassif_recovers_published_coefficients():
    fit = est.nassif_fit(nassif_data())
    assert fit.params["alpha"] == pytest.approx(8.16, abs=1e-6)
    assert fit.params["beta"] == pytest.approx(1.17, abs=1e-6)


def test_nassif_linear_special_case():
    # env all 2: prod_sum = 2 * 4.5 = 9 -> P = 0.7; choose env giving P = 1 instead
    env = (5, 5, 5, 0, 0, 0, 0, 0)  # 7.5 + 2.5 + 5 = 15
    assert est.nassif_productivity_factor(efactor(env)) == 1.0
    d = Dataset("lin", tuple(project(i, u, 10 * u, env) for i, u in enumerate([10, 20, 40, 80])))
    fit = est.nassif_fit(d)
    assert fit.params["alpha"] == pytest.approx(10)
    assert fit.params["beta"] == pytest.approx(1)
    assert est.nassif_estimate(fit, 7, env) == pytest.approx(70)


def test_nassif_fit_equals_ols_on_transformed_series():
    d = random_dataset(11, n=5)
    fit = est.nassif_fit(d)
    xs = [math.log(r.ucp) for r in d]
    ys = [math.log(r.effort * est.nassif_productivity_factor(efactor(r.env_factors))) for r in d]
    line = stats.ols_simple(xs, ys)
    assert fit.params["alpha"] == pytest.approx(math.exp(line.intercept), rel=1e-12)
    assert fit.params["beta"] == pytest.approx(line.slope, rel=1e-12)


def test_nassif_published_coefficients_direct():
    fit = est.FittedEstimator("nassif", {"alpha": 8.16, "beta": 1.17})
    env = (5, 5, 5, 0, 0, 0, 0, 0)  # P = 1.0
    assert est.nassif_estimate(fit, 100, env) == pytest.approx(8.16 * 100 ** 1.17)
    assert est.nassif_estimate(fit, 100, env) == pytest.approx(1785.2135, abs=1e-4)


def test_nassif_halving_p_doubles_estimate():
    fit = est.FittedEstimator("nassif", {"alpha": 3.0, "beta": 1.1})
    p14 = est.nassif_estimate(fit, 50, (0, 0, 0, 0, 0, 0, 5, 5))  # prod_sum -10 -> 0.4
    p07 = est.nassif_estimate(fit, 50, (1, 1, 1, 1, 1, 1, 0, 0))  # 6.5 -> 0.7
    assert p14 / p07 == pytest.approx(0.7 / 0.4)


def test_nassif_reproduces_exact_training_data():
    d = nassif_data(alpha=5.0, beta=0.9)
    fit = est.nassif_fit(d)
    for r in d:
        assert est.nassif_estimate(fit, r.ucp, r.env_factors) == pytest.approx(r.effort, rel=1e-9)


def test_nassif_fit_errors():
    with pytest.raises(FitError):
        est.nassif_fit(Dataset("s", (project(0, 10, 100), project(1, 20, 200))))
    with pytest.raises(FitError):
        est.nassif_fit(Dataset("s", tuple(project(i, 10, 100 + i) for i in range(4))))


# -- R2M ---------------------------------------------------------------------

def test_r2m_mean_and_perfect_correlation():
    # pairs of identical env vectors share productivity, so every nearest neighbour matches
    recs = []
    for i, (env, prod) in enumerate([((1,) * 8, 10), ((1,) * 8, 10), ((4,) * 8, 30), ((4,) * 8, 30)]):
        recs.append(project(i, 10, 10 * prod, env))
    fit = est.r2m_fit(Dataset("d", tuple(recs)))
    assert fit.params["r"] == pytest.approx(1)
    assert fit.params["h"] == pytest.approx(20)


def test_r2m_h_is_mean():
    d = Dataset("d", tuple(project(i, 10, 10 * p, (i,) * 8) for i, p in enumerate([10, 20, 30])))
    assert est.r2m_fit(d).params["h"] == 20


def test_r2m_r_matches_direct_pearson_and_clamp():
    d = random_dataset(21, n=12)
    fit = est.r2m_fit(d)
    recs = d.records
    analog = []
    for i, r in enumerate(recs):
        dists = [(sum((a - b) ** 2 for a, b in zip(r.env_factors, o.env_factors)), j)
                 for j, o in enumerate(recs) if j != i]
        analog.append(recs[min(dists)[1]].productivity)
    raw = float(np.corrcoef(analog, d.productivity)[0, 1])
    assert fit.params["r"] == pytest.approx(min(1.0, max(0.0, raw)), abs=1e-12)
    assert 0 <= fit.params["r"] <= 1


def test_r2m_constant_productivity_gives_zero_r():
    d = Dataset("d", tuple(project(i, 10 + i, 15 * (10 + i), (i % 5,) * 8) for i in range(5)))
    assert est.r2m_fit(d).params["r"] == 0


def test_r2m_estimate_closed_forms():
    train = (project(0, 10, 300, (2,) * 8), project(1, 10, 100, (5,) * 8))
    near = (2,) * 8  # nearest is p0, productivity 30
    for r, expected in [(1.0, 30 * 10), (0.0, 20 * 10), (0.5, 250)]:
        fit = est.FittedEstimator("r2m", {"h": 20.0, "r": r}, training=train)
        assert est.r2m_estimate(fit, 10, near) == pytest.approx(expected)


def test_r2m_tie_breaks_to_first_record():
    train = (project(0, 10, 100, (2,) * 8), project(1, 10, 400, (4,) * 8))
    fit = est.FittedEstimator("r2m", {"h": 25.0, "r": 1.0}, training=train)
    assert est.r2m_estimate(fit, 1, (3,) * 8) == 10


def test_r2m_fit_needs_three():
    with pytest.raises(FitError):
        est.r2m_fit(Dataset("d", (project(0, 1, 1), project(1, 1, 2))))


@given(st.floats(0, 1), st.floats(1, 50), st.floats(1, 50), st.floats(0.1, 1000))
def test_r2m_is_convex_combination(r, pdr_c, h, ucp):
    y = est.r2m_adjusted_productivity(pdr_c, h, r) * ucp
    lo, hi = sorted((pdr_c * ucp, h * ucp))
    assert lo * (1 - 1e-12) <= y <= hi * (1 + 1e-12)


def test_r2m_permutation_invariant_with_distinct_distances():
    d = random_dataset(31, n=10)
    rev = Dataset("rev", tuple(reversed(d.records)))
    a, b = est.r2m_fit(d), est.r2m_fit(rev)
    assert a.params["h"] == pytest.approx(b.params["h"])
    query = (2.5, 1.5, 3.5, 0.5, 4.5, 2.5, 1.5, 3.5)
    dists = sorted(sum((x - y) ** 2 for x, y in zip(r.env_factors, query)) for r in d)
    assert dists[0] < dists[1]
    assert est.r2m_estimate(a, 50, query) == pytest.approx(
        est.r2m_estimate(est.FittedEstimator("r2m", a.params, b.training), 50, query))


# -- naive -------------------------------------------------------------------

def prod_dataset(prods):
    return Dataset("p", tuple(project(i, 10, 10 * p, (i % 6,) * 8) for i, p in enumerate(prods)))


def test_naive_normal_uses_mean():
    prods = np.random.default_rng(8).normal(20, 3, 40).round(3)
    fit = est.naive_fit(prod_dataset(prods))
    assert not stats.ks_normality(prods).reject
    assert fit.params["used_mean"] is True
    assert fit.params["pr"] == pytest.approx(statistics.mean(prods.tolist()))


def test_naive_skewed_uses_median():
    prods = (np.random.default_rng(9).exponential(5, 60) + 1).round(3)
    fit = est.naive_fit(prod_dataset(prods))
    assert stats.ks_normality(prods).reject
    assert fit.params["used_mean"] is False
    assert fit.params["pr"] == pytest.approx(statistics.median(prods.tolist()))


def test_naive_small_sample_uses_median():
    fit = est.naive_fit(prod_dataset([10, 20, 30]))
    assert fit.params["pr"] == 20 and fit.params["used_mean"] is False


@pytest.mark.parametrize("pr, ucp, effort", [(20, 10, 200), (1, 1, 1), (14, 75, 1050)])
def test_naive_estimate(pr, ucp, effort):
    assert est.naive_estimate(est.FittedEstimator("naive", {"pr": pr}), ucp) == effort


def test_naive_estimate_with_fixture_median():
    fit = est.naive_fit(prod_dataset([4, 9, 14, 14, 35]))
    if not fit.params["used_mean"]:
        assert est.naive_estimate(fit, 75) == 1050


# -- EFactor regression ------------------------------------------------------

def efreg_data(intercept, slope, n=8, seed=3):
    rng = np.random.default_rng(seed)
    recs = []
    for i in range(n):
        env = tuple(rng.integers(0, 6, 8).astype(float))
        prod = intercept + slope * efactor(env)
        recs.append(project(i, 10, 10 * prod, env))
    return Dataset("lin", tuple(recs))


def test_efreg_exact_line():
    fit = est.efreg_fit(efreg_data(5, 2))
    assert fit.params["intercept"] == pytest.approx(5)
    assert fit.params["slope"] == pytest.approx(2)
    assert fit.params["adj_r_squared"] == pytest.approx(1)


def test_efreg_matches_normal_equations():
    d = random_dataset(41, n=15)
    xs = np.array([efactor(r.env_factors) for r in d])
    X = np.column_stack([np.ones(len(xs)), xs])
    a, b = np.linalg.solve(X.T @ X, X.T @ np.array(d.productivity))
    fit = est.efreg_fit(d)
    assert fit.params["intercept"] == pytest.approx(a, abs=1e-9)
    assert fit.params["slope"] == pytest.approx(b, abs=1e-9)


def test_efreg_constant_efactor():
    d = Dataset("c", tuple(project(i, 10, 100 + i) for i in range(4)))
    with pytest.raises(FitError):
        est.efreg_fit(d)


def test_efreg_estimate_examples():
    fit = est.FittedEstimator("efreg", {"intercept": 5.0, "slope": 2.0})
    env = (0, 0, 4, 0, 0, 0, 0, 0)  # EFactor 4
    assert est.efreg_estimate(fit, 10, env) == pytest.approx(130)
    flat = est.FittedEstimator("efreg", {"intercept": 17.0, "slope": 0.0})
    assert est.efreg_estimate(flat, 9, env) == est.karner_estimate(9, 17.0)


def test_efreg_floor_warns():
    fit = est.FittedEstimator("efreg", {"intercept": -3.0, "slope": 0.0, "floor": 1.0})
    with pytest.warns(est.ProductivityFloorWarning):
        assert est.efreg_estimate(fit, 10, (0,) * 8) == 10
    assert est.efreg_productivity(fit, (0,) * 8) == (1.0, True)


# -- uniform interface -------------------------------------------------------

@pytest.mark.parametrize("kind", est.KINDS)
def test_estimates_positive_and_increasing_in_ucp(kind):
    d = random_dataset(51, n=12)
    fitted = est.fit(kind, d)
    env = d[0].env_factors
    small, big = est.estimate(fitted, 10, env), est.estimate(fitted, 20, env)
    assert 0 < small < big
    if kind != "nassif":
        assert big == pytest.approx(2 * small)
    else:
        assert big / small == pytest.approx(2 ** fitted.params["beta"])


@pytest.mark.parametrize("kind", est.KINDS)
def test_serialization_round_trip(kind):
    d = random_dataset(52, n=10)
    fitted = est.fit(kind, d)
    doc = json.loads(json.dumps(fitted.to_dict()))
    again = est.FittedEstimator.from_dict(doc)
    for r in d:
        assert est.estimate(again, r.ucp, r.env_factors) == est.estimate(fitted, r.ucp, r.env_factors)


def test_history_models_need_training():
    with pytest.raises(Exception):
        est.fit("r2m")
    with pytest.raises(ValueError):
        est.fit("cocomo")
