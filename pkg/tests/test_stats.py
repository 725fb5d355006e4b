"""Tests for the OLS fit, its diagnostics, and the crossover estimators."""

import dataclasses
import math

import mpmath as mp
import numpy as np
import pytest
from scipy.optimize import brentq

from sortlab import (
    BenchRecord,
    BracketError,
    DesignRow,
    DiffModel,
    FitError,
    build_design,
    crossover_empirical,
    crossover_model,
    diagnostics_series,
    diff_model,
    f_pvalue,
    load_table1,
    nlog2n,
    ols_fit,
    predict,
    t_pvalue_two_sided,
)


@pytest.fixture(scope="module")
def table1():
    return load_table1()


@pytest.fixture(scope="module")
def fit_k(table1):
    return ols_fit(build_design(table1, "ksort"), label="ksort")


@pytest.fixture(scope="module")
def fit_h(table1):
    return ols_fit(build_design(table1, "heapsort"), label="heapsort")


# --- design construction ----------------------------------------------------


def test_build_design_recomputes_x1(table1):
    tampered = [dataclasses.replace(r, nlog2n=999.0) for r in table1]
    design = build_design(tampered, "ksort")
    assert len(design) == 10
    assert all(row.x1 == nlog2n(row.n) for row in design)
    assert all(row.x2 == float(row.n) for row in design)


def test_build_design_requires_wall_time_means():
    rec = BenchRecord(algorithm="ksort", n=100, nlog2n=nlog2n(100), reps=1,
                      comparisons_mean=512.0)
    with pytest.raises(FitError):
        build_design([rec], "ksort")


def test_build_design_unknown_algorithm(table1):
    with pytest.raises(FitError):
        build_design(table1, "timsort")


# --- the reference fits -----------------------------------------------------
# Full-precision values frozen from this implementation; drift of any digit
# is a behavior change.  Print-precision agreement lives in the acceptance
# suite.


def test_fit_k_reference_values(fit_k):
    approx = lambda v: pytest.approx(v, rel=1e-10)
    assert fit_k.b0 == approx(0.7515939687904024)
    assert fit_k.b1 == approx(4.799069449802201e-07)
    assert fit_k.b2 == approx(-1.0479686412227358e-05)
    assert fit_k.s == approx(0.49913278567912955)
    assert fit_k.press == approx(8.444509064967468)
    assert fit_k.vif == approx(2225.5792546375656)
    assert fit_k.anova.f == approx(112.74396319633915)
    assert fit_k.seq_ss.ss_x1_first == approx(50.941913042661604)
    assert fit_k.seq_ss.ss_x2_added == approx(5.234691777159739)
    assert fit_k.obs[9].st_resid == approx(2.542467188123017)
    assert [round(p, 3) for p in fit_k.p] == [0.113, 0.002, 0.003]
    assert round(fit_k.anova.p_f, 3) == 0.0
    assert [o.order for o in fit_k.obs if o.flagged] == [10]


def test_fit_h_reference_values(fit_h):
    approx = lambda v: pytest.approx(v, rel=1e-10)
    assert fit_h.b0 == approx(0.1257393763471768)
    assert fit_h.b1 == approx(1.3331875208592443e-07)
    assert fit_h.b2 == approx(-2.564378495790477e-06)
    assert fit_h.s == approx(0.08176076866028555)
    assert fit_h.press == approx(0.22584501815425617)
    assert fit_h.vif == approx(2225.5792546375656)  # same regressors, same VIF
    assert fit_h.anova.f == approx(2331.341022553851)
    assert fit_h.seq_ss.ss_x1_first == approx(30.855762380659634)
    assert fit_h.seq_ss.ss_x2_added == approx(0.3134431572969234)
    assert fit_h.obs[9].st_resid == approx(2.555726434625627)
    assert [round(p, 3) for p in fit_h.p] == [0.107, 0.0, 0.0]
    assert [o.order for o in fit_h.obs if o.flagged] == [10]


def test_fit_matches_normal_equations(fit_k, table1):
    design = build_design(table1, "ksort")
    X = np.column_stack([np.ones(10), [r.x1 for r in design], [r.x2 for r in design]])
    y = np.array([r.y for r in design])
    beta = np.linalg.lstsq(X, y, rcond=None)[0]
    assert fit_k.b0 == pytest.approx(beta[0], rel=1e-8)
    assert fit_k.b1 == pytest.approx(beta[1], rel=1e-8)
    assert fit_k.b2 == pytest.approx(beta[2], rel=1e-8)
    e = y - X @ beta
    xtx_inv = np.linalg.inv(X.T @ X)
    s2 = float(e @ e) / 7
    for got, want in zip(fit_k.se, np.sqrt(s2 * np.diag(xtx_inv))):
        assert got == pytest.approx(float(want), rel=1e-6)
    # leverage from the explicit hat matrix
    hat = X @ xtx_inv @ X.T
    press = float(np.sum((e / (1.0 - np.diag(hat))) ** 2))
    assert fit_k.press == pytest.approx(press, rel=1e-8)


def test_fit_identities(fit_k):
    a = fit_k.anova
    assert a.ss_reg + a.ss_res == pytest.approx(a.ss_tot, rel=1e-12)
    assert a.df_reg + a.df_res == a.df_tot
    assert a.ms_reg == pytest.approx(a.ss_reg / 2)
    assert a.ms_res == pytest.approx(a.ss_res / a.df_res)
    assert a.f == pytest.approx(a.ms_reg / a.ms_res)
    assert fit_k.s == pytest.approx(math.sqrt(a.ms_res))
    assert fit_k.r2 == pytest.approx(a.ss_reg / a.ss_tot)
    assert fit_k.r2_adj == pytest.approx(1 - (a.ss_res / a.df_res) / (a.ss_tot / a.df_tot))
    assert fit_k.r2_pred == pytest.approx(1 - fit_k.press / a.ss_tot)
    seq = fit_k.seq_ss
    assert seq.ss_x1_first + seq.ss_x2_added == pytest.approx(a.ss_reg, rel=1e-12)
    assert fit_k.press > a.ss_res  # leave-one-out residuals are never smaller
    assert fit_k.r2_pred < fit_k.r2


def test_fit_residual_structure(fit_k, table1):
    design = build_design(table1, "ksort")
    X = np.column_stack([np.ones(10), [r.x1 for r in design], [r.x2 for r in design]])
    residuals = np.array([o.residual for o in fit_k.obs])
    # orthogonality of residuals to the column space, relative to column scale
    for col in X.T:
        assert abs(col @ residuals) <= 1e-10 * float(np.abs(col) @ np.abs(residuals))
    for o, row in zip(fit_k.obs, design):
        assert o.y == row.y
        assert o.fit + o.residual == pytest.approx(o.y, rel=1e-12)
        assert o.flagged == (abs(o.st_resid) > 2.0)
    # hat diagonals: se_fit = s * sqrt(h), sum(h) = number of parameters
    h = np.array([(o.se_fit / fit_k.s) ** 2 for o in fit_k.obs])
    assert float(h.sum()) == pytest.approx(3.0, rel=1e-10)
    assert np.all((h > 0) & (h < 1))


def test_synthetic_exact_fit():
    sizes = [8, 32, 128, 512, 2048, 8192]
    design = [
        DesignRow(n=n, x1=nlog2n(n), x2=float(n), y=1.0 + 2.0 * nlog2n(n) + 3.0 * n)
        for n in sizes
    ]
    fit = ols_fit(design, label="synthetic")
    assert fit.b0 == pytest.approx(1.0, rel=1e-10)
    assert fit.b1 == pytest.approx(2.0, rel=1e-10)
    assert fit.b2 == pytest.approx(3.0, rel=1e-10)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)
    assert fit.s == pytest.approx(0.0, abs=1e-6)
    scale = max(abs(row.y) for row in design)
    assert all(abs(o.residual) <= 1e-10 * scale for o in fit.obs)


def test_fit_requires_four_rows(table1):
    design = build_design(table1, "ksort")[:3]
    with pytest.raises(FitError):
        ols_fit(design)


def test_fit_rejects_singular_design():
    rows = [DesignRow(n=n, x1=float(n), x2=2.0 * n, y=float(n) ** 1.1) for n in (10, 20, 30, 40, 50)]
    with pytest.raises(FitError):
        ols_fit(rows)
    same_n = [DesignRow(n=100, x1=nlog2n(100), x2=100.0, y=0.1 * k) for k in range(5)]
    with pytest.raises(FitError):
        ols_fit(same_n)


def test_fit_rejects_constant_response():
    rows = [DesignRow(n=n, x1=nlog2n(n), x2=float(n), y=5.0) for n in (10, 100, 1000, 10000)]
    with pytest.raises(FitError):
        ols_fit(rows)


# --- tail probabilities vs a high-precision oracle ---------------------------


def _t_pvalue_oracle(t: float, df: int) -> float:
    mp.mp.dps = 40
    v = mp.mpf(df)
    x = v / (v + mp.mpf(t) ** 2)
    return float(mp.betainc(v / 2, mp.mpf(1) / 2, 0, x, regularized=True))


def _f_sf_oracle(f: float, d1: int, d2: int) -> float:
    mp.mp.dps = 40
    x = mp.mpf(d2) / (d2 + mp.mpf(d1) * mp.mpf(f))
    return float(mp.betainc(mp.mpf(d2) / 2, mp.mpf(d1) / 2, 0, x, regularized=True))


def test_t_pvalue_matches_mpmath():
    for df in (1, 2, 5, 7, 10, 30):
        for t in (0.0, 0.5, 1.0, 1.81, 2.0, 4.89, 10.0):
            got = t_pvalue_two_sided(t, df)
            want = _t_pvalue_oracle(t, df)
            assert math.isclose(got, want, rel_tol=1e-8, abs_tol=1e-10), (t, df)


def test_f_pvalue_matches_mpmath():
    for d2 in (1, 7, 20):
        for f in (0.0, 0.5, 1.0, 3.0, 112.74, 2331.34):
            got = f_pvalue(f, 2, d2)
            want = _f_sf_oracle(f, 2, d2)
            assert math.isclose(got, want, rel_tol=1e-8, abs_tol=1e-10), (f, d2)


def test_pvalue_edge_behavior():
    assert t_pvalue_two_sided(0.0, 7) == pytest.approx(1.0)
    assert t_pvalue_two_sided(1e9, 7) < 1e-12
    assert t_pvalue_two_sided(float("inf"), 7) == 0.0
    assert t_pvalue_two_sided(-3.0, 7) == pytest.approx(t_pvalue_two_sided(3.0, 7))
    ps = [t_pvalue_two_sided(t, 7) for t in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert ps == sorted(ps, reverse=True)
    assert f_pvalue(0.0, 2, 7) == pytest.approx(1.0)
    assert f_pvalue(float("inf"), 2, 7) == 0.0
    with pytest.raises(ValueError):
        t_pvalue_two_sided(1.0, 0)
    with pytest.raises(ValueError):
        f_pvalue(-1.0, 2, 7)


# --- prediction and the difference model ------------------------------------


def test_predict_reference_value(fit_h):
    assert round(predict(fit_h, 10**6), 4) == 0.2186


def test_predict_small_n_drops_the_log_term(fit_k):
    assert predict(fit_k, 0) == fit_k.b0
    assert predict(fit_k, 1) == fit_k.b0 + fit_k.b2
    with pytest.raises(ValueError):
        predict(fit_k, -1)


def test_predict_accepts_diff_models():
    m = DiffModel(d0=1.0, d1=0.0, d2=-0.001)
    assert predict(m, 1000) == pytest.approx(0.0)
    with pytest.raises(TypeError):
        predict(object(), 10)


def test_diff_model_full_precision(fit_k, fit_h):
    d = diff_model(fit_k, fit_h)
    assert d.d0 == fit_k.b0 - fit_h.b0
    assert d.d1 == fit_k.b1 - fit_h.b1
    assert d.d2 == fit_k.b2 - fit_h.b2
    assert d.d0 == pytest.approx(0.6258545924432256, rel=1e-10)


# --- empirical crossover ------------------------------------------------------


def _records(pairs, algorithm):
    return [
        BenchRecord(algorithm=algorithm, n=n, nlog2n=nlog2n(n), reps=1, mean_seconds=y)
        for n, y in pairs
    ]


def test_crossover_empirical_reference(table1):
    est = crossover_empirical(table1)
    assert est is not None
    assert est.method == "empirical_bracket"
    assert est.bracket == (7000000, 7100000)
    assert est.n_star == 7050000.0
    # the near-tie first grid point flips sign inside timer noise; it is
    # reported, not silently dropped
    assert est.transient_brackets == ((100000, 500000),)


def test_crossover_empirical_scale_invariance(table1):
    scaled = [
        dataclasses.replace(r, mean_seconds=r.mean_seconds * 3.7) if r.mean_seconds else r
        for r in table1
    ]
    est = crossover_empirical(scaled)
    assert est == crossover_empirical(table1)


def test_crossover_empirical_none_cases():
    a = _records([(10, 1.0), (100, 2.0), (1000, 3.0)], "ksort")
    b = _records([(10, 2.0), (100, 3.0), (1000, 4.0)], "heapsort")
    assert crossover_empirical(a + b) is None  # ksort uniformly faster
    assert crossover_empirical(a[:1] + b[:1]) is None  # single common size
    assert crossover_empirical(a) is None  # nothing to compare against
    assert crossover_empirical([]) is None


def test_crossover_empirical_skips_exact_ties():
    a = _records([(10, 1.0), (20, 5.0), (30, 9.0)], "ksort")
    b = _records([(10, 0.5), (20, 5.0), (30, 10.0)], "heapsort")
    est = crossover_empirical(a + b)
    assert est.bracket == (10, 30)  # the tied middle point carries no sign
    assert est.transient_brackets == ()


def test_crossover_empirical_averages_duplicate_cells():
    a = _records([(10, 1.0), (10, 3.0), (20, 5.0)], "ksort")  # mean 2.0 at n=10
    b = _records([(10, 2.5), (20, 4.0)], "heapsort")
    est = crossover_empirical(a + b)
    assert est.bracket == (10, 20)


# --- model crossover ----------------------------------------------------------


def test_crossover_model_linear_root():
    m = DiffModel(d0=1.0, d1=0.0, d2=-0.001)  # root at n = 1000
    est = crossover_model(m, 100, 10_000)
    assert est.method == "model_root"
    assert est.bracket[1] - est.bracket[0] <= 1.0
    assert abs(est.n_star - 1000.0) <= 1.0


def test_crossover_model_endpoint_root():
    m = DiffModel(d0=-1000.0, d1=0.0, d2=1.0)
    est = crossover_model(m, 1000, 2000)
    assert est.n_star == 1000 and est.bracket == (1000, 1000)


def test_crossover_model_validation():
    m = DiffModel(d0=1.0, d1=0.0, d2=-0.001)
    with pytest.raises(ValueError):
        crossover_model(m, 10_000, 100)
    with pytest.raises(ValueError):
        crossover_model(m, 0, 100)
    with pytest.raises(BracketError):
        crossover_model(m, 10, 100)  # g > 0 at both ends


def test_crossover_model_against_grid_scan_oracle():
    # difference of the two print-precision coefficient sets
    d = DiffModel(
        d0=0.7516 - 0.12574,
        d1=0.00000048 - 0.00000013,
        d2=-0.00001048 + 0.00000256,
    )

    def g(n):
        return d.d0 + d.d1 * n * math.log2(n) + d.d2 * n

    ns = np.linspace(1e3, 1e8, 10_000)
    vals = d.d0 + d.d1 * ns * np.log2(ns) + d.d2 * ns
    flips = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    assert len(flips) == 2  # the fitted difference dips negative and comes back

    for idx in flips:
        lo, hi = float(ns[idx]), float(ns[idx + 1])
        est = crossover_model(d, lo, hi)
        assert lo <= est.n_star <= hi
        assert est.bracket[1] - est.bracket[0] <= 1.0
        # independent root-finder agrees to within the bisection tolerance
        assert abs(est.n_star - brentq(g, lo, hi)) <= 1.0

    # both endpoints of the wide range sit on the same side, so the
    # bisection precondition genuinely fails there
    with pytest.raises(BracketError):
        crossover_model(d, 1e3, 1e8)


# --- diagnostics series -------------------------------------------------------


def test_diagnostics_series_structure(fit_k):
    series = diagnostics_series(fit_k)
    m = len(fit_k.obs)
    residuals = [o.residual for o in fit_k.obs]

    ordered = [p[0] for p in series.normal_plot]
    positions = [p[1] for p in series.normal_plot]
    assert ordered == sorted(residuals)
    assert positions == pytest.approx([(t - 0.375) / (m + 0.25) for t in range(1, m + 1)])
    assert all(0.0 < p < 1.0 for p in positions)

    assert series.residuals_vs_fits == tuple((o.fit, o.residual) for o in fit_k.obs)
    assert series.residuals_vs_order == tuple((o.order, o.residual) for o in fit_k.obs)
    assert [p[0] for p in series.residuals_vs_order] == list(range(1, m + 1))

    assert sum(series.histogram_counts) == m
    edges = series.histogram_edges
    assert len(edges) == len(series.histogram_counts) + 1
    assert all(a < b for a, b in zip(edges, edges[1:]))
    assert edges[0] <= min(residuals) and edges[-1] >= max(residuals)
