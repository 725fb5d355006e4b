"""Two-predictor OLS on benchmark timings, and the crossover estimators.

The runtime model is

    y = b0 + b1 * (n * log2 n) + b2 * n + error

fitted by least squares through a QR decomposition of the design matrix.
QR keeps the heavily collinear regressors (n log2 n and n correlate near
1, VIF in the thousands) from losing digits the way explicit normal
equations would.  The fit carries the standard small-sample diagnostics:
coefficient t statistics and two-sided p values, the ANOVA block with the
overall F, sequential sums of squares, leverage-based standardized
residuals, PRESS and its predicted R-squared, and the shared variance
inflation factor of the two regressors.

Tail probabilities come from the regularized incomplete beta function:
the two-sided Student-t p value is I_x(v/2, 1/2) at x = v/(v + t^2), and
the F survival value is I_x(d2/2, d1/2) at x = d2/(d2 + d1*F).

Crossover of two algorithms is estimated two ways: empirically, by
bracketing the size where the sign of the mean-time difference settles
on its final value, and parametrically, by bisecting a root of the
difference model d0 + d1 * (n log2 n) + d2 * n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import betainc

from .bench import BenchRecord, nlog2n

FLAG_THRESHOLD = 2.0  # |standardized residual| above this marks an unusual observation

_SINGULAR_RATIO = 1e12  # max/min |R diagonal| beyond this means rank-deficient in float64


class FitError(ValueError):
    """The design cannot support the requested fit."""


class BracketError(ValueError):
    """A root bracket does not actually bracket a sign change."""


def t_pvalue_two_sided(t: float, df: int) -> float:
    """Two-sided Student-t p value via the regularized incomplete beta."""
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    tt = t * t
    if math.isinf(tt):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + tt)))


def f_pvalue(f: float, df1: int, df2: int) -> float:
    """Upper-tail F probability via the regularized incomplete beta."""
    if df1 < 1 or df2 < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if f < 0:
        raise ValueError(f"F statistic must be nonnegative, got {f}")
    if math.isinf(f):
        return 0.0
    return float(betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f)))


@dataclass(frozen=True)
class DesignRow:
    n: int
    x1: float  # n * log2(n), recomputed from n
    x2: float  # n
    y: float   # mean seconds


def build_design(records: Iterable[BenchRecord], algorithm: str) -> list[DesignRow]:
    """Design rows for one algorithm's records, in input order.

    x1 is always recomputed from n so the design never inherits rounding
    from a results file.
    """
    rows = []
    for r in records:
        if r.algorithm != algorithm:
            continue
        if r.mean_seconds is None:
            raise FitError(
                f"record (algorithm={r.algorithm}, n={r.n}) has no wall-time mean; "
                "op-count records cannot be fitted"
            )
        rows.append(DesignRow(n=r.n, x1=nlog2n(r.n), x2=float(r.n), y=r.mean_seconds))
    if not rows:
        raise FitError(f"no records for algorithm {algorithm!r}")
    return rows


@dataclass(frozen=True)
class Observation:
    order: int
    n: int
    x1: float
    y: float
    fit: float
    se_fit: float
    residual: float
    st_resid: float
    flagged: bool


@dataclass(frozen=True)
class AnovaTable:
    df_reg: int
    df_res: int
    df_tot: int
    ss_reg: float
    ss_res: float
    ss_tot: float
    ms_reg: float
    ms_res: float
    f: float
    p_f: float


@dataclass(frozen=True)
class SeqSS:
    ss_x1_first: float
    ss_x2_added: float


@dataclass(frozen=True)
class RegressionFit:
    label: str
    b0: float
    b1: float
    b2: float
    se: tuple[float, float, float]
    t: tuple[float, float, float]
    p: tuple[float, float, float]
    s: float
    r2: float        # fractions, not percents
    r2_adj: float
    r2_pred: float
    press: float
    vif: float
    anova: AnovaTable
    seq_ss: SeqSS
    obs: tuple[Observation, ...]


def _residual_ss(x_cols: list[np.ndarray], y: np.ndarray) -> float:
    # residual sum of squares of y on [1, x_cols...], via QR
    X = np.column_stack([np.ones_like(y)] + x_cols)
    q, r = np.linalg.qr(X)
    beta = np.linalg.solve(r, q.T @ y)
    e = y - X @ beta
    return float(e @ e)


def ols_fit(design: Sequence[DesignRow], label: str = "") -> RegressionFit:
    """Least-squares fit of y on (1, x1, x2) with the full diagnostic set."""
    m = len(design)
    if m < 4:
        raise FitError(f"need at least 4 rows for a 3-parameter fit, got {m}")
    x1 = np.array([row.x1 for row in design], dtype=float)
    x2 = np.array([row.x2 for row in design], dtype=float)
    y = np.array([row.y for row in design], dtype=float)

    X = np.column_stack([np.ones(m), x1, x2])
    q, r = np.linalg.qr(X)
    rdiag = np.abs(np.diag(r))
    if rdiag.min() == 0.0 or rdiag.max() / rdiag.min() > _SINGULAR_RATIO:
        raise FitError("design matrix is numerically singular; regressors are not independent")
    beta = np.linalg.solve(r, q.T @ y)

    fits = X @ beta
    e = y - fits
    df_res = m - 3
    df_tot = m - 1
    ss_res = float(e @ e)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot <= 0.0:
        raise FitError("response is constant; nothing to fit")
    ss_reg = ss_tot - ss_res
    ms_res = ss_res / df_res
    ms_reg = ss_reg / 2
    s = math.sqrt(ms_res)

    rinv = np.linalg.inv(r)
    xtx_inv = rinv @ rinv.T
    with np.errstate(divide="ignore", invalid="ignore"):
        se = s * np.sqrt(np.diag(xtx_inv))
        t_stats = np.where(
            se > 0,
            beta / np.where(se > 0, se, 1.0),
            np.where(beta != 0, np.inf * np.sign(beta), 0.0),
        )
    p_vals = tuple(t_pvalue_two_sided(float(t), df_res) for t in t_stats)

    # leverages from the thin Q: h_t = ||Q[t, :]||^2
    h = np.sum(q * q, axis=1)
    one_minus_h = 1.0 - h
    with np.errstate(divide="ignore", invalid="ignore"):
        se_fit = s * np.sqrt(h)
        denom = s * np.sqrt(np.where(one_minus_h > 0, one_minus_h, 1.0))
        st_resid = np.where((denom > 0) & (one_minus_h > 0), e / np.where(denom > 0, denom, 1.0), 0.0)
        press_terms = e / np.where(one_minus_h > 0, one_minus_h, np.nan)
    press = float(np.sum(press_terms**2))

    r2 = ss_reg / ss_tot
    r2_adj = 1.0 - ms_res / (ss_tot / df_tot)
    r2_pred = 1.0 - press / ss_tot
    f_stat = ms_reg / ms_res if ms_res > 0 else math.inf
    p_f = f_pvalue(f_stat, 2, df_res) if math.isfinite(f_stat) else 0.0

    corr = float(np.corrcoef(x1, x2)[0, 1])
    vif = math.inf if abs(corr) >= 1.0 else 1.0 / (1.0 - corr * corr)

    ss_x1_first = ss_tot - _residual_ss([x1], y)
    seq = SeqSS(ss_x1_first=ss_x1_first, ss_x2_added=ss_reg - ss_x1_first)

    obs = tuple(
        Observation(
            order=t + 1,
            n=design[t].n,
            x1=float(x1[t]),
            y=float(y[t]),
            fit=float(fits[t]),
            se_fit=float(se_fit[t]),
            residual=float(e[t]),
            st_resid=float(st_resid[t]),
            flagged=abs(float(st_resid[t])) > FLAG_THRESHOLD,
        )
        for t in range(m)
    )

    return RegressionFit(
        label=label,
        b0=float(beta[0]),
        b1=float(beta[1]),
        b2=float(beta[2]),
        se=tuple(float(v) for v in se),
        t=tuple(float(v) for v in t_stats),
        p=tuple(float(v) for v in p_vals),
        s=s,
        r2=r2,
        r2_adj=r2_adj,
        r2_pred=r2_pred,
        press=press,
        vif=vif,
        anova=AnovaTable(
            df_reg=2,
            df_res=df_res,
            df_tot=df_tot,
            ss_reg=ss_reg,
            ss_res=ss_res,
            ss_tot=ss_tot,
            ms_reg=ms_reg,
            ms_res=ms_res,
            f=f_stat,
            p_f=p_f,
        ),
        seq_ss=seq,
        obs=obs,
    )


@dataclass(frozen=True)
class DiffModel:
    """Coefficient differences of two fitted runtime models (first minus second)."""

    d0: float
    d1: float
    d2: float


def diff_model(fit_a: RegressionFit, fit_b: RegressionFit) -> DiffModel:
    return DiffModel(d0=fit_a.b0 - fit_b.b0, d1=fit_a.b1 - fit_b.b1, d2=fit_a.b2 - fit_b.b2)


def _coefficients(model) -> tuple[float, float, float]:
    if hasattr(model, "b0"):
        return model.b0, model.b1, model.b2
    if hasattr(model, "d0"):
        return model.d0, model.d1, model.d2
    raise TypeError(f"{type(model).__name__} carries neither b0/b1/b2 nor d0/d1/d2")


def predict(model, n: int) -> float:
    """Model value at size n; the n*log2(n) regressor is 0 for n <= 1."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    c0, c1, c2 = _coefficients(model)
    return c0 + c1 * nlog2n(n) + c2 * n


@dataclass(frozen=True)
class CrossoverEstimate:
    n_star: float
    bracket: tuple[float, float]
    method: str  # "empirical_bracket" or "model_root"
    transient_brackets: tuple[tuple[float, float], ...] = ()


def crossover_empirical(
    records: Iterable[BenchRecord],
    algo_a: str = "ksort",
    algo_b: str = "heapsort",
) -> Optional[CrossoverEstimate]:
    """Bracket the size where the faster of two algorithms settles.

    Mean times are compared at every size both algorithms measured.  The
    returned bracket is the last adjacent size pair where the sign of
    mean_a - mean_b flips, i.e. the boundary after which the ordering
    holds for the rest of the measured range; any earlier, transient
    flips (near-tie points inside timer noise) are reported alongside.
    Exact ties carry no ordering information and are skipped.  Returns
    None when the ordering never flips.
    """
    means: dict[str, dict[int, list[float]]] = {algo_a: {}, algo_b: {}}
    for r in records:
        if r.algorithm in means and r.mean_seconds is not None:
            means[r.algorithm].setdefault(r.n, []).append(r.mean_seconds)
    common = sorted(set(means[algo_a]) & set(means[algo_b]))
    if len(common) < 2:
        return None

    signed: list[tuple[int, int]] = []  # (n, sign of diff), zero diffs skipped
    for n in common:
        da = sum(means[algo_a][n]) / len(means[algo_a][n])
        db = sum(means[algo_b][n]) / len(means[algo_b][n])
        diff = da - db
        if diff != 0.0:
            signed.append((n, 1 if diff > 0 else -1))

    flips = [
        (n_prev, n_next)
        for (n_prev, s_prev), (n_next, s_next) in zip(signed, signed[1:])
        if s_prev != s_next
    ]
    if not flips:
        return None
    lo, hi = flips[-1]
    return CrossoverEstimate(
        n_star=(lo + hi) / 2.0,
        bracket=(lo, hi),
        method="empirical_bracket",
        transient_brackets=tuple(flips[:-1]),
    )


def crossover_model(model, n_lo: float, n_hi: float, *, tol: float = 1.0) -> CrossoverEstimate:
    """Bisect a root of the difference model inside [n_lo, n_hi].

    The endpoints must straddle a sign change of
    d0 + d1 * (n log2 n) + d2 * n; otherwise this raises BracketError
    (a model can cross zero more than once, so the caller picks which
    crossing to isolate).  Bisection stops once the bracket is narrower
    than tol.
    """
    c0, c1, c2 = _coefficients(model)

    def g(n: float) -> float:
        return c0 + c1 * (n * math.log2(n) if n > 1 else 0.0) + c2 * n

    if not (1 <= n_lo < n_hi):
        raise ValueError(f"need 1 <= n_lo < n_hi, got ({n_lo}, {n_hi})")
    g_lo = g(n_lo)
    g_hi = g(n_hi)
    if g_lo == 0.0:
        return CrossoverEstimate(n_star=n_lo, bracket=(n_lo, n_lo), method="model_root")
    if g_hi == 0.0:
        return CrossoverEstimate(n_star=n_hi, bracket=(n_hi, n_hi), method="model_root")
    if (g_lo > 0) == (g_hi > 0):
        raise BracketError(
            f"difference model has the same sign at both ends: "
            f"g({n_lo}) = {g_lo:.6g}, g({n_hi}) = {g_hi:.6g}"
        )
    lo, hi = float(n_lo), float(n_hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        g_mid = g(mid)
        if g_mid == 0.0:
            return CrossoverEstimate(n_star=mid, bracket=(mid, mid), method="model_root")
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return CrossoverEstimate(n_star=(lo + hi) / 2.0, bracket=(lo, hi), method="model_root")


@dataclass(frozen=True)
class DiagnosticsSeries:
    """Plottable residual diagnostics extracted from a fit.

    normal_plot pairs each ascending residual with its Blom plotting
    position (t - 0.375) / (m + 0.25); the histogram uses Scott's rule
    for bin widths.
    """

    normal_plot: tuple[tuple[float, float], ...]        # (ordered residual, position)
    residuals_vs_fits: tuple[tuple[float, float], ...]  # (fit, residual)
    histogram_edges: tuple[float, ...]
    histogram_counts: tuple[int, ...]
    residuals_vs_order: tuple[tuple[int, float], ...]   # (order, residual)


def diagnostics_series(fit: RegressionFit) -> DiagnosticsSeries:
    residuals = [o.residual for o in fit.obs]
    m = len(residuals)
    ordered = sorted(residuals)
    positions = [(t - 0.375) / (m + 0.25) for t in range(1, m + 1)]
    counts, edges = np.histogram(residuals, bins="scott")
    return DiagnosticsSeries(
        normal_plot=tuple(zip(ordered, positions)),
        residuals_vs_fits=tuple((o.fit, o.residual) for o in fit.obs),
        histogram_edges=tuple(float(v) for v in edges),
        histogram_counts=tuple(int(v) for v in counts),
        residuals_vs_order=tuple((o.order, o.residual) for o in fit.obs),
    )
