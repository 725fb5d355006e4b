"""Rendering fitted models to a text report and a JSON exchange form.

The text block follows the familiar layout of classical regression
printouts: a predictor table with t statistics, p values and VIF, the
summary line with S, PRESS and the three R-squared flavors, the analysis
of variance, sequential sums of squares in entry order, and the
observation table with leverage-aware standard errors, where any row
whose standardized residual exceeds 2 in magnitude is flagged R.

The JSON form round-trips a RegressionFit exactly (floats are written in
shortest-repr form) so fits can be stored and fed back to the predictor
and plotting paths without refitting.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .stats import AnovaTable, Observation, RegressionFit, SeqSS

FIT_FORMAT = "sortlab-fit"
FIT_FORMAT_VERSION = 1

_PathLike = Union[str, Path]

_PREDICTOR_NAMES = ("Constant", "n log2 n", "n")


def _g(v: float, sig: int = 6) -> str:
    return f"{v:.{sig}g}"


def format_fit_report(fit: RegressionFit) -> str:
    """Multi-section plain-text report for one fitted model."""
    lines: list[str] = []
    add = lines.append
    add(f"Regression: {fit.label or 'fit'}")
    add(f"Model: y = b0 + b1*(n log2 n) + b2*n over {len(fit.obs)} observations")
    add("")
    add(f"{'Predictor':<12}{'Coef':>16}{'SE Coef':>16}{'T':>10}{'P':>8}{'VIF':>12}")
    for name, coef, se, t, p in zip(_PREDICTOR_NAMES, (fit.b0, fit.b1, fit.b2), fit.se, fit.t, fit.p):
        vif = f"{fit.vif:.3f}" if name != "Constant" else ""
        add(f"{name:<12}{_g(coef, 8):>16}{_g(se, 8):>16}{t:>10.2f}{p:>8.3f}{vif:>12}")
    add("")
    add(f"S = {_g(fit.s)}   PRESS = {_g(fit.press)}")
    add(
        f"R-Sq = {100 * fit.r2:.1f}%   R-Sq(adj) = {100 * fit.r2_adj:.1f}%   "
        f"R-Sq(pred) = {100 * fit.r2_pred:.2f}%"
    )
    add("")
    add("Analysis of Variance")
    a = fit.anova
    add(f"{'Source':<16}{'DF':>4}{'SS':>12}{'MS':>12}{'F':>10}{'P':>8}")
    add(f"{'Regression':<16}{a.df_reg:>4}{a.ss_reg:>12.3f}{a.ms_reg:>12.3f}{a.f:>10.2f}{a.p_f:>8.3f}")
    add(f"{'Residual Error':<16}{a.df_res:>4}{a.ss_res:>12.3f}{a.ms_res:>12.3f}")
    add(f"{'Total':<16}{a.df_tot:>4}{a.ss_tot:>12.3f}")
    add("")
    add("Sequential Sums of Squares")
    add(f"{'Source':<12}{'DF':>4}{'Seq SS':>12}")
    add(f"{'n log2 n':<12}{1:>4}{fit.seq_ss.ss_x1_first:>12.3f}")
    add(f"{'n':<12}{1:>4}{fit.seq_ss.ss_x2_added:>12.3f}")
    add("")
    add("Observations")
    add(
        f"{'Obs':>4}{'n':>12}{'y':>12}{'Fit':>12}{'SE Fit':>10}"
        f"{'Residual':>12}{'St Resid':>10}"
    )
    any_flagged = False
    for o in fit.obs:
        flag = "  R" if o.flagged else ""
        any_flagged = any_flagged or o.flagged
        add(
            f"{o.order:>4}{o.n:>12}{o.y:>12.4f}{o.fit:>12.4f}{o.se_fit:>10.4f}"
            f"{o.residual:>12.4f}{o.st_resid:>10.2f}{flag}"
        )
    if any_flagged:
        add("")
        add("R denotes an observation with a large standardized residual.")
    add("")
    return "\n".join(lines)


def fit_to_dict(fit: RegressionFit) -> dict:
    return {
        "format": FIT_FORMAT,
        "version": FIT_FORMAT_VERSION,
        "label": fit.label,
        "coefficients": {"b0": fit.b0, "b1": fit.b1, "b2": fit.b2},
        "se": list(fit.se),
        "t": list(fit.t),
        "p": list(fit.p),
        "s": fit.s,
        "r2": fit.r2,
        "r2_adj": fit.r2_adj,
        "r2_pred": fit.r2_pred,
        "press": fit.press,
        "vif": fit.vif,
        "anova": {
            "df_reg": fit.anova.df_reg,
            "df_res": fit.anova.df_res,
            "df_tot": fit.anova.df_tot,
            "ss_reg": fit.anova.ss_reg,
            "ss_res": fit.anova.ss_res,
            "ss_tot": fit.anova.ss_tot,
            "ms_reg": fit.anova.ms_reg,
            "ms_res": fit.anova.ms_res,
            "f": fit.anova.f,
            "p_f": fit.anova.p_f,
        },
        "seq_ss": {
            "ss_x1_first": fit.seq_ss.ss_x1_first,
            "ss_x2_added": fit.seq_ss.ss_x2_added,
        },
        "obs": [
            {
                "order": o.order,
                "n": o.n,
                "x1": o.x1,
                "y": o.y,
                "fit": o.fit,
                "se_fit": o.se_fit,
                "residual": o.residual,
                "st_resid": o.st_resid,
                "flagged": o.flagged,
            }
            for o in fit.obs
        ],
    }


def fit_from_dict(d: dict) -> RegressionFit:
    if d.get("format") != FIT_FORMAT:
        raise ValueError(f"not a {FIT_FORMAT} document: format={d.get('format')!r}")
    if d.get("version") != FIT_FORMAT_VERSION:
        raise ValueError(f"unsupported {FIT_FORMAT} version {d.get('version')!r}")
    c = d["coefficients"]
    a = d["anova"]
    return RegressionFit(
        label=d["label"],
        b0=c["b0"],
        b1=c["b1"],
        b2=c["b2"],
        se=tuple(d["se"]),
        t=tuple(d["t"]),
        p=tuple(d["p"]),
        s=d["s"],
        r2=d["r2"],
        r2_adj=d["r2_adj"],
        r2_pred=d["r2_pred"],
        press=d["press"],
        vif=d["vif"],
        anova=AnovaTable(
            df_reg=a["df_reg"],
            df_res=a["df_res"],
            df_tot=a["df_tot"],
            ss_reg=a["ss_reg"],
            ss_res=a["ss_res"],
            ss_tot=a["ss_tot"],
            ms_reg=a["ms_reg"],
            ms_res=a["ms_res"],
            f=a["f"],
            p_f=a["p_f"],
        ),
        seq_ss=SeqSS(
            ss_x1_first=d["seq_ss"]["ss_x1_first"],
            ss_x2_added=d["seq_ss"]["ss_x2_added"],
        ),
        obs=tuple(
            Observation(
                order=o["order"],
                n=o["n"],
                x1=o["x1"],
                y=o["y"],
                fit=o["fit"],
                se_fit=o["se_fit"],
                residual=o["residual"],
                st_resid=o["st_resid"],
                flagged=o["flagged"],
            )
            for o in d["obs"]
        ),
    )


def write_fit_json(fit: RegressionFit, path: _PathLike) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(fit_to_dict(fit), fh, indent=2)
        fh.write("\n")


def read_fit_json(path: _PathLike) -> RegressionFit:
    with open(path, "r", encoding="ascii") as fh:
        return fit_from_dict(json.load(fh))
