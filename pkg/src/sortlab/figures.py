"""Residual-diagnostic and scaling figures, rendered straight to SVG files.

Figures are built on matplotlib's object API (no pyplot, no global
state), one file per panel.  SVG is the only accepted suffix: the output
is meant to diff cleanly and scale in reports.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import numpy as np
from matplotlib.figure import Figure
from scipy.special import ndtri

from .stats import DiagnosticsSeries, RegressionFit, diagnostics_series

_PathLike = Union[str, Path]

_PERCENT_TICKS = (1, 5, 10, 25, 50, 75, 90, 95, 99)


def _require_svg(path: Path) -> Path:
    if path.suffix.lower() != ".svg":
        raise ValueError(f"figure paths must end in .svg, got {path.name!r}")
    return path


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig = Figure(figsize=(7.0, 5.0))
    ax = fig.subplots()
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig: Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="svg")
    return path


def _normal_plot(series: DiagnosticsSeries, label: str, path: Path) -> Path:
    fig, ax = _new_axes(f"Normal probability plot of residuals ({label})", "Residual", "Percent")
    residuals = np.array([p[0] for p in series.normal_plot])
    z = ndtri([p[1] for p in series.normal_plot])
    ax.plot(residuals, z, "o")
    mu = residuals.mean()
    sd = residuals.std(ddof=1) if len(residuals) > 1 else 1.0
    if sd > 0:
        zz = np.linspace(z.min(), z.max(), 2)
        ax.plot(mu + sd * zz, zz, "-", linewidth=1)
    ax.set_yticks([float(ndtri(p / 100.0)) for p in _PERCENT_TICKS])
    ax.set_yticklabels([str(p) for p in _PERCENT_TICKS])
    return _save(fig, path)


def _residuals_vs_fits(series: DiagnosticsSeries, label: str, path: Path) -> Path:
    fig, ax = _new_axes(f"Residuals versus fitted values ({label})", "Fitted value", "Residual")
    ax.axhline(0.0, color="gray", linewidth=1)
    ax.plot([p[0] for p in series.residuals_vs_fits], [p[1] for p in series.residuals_vs_fits], "o")
    return _save(fig, path)


def _residual_histogram(series: DiagnosticsSeries, label: str, path: Path) -> Path:
    fig, ax = _new_axes(f"Histogram of residuals ({label})", "Residual", "Frequency")
    edges = np.asarray(series.histogram_edges)
    counts = np.asarray(series.histogram_counts)
    ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", edgecolor="black")
    return _save(fig, path)


def _residuals_vs_order(series: DiagnosticsSeries, label: str, path: Path) -> Path:
    fig, ax = _new_axes(
        f"Residuals versus observation order ({label})", "Observation order", "Residual"
    )
    ax.axhline(0.0, color="gray", linewidth=1)
    ax.plot(
        [p[0] for p in series.residuals_vs_order],
        [p[1] for p in series.residuals_vs_order],
        "o-",
    )
    return _save(fig, path)


def render_fit_diagnostics(fit: RegressionFit, out_dir: _PathLike, prefix: str = "") -> list[Path]:
    """Write the four residual panels for one fit; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    prefix = prefix or fit.label or "fit"
    series = diagnostics_series(fit)
    return [
        _normal_plot(series, prefix, _require_svg(out / f"{prefix}_normal_plot.svg")),
        _residuals_vs_fits(series, prefix, _require_svg(out / f"{prefix}_residuals_vs_fits.svg")),
        _residual_histogram(series, prefix, _require_svg(out / f"{prefix}_residual_histogram.svg")),
        _residuals_vs_order(series, prefix, _require_svg(out / f"{prefix}_residuals_vs_order.svg")),
    ]


def _curve(fit: RegressionFit, grid: np.ndarray) -> np.ndarray:
    x1 = np.where(grid > 1, grid * np.log2(np.maximum(grid, 1.0)), 0.0)
    return fit.b0 + fit.b1 * x1 + fit.b2 * grid


def render_times_curve(fit: RegressionFit, path: _PathLike, prefix: str = "") -> Path:
    """Observed mean times and the fitted curve for one algorithm."""
    path = _require_svg(Path(path))
    prefix = prefix or fit.label or "fit"
    fig, ax = _new_axes(f"Mean sort time versus n ({prefix})", "n", "Mean seconds")
    ns = np.array([o.n for o in fit.obs], dtype=float)
    ys = [o.y for o in fit.obs]
    ax.plot(ns, ys, "o", label="observed")
    grid = np.linspace(ns.min(), ns.max(), 256)
    ax.plot(grid, _curve(fit, grid), "-", label="fitted")
    ax.legend()
    return _save(fig, path)


def render_comparison(fits: Sequence[RegressionFit], path: _PathLike) -> Path:
    """Overlay observed points and fitted curves for several fits."""
    if len(fits) < 2:
        raise ValueError("comparison plot needs at least two fits")
    path = _require_svg(Path(path))
    fig, ax = _new_axes("Mean sort time versus n", "n", "Mean seconds")
    lo = min(min(o.n for o in fit.obs) for fit in fits)
    hi = max(max(o.n for o in fit.obs) for fit in fits)
    grid = np.linspace(lo, hi, 256)
    for fit in fits:
        label = fit.label or "fit"
        pts = ax.plot([o.n for o in fit.obs], [o.y for o in fit.obs], "o", label=f"{label} observed")
        ax.plot(grid, _curve(fit, grid), "-", color=pts[0].get_color(), label=f"{label} fitted")
    ax.legend()
    return _save(fig, path)
