"""Penalized probability-plot estimation of the cure fraction.

The observed distribution function of a sample with cure fraction p is
p times the distribution of the susceptible lifetimes; dividing the
product-limit estimate by a candidate p and sending the result through a
tail transform straightens the top of the plot when p is right and the
susceptible tail matches the plotting model.  The fit minimizes the
summed squared deviation from a line through the origin, plus a quadratic
penalty tying p to the nonparametric benchmark p_n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateRegressorError,
    InfeasiblePError,
    InvalidKError,
    NonPositiveThresholdError,
    ValidationError,
)
from .survival import KaplanMeierCurve, OrderedSample, km_eval
from .transforms import PlottingModel, _s_values

__all__ = [
    "FitConfig",
    "CureFit",
    "PlotSeries",
    "p_benchmark",
    "pp_loss",
    "pp_fit",
    "gof_series",
]

# Transform arguments this close to {0, 1} are treated as boundary hits
# and their terms dropped from the sum.
BOUNDARY_EPS = 1e-15

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FitConfig:
    """Knobs shared by the plot-based and exceedance-based fits.

    ``lam`` is the penalty weight; None resolves to k/n at fit time.
    ``p_grid_resolution`` points are placed on the feasible interval before
    golden-section refinement shrinks the best bracket below
    ``refine_tolerance``.
    """

    k: int
    model: PlottingModel | None = None
    lam: float | None = None
    p_grid_resolution: int = 512
    refine_tolerance: float = 1e-10

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 2:
            raise InvalidKError(f"k must be an integer >= 2, got {self.k!r}")
        if self.lam is not None and not (
            isinstance(self.lam, (int, float)) and math.isfinite(self.lam) and self.lam >= 0
        ):
            raise ValidationError(f"lam must be a finite non-negative real, got {self.lam!r}")
        if self.p_grid_resolution < 10:
            raise ValidationError("p_grid_resolution must be at least 10")
        if not (self.refine_tolerance > 0):
            raise ValidationError("refine_tolerance must be positive")

    def resolved_lam(self, n: int) -> float:
        return self.k / n if self.lam is None else float(self.lam)


@dataclass(frozen=True)
class CureFit:
    """Result of a penalized plot fit.

    ``slope_hat`` estimates the reciprocal extreme-value index (Pareto), the
    Weibull shape, or the reciprocal log-normal scale, depending on the
    model.  ``boundary`` marks the degenerate case p_n = 1 where the
    feasible interval collapses and p_hat = 1 is returned by convention.
    """

    p_hat: float
    slope_hat: float
    loss: float
    p_n: float
    k_used: int
    feasible_lower: float
    skipped_terms: int
    boundary: bool = False


@dataclass(frozen=True)
class PlotSeries:
    """Diagnostic plot coordinates, sorted by x; ``dropped`` counts the
    points lost to boundary transform arguments."""

    x: np.ndarray
    y: np.ndarray
    model: object
    k: int
    dropped: int = 0


def p_benchmark(curve: KaplanMeierCurve, ordered: OrderedSample) -> float:
    """Product-limit estimate at the largest observation.

    Equals 1 exactly when the largest observation is an uncensored event,
    and 0 when the sample has no events at all.
    """
    return float(km_eval(curve, float(ordered.sorted_times[-1])))


def _top_slice(ordered: OrderedSample, curve: KaplanMeierCurve, k: int):
    """Threshold, top-k times (ascending) and their curve values."""
    n = ordered.n
    if not isinstance(k, (int, np.integer)) or not (2 <= k <= n - 1):
        raise InvalidKError(f"k must be an integer in [2, {n - 1}], got {k!r}")
    threshold = float(ordered.sorted_times[n - k - 1])
    z_top = ordered.sorted_times[n - k:]
    f_top = km_eval(curve, z_top)
    f_thr = float(km_eval(curve, threshold))
    return threshold, z_top, f_top, f_thr


def _check_p(p: float, lower: float, label: str = "p") -> None:
    # p = 1 stays admissible even when the benchmark itself reaches 1.
    if not (isinstance(p, (int, float)) and math.isfinite(p)) or not (0.0 < p <= 1.0):
        raise InfeasiblePError(f"{label} must lie in (0, 1], got {p!r}")
    if p <= lower and p != 1.0:
        raise InfeasiblePError(f"{label} must exceed the feasibility bound {lower}, got {p}")


def _term_masks(model: PlottingModel, f_top: np.ndarray, f_thr: float, p: float):
    """Retained-term mask and threshold admissibility at cure level p.

    The Pareto transform stays finite as its argument reaches 1 (value 0),
    so only the lower boundary is guarded there; the other two transforms
    diverge at both ends.
    """
    t_top = 1.0 - f_top / p
    t_thr = 1.0 - f_thr / p
    if model is PlottingModel.PARETO:
        thr_ok = t_thr > BOUNDARY_EPS
        keep = t_top > BOUNDARY_EPS
    else:
        thr_ok = BOUNDARY_EPS < t_thr < 1.0 - BOUNDARY_EPS
        keep = (t_top > BOUNDARY_EPS) & (t_top < 1.0 - BOUNDARY_EPS)
    if not thr_ok:
        keep = np.zeros_like(keep)
    return t_top, t_thr, keep, thr_ok


def _profile(model, f_top, f_thr, x, p, lam, p_n):
    """Loss, profiled slope and skipped count at cure level p.

    The loss is an exact quadratic in the slope, so the optimal slope is
    the least-squares line through the origin on the retained terms.
    """
    k = f_top.size
    penalty = lam * (p - p_n) ** 2
    t_top, t_thr, keep, thr_ok = _term_masks(model, f_top, f_thr, p)
    kept = int(np.count_nonzero(keep))
    if kept == 0:
        return penalty, math.nan, k
    s_thr = float(_s_values(model, np.asarray([t_thr]))[0]) if t_thr < 1.0 else 0.0
    y = _s_values(model, t_top[keep]) - s_thr
    xk = x[keep]
    sxx = float(xk @ xk)
    if sxx == 0.0:
        slope = 0.0
        ssr = float(y @ y)
    else:
        slope = float(xk @ y) / sxx
        r = y - slope * xk
        ssr = float(r @ r)
    return ssr + penalty, slope, k - kept


def _golden_min(fun, a: float, b: float, xtol: float):
    """Golden-section minimizer biased toward the left end under ties."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = fun(c)
    fd = fun(d)
    if fc <= fd:
        best_x, best_f = c, fc
    else:
        best_x, best_f = d, fd
    for _ in range(200):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
            if fd < best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def minimize_on_interval(fun, lower: float, upper: float, resolution: int, xtol: float):
    """Dense grid over (lower, upper] followed by golden-section refinement.

    Refines around every local minimum of the grid profile (up to the three
    deepest) so narrow basins near the feasibility edge are not lost, then
    probes the left boundary notch.  Ties resolve to the smallest argument.
    """
    grid = lower + (upper - lower) * np.arange(1, resolution + 1) / resolution
    vals = np.array([fun(g) for g in grid])
    # local minima of the sampled profile, endpoints included
    lower_nb = np.r_[np.inf, vals[:-1]]
    upper_nb = np.r_[vals[1:], np.inf]
    locmin = np.flatnonzero((vals <= lower_nb) & (vals <= upper_nb))
    order = locmin[np.argsort(vals[locmin], kind="stable")][:3]
    best_x = float(grid[int(np.argmin(vals))])
    best_f = float(vals.min())
    for i in order:
        a = grid[i - 1] if i > 0 else lower + (upper - lower) * 1e-12
        b = grid[i + 1] if i < resolution - 1 else upper
        x, f = _golden_min(fun, float(a), float(b), xtol)
        if f < best_f or (f == best_f and x < best_x):
            best_x, best_f = x, f
    # boundary notch: the first representable point past the open lower end
    notch = np.nextafter(lower, upper)
    if notch < upper:
        f = fun(notch)
        if f < best_f or (f == best_f and notch < best_x):
            best_x, best_f = float(notch), f
    return best_x, best_f


def pp_loss(model, ordered, curve, k, slope, p, lam, p_n=None):
    """Penalized plot loss at explicit slope and cure level.

    Terms whose transform argument falls within ``BOUNDARY_EPS`` of {0, 1}
    are dropped; an inadmissible threshold transform drops every term,
    leaving only the penalty.
    """
    threshold, z_top, f_top, f_thr = _top_slice(ordered, curve, k)
    if threshold <= 0.0:
        raise NonPositiveThresholdError("plot regressors need a positive threshold")
    if p_n is None:
        p_n = p_benchmark(curve, ordered)
    _check_p(p, p_n)
    if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam >= 0):
        raise ValidationError(f"lam must be a finite non-negative real, got {lam!r}")
    x = np.log(z_top) - math.log(threshold)
    penalty = lam * (p - p_n) ** 2
    t_top, t_thr, keep, thr_ok = _term_masks(model, f_top, f_thr, p)
    if not np.any(keep):
        return penalty
    s_thr = float(_s_values(model, np.asarray([t_thr]))[0]) if t_thr < 1.0 else 0.0
    y = _s_values(model, t_top[keep]) - s_thr
    r = y - slope * x[keep]
    return float(r @ r) + penalty


def pp_fit(ordered: OrderedSample, curve: KaplanMeierCurve, config: FitConfig) -> CureFit:
    """Minimize the penalized plot loss over (p_n, 1] with profiled slope.

    The slope enters the loss quadratically and is profiled out exactly;
    the remaining 1-d profile is minimized by a dense grid plus
    golden-section refinement, with the smallest p winning ties.
    """
    if config.model is None:
        raise ValidationError("FitConfig.model must be set for a plot fit")
    model = config.model
    threshold, z_top, f_top, f_thr = _top_slice(ordered, curve, config.k)
    if threshold <= 0.0:
        raise NonPositiveThresholdError("plot regressors need a positive threshold")
    x = np.log(z_top) - math.log(threshold)
    if not np.any(x > 0):
        raise DegenerateRegressorError("top k+1 observations coincide; no slope identifiable")
    p_n = p_benchmark(curve, ordered)
    lam = config.resolved_lam(ordered.n)

    if p_n >= 1.0:
        loss, slope, skipped = _profile(model, f_top, f_thr, x, 1.0, lam, p_n)
        return CureFit(1.0, slope, loss, p_n, config.k, p_n, skipped, boundary=True)

    def profiled(p):
        return _profile(model, f_top, f_thr, x, p, lam, p_n)[0]

    p_hat, _ = minimize_on_interval(
        profiled, p_n, 1.0, config.p_grid_resolution, config.refine_tolerance
    )
    loss, slope, skipped = _profile(model, f_top, f_thr, x, p_hat, lam, p_n)
    return CureFit(float(p_hat), slope, loss, p_n, config.k, p_n, skipped)


def gof_series(model, ordered, curve, k, p_hat) -> PlotSeries:
    """Probability-plot coordinates of the top k observations at ``p_hat``.

    Points whose transform argument hits a boundary are dropped and
    counted.  ``p_hat`` may sit anywhere in (0, 1]; diagnostic use does not
    require feasibility beyond that.
    """
    threshold, z_top, f_top, _ = _top_slice(ordered, curve, k)
    if threshold <= 0.0:
        raise NonPositiveThresholdError("plot regressors need a positive threshold")
    if not (isinstance(p_hat, (int, float)) and math.isfinite(p_hat)) or not (0.0 < p_hat <= 1.0):
        raise InfeasiblePError(f"p must lie in (0, 1], got {p_hat!r}")
    t_top = 1.0 - f_top / p_hat
    if model is PlottingModel.PARETO:
        keep = t_top > BOUNDARY_EPS
    else:
        keep = (t_top > BOUNDARY_EPS) & (t_top < 1.0 - BOUNDARY_EPS)
    x = np.log(z_top[keep])
    y = _s_values(model, t_top[keep])
    return PlotSeries(x, y, model, int(k), int(k - np.count_nonzero(keep)))
