"""Dispatch layer mapping estimator names to fits.

One vocabulary is shared by the CLI, the simulation harness and the
stress sweep: three plot-based estimators, two exceedance-based ones and
the nonparametric benchmark.
"""
from __future__ import annotations

from dataclasses import replace

from .errors import ValidationError
from .plotfit import FitConfig, p_benchmark, pp_fit
from .potfit import PotDomain, pot_fit
from .survival import KaplanMeierCurve, OrderedSample
from .transforms import PlottingModel

__all__ = ["ESTIMATOR_NAMES", "fit_estimate"]

_PP_MODELS = {
    "pareto": PlottingModel.PARETO,
    "weibull": PlottingModel.WEIBULL,
    "lognormal": PlottingModel.LOGNORMAL,
}
_POT_DOMAINS = {
    "gumbel-pot": PotDomain.GUMBEL,
    "frechet-pot": PotDomain.FRECHET,
}

ESTIMATOR_NAMES = (*_PP_MODELS, *_POT_DOMAINS, "pn")


def fit_estimate(
    name: str,
    ordered: OrderedSample,
    curve: KaplanMeierCurve,
    config: FitConfig | None,
) -> float:
    """Cure-fraction estimate by estimator name; ``pn`` needs no config."""
    if name == "pn":
        return p_benchmark(curve, ordered)
    if config is None:
        raise ValidationError(f"estimator {name!r} requires a fit configuration")
    if name in _PP_MODELS:
        return pp_fit(ordered, curve, replace(config, model=_PP_MODELS[name])).p_hat
    if name in _POT_DOMAINS:
        return pot_fit(ordered, curve, _POT_DOMAINS[name], config).p_hat
    raise ValidationError(f"unknown estimator {name!r}; choose from {ESTIMATOR_NAMES}")
