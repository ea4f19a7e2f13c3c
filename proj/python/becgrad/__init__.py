"""Python access to the becgrad simulation engine."""

from ._core import (
    ConfigError,
    __version__,
    analytic_uncertainty,
    cramer_rao_bound,
    field_from_coupling,
    heisenberg_minimum,
    recipes,
    run_recipe,
    simulate,
    singlet_estimator,
    sql_baseline,
    synthesize,
    uncertainty_at,
)

__all__ = [
    "ConfigError",
    "__version__",
    "analytic_uncertainty",
    "cramer_rao_bound",
    "field_from_coupling",
    "heisenberg_minimum",
    "recipes",
    "run_recipe",
    "simulate",
    "singlet_estimator",
    "sql_baseline",
    "synthesize",
    "uncertainty_at",
]
