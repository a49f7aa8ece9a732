"""Rough-set reducts and decision rules, SOM discretization and SONFIS-R
neuro-fuzzy models for tabular data."""

from ._granular import (
    Discretizer,
    GranularError,
    RuleSet,
    SonfisResult,
    Table,
    all_reducts,
    derive_seed,
    discernibility_function,
    discretize_attribute,
    evaluate,
    fit_discretizer,
    generate_synthetic,
    indiscernibility,
    induce_rules,
    johnson_reduct,
    lower_approximation,
    mse,
    run_sonfis_r,
    subtractive_cluster,
    synthetic_sensitive_attributes,
    upper_approximation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
