"""Electric quantum walks on a 1-D lattice: evolution, bands, localization, statistics."""

from ._core import (
    FitError,
    SingularityError,
    __version__,
    band_flatness,
    band_structure,
    band_transfer,
    binomial_cdf,
    clopper_pearson,
    convergents,
    dispersion_free,
    distinguishing_steps,
    fit_two_sided_exponential,
    group_velocity,
    revival_peaks,
    run_config,
    sample_measurements,
    tv_distance,
    velocity_multiset,
    walk,
    width_series,
)

__all__ = [
    "FitError",
    "SingularityError",
    "__version__",
    "band_flatness",
    "band_structure",
    "band_transfer",
    "binomial_cdf",
    "clopper_pearson",
    "convergents",
    "dispersion_free",
    "distinguishing_steps",
    "fit_two_sided_exponential",
    "group_velocity",
    "revival_peaks",
    "run_config",
    "sample_measurements",
    "tv_distance",
    "velocity_multiset",
    "walk",
    "width_series",
]
