from ._core import (
    RwcError,
    build_weights,
    calibrate,
    chi2_sf,
    christoffersen,
    conformal_pvalue,
    conformal_threshold,
    hs_forecast,
    inflated_level,
    kupiec_uc,
    regime_stability,
    simulate,
    simulate_default,
    simulate_iid_scores,
    time_only_weights,
    vol_quintiles,
    weighted_quantile,
)

__all__ = [
    "RwcError",
    "build_weights",
    "calibrate",
    "chi2_sf",
    "christoffersen",
    "conformal_pvalue",
    "conformal_threshold",
    "hs_forecast",
    "inflated_level",
    "kupiec_uc",
    "regime_stability",
    "simulate",
    "simulate_default",
    "simulate_iid_scores",
    "time_only_weights",
    "vol_quintiles",
    "weighted_quantile",
]
