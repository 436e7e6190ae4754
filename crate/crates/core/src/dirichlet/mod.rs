//! Dirichlet polynomial evaluation, large-value classification and counting,
//! mean-value bound formulas, and truncated Perron window estimates.

mod counts;
mod factor;
mod perron;
mod sup;

pub use counts::{
    count_r_rstar, hb_rstar_check, hb_rstar_rhs, huxley_rhs, large_value_experiment, mean_square,
    montgomery_rhs, ExperimentRow, LargeValueCounts, Ratios, RstarCheck,
};
pub use factor::{eval_factor, product_abs, product_terms, PolyFactor, Prepared, MAX_FACTOR_LENGTH};
pub use perron::{
    c1, c2, perron_doubling, perron_window, perron_window_with, tail_e4, DoublingReport, PerronParams,
    PerronReport, QuadratureOptions,
};
pub use sup::{
    classify_profile, classify_profile_with, grid_index, grid_j_max, profile_of, sup_of,
    sup_on_unit_interval, Cell, Classification, LargeValueProfile, SupEstimate, DEFAULT_SAMPLES,
};
