//! Empirical likelihood ratio detection under CDF-band uncertainty.
//!
//! The crate provides the band-constrained empirical likelihood statistic
//! and its degenerate single-CDF form, robust Kolmogorov-Smirnov and
//! Cramer-von Mises baselines, a moment-constrained empirical likelihood
//! test, a band builder for grouped noise records, and a Monte-Carlo ROC
//! harness over synthetic fading channels.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod band;
pub mod baselines;
pub mod degenerate;
pub mod elrdf;
pub mod error;
pub mod io;
pub mod simulation;
pub mod types;

pub use band::{band_width_profile, build_band};
pub use baselines::{
    elrm_statistic, ks_decide, ks_normality_statistic, robust_cvm_statistic, robust_ks_statistic,
    Moment, MomentConstraint,
};
pub use degenerate::{
    degenerate_weights, grouped_score, grouped_statistic, spacing_cdf, GroupingPlan, NullCdf,
    NullModel, Sidedness,
};
pub use elrdf::{
    elrdf_decide, elrdf_statistic, grid_oracle_solve, solve_elrdf, ElrdfResult, SolverOptions,
};
pub use error::{Error, Result};
pub use types::{ecdf, CdfBand, Decision, SortedSample, StepCdf, TiePolicy, WeightVector};
