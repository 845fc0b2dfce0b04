//! Empirical likelihood ratio test under CDF-band constraints.
//!
//! Given a sorted sample `X_1 < ... < X_n` and a band `lower <= G <= upper`,
//! the detector maximizes the empirical likelihood `prod n w_i` over
//! probability weights whose cumulative sums stay inside the band at
//! `X_1 .. X_{n-1}`, and reports `-(1/n) log` of the maximum. That value is
//! the KL divergence from the ECDF to the best in-band reweighting.

mod bounds;
mod oracle;
mod solver;

pub use bounds::{tighten_bounds, Feasibility, TightenedBounds};
pub use oracle::grid_oracle_solve;
pub use solver::{solve_bounds, SolverOptions};

use crate::error::Result;
use crate::types::{CdfBand, Decision, SortedSample, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub struct ElrdfResult {
    /// The maximizing weights `w*`.
    pub weights: WeightVector,
    /// `-(1/n) log R(w*)`; `+inf` when the band forces a zero weight.
    pub statistic: f64,
    /// Projected-gradient KKT residual at `w*`.
    pub kkt_residual: f64,
    pub iterations: usize,
}

pub fn solve_elrdf(sample: &SortedSample, band: &CdfBand, tol: f64) -> Result<ElrdfResult> {
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    solve_elrdf_with(sample, band, &opts)
}

pub fn solve_elrdf_with(
    sample: &SortedSample,
    band: &CdfBand,
    opts: &SolverOptions,
) -> Result<ElrdfResult> {
    solve_bounds(sample.len(), &tighten_bounds(sample, band), opts)
}

/// `-(1/n) sum log(n w_i)`, i.e. `D(F_e || w)`.
pub fn elrdf_statistic(w: &WeightVector) -> f64 {
    likelihood_statistic(w.weights())
}

pub(crate) fn likelihood_statistic(w: &[f64]) -> f64 {
    let n = w.len() as f64;
    if w.iter().any(|&x| !(x > 0.0)) {
        return f64::INFINITY;
    }
    let log_ratio: f64 = w.iter().map(|&x| (n * x).ln()).sum();
    (-log_ratio / n).max(0.0)
}

/// H1 iff `statistic > eta`.
pub fn elrdf_decide(statistic: f64, eta: f64) -> Decision {
    debug_assert!(eta >= 0.0, "threshold must be nonnegative");
    Decision::from_threshold(statistic, eta)
}
