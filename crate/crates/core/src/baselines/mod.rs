//! Competitor goodness-of-fit statistics evaluated against the same band.

mod cvm;
mod elrm;
mod ks;
mod normality;

pub use cvm::robust_cvm_statistic;
pub use elrm::{elrm_statistic, Moment, MomentConstraint, MomentFn};
pub use ks::{ks_decide, robust_ks_statistic};
pub use normality::ks_normality_statistic;
