use crate::error::{Error, Result};
use crate::types::{CdfBand, SortedSample};

/// `inf_{G in band} 1/(12n) + sum_i ((2i-1)/(2n) - G(X_i))^2`.
///
/// Targets and both edges are nondecreasing in `i`, so clipping each target
/// into its box is already monotone and the ordering constraint between
/// consecutive `G(X_i)` never binds.
pub fn robust_cvm_statistic(sample: &SortedSample, band: &CdfBand) -> Result<f64> {
    let n = sample.len();
    let nf = n as f64;
    let mut total = 1.0 / (12.0 * nf);
    for (i, &x) in sample.values().iter().enumerate() {
        let (lo, hi) = (band.lower().eval_right(x), band.upper().eval_right(x));
        if lo > hi {
            return Err(Error::InfeasibleBand);
        }
        let target = (2 * i + 1) as f64 / (2.0 * nf);
        let fitted = target.clamp(lo, hi);
        total += (target - fitted).powi(2);
    }
    Ok(total)
}
