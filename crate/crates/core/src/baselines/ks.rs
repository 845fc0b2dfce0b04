use crate::types::{CdfBand, Decision, SortedSample};

/// `inf_{G in band} sup_x |F_e(x) - G(x)|`.
///
/// Clipping the ECDF into the band gives a monotone in-band CDF that
/// attains the pointwise lower bound `max(F_e - upper, lower - F_e, 0)`
/// everywhere. Between sample points `F_e` is flat, so the sup is reached
/// either at a sample point (against `upper`) or just before one (against
/// the left limit of `lower`).
pub fn robust_ks_statistic(sample: &SortedSample, band: &CdfBand) -> f64 {
    let n = sample.len() as f64;
    let (lo, hi) = (band.lower(), band.upper());
    let mut sup = 0.0f64;
    for (i, &x) in sample.values().iter().enumerate() {
        let above = (i + 1) as f64 / n - hi.eval_right(x);
        let below = lo.eval_left(x) - i as f64 / n;
        sup = sup.max(above).max(below);
    }
    sup
}

/// H1 iff `sqrt(n) * d_n > gamma`.
pub fn ks_decide(d_n: f64, n: usize, gamma: f64) -> Decision {
    Decision::from_threshold((n as f64).sqrt() * d_n, gamma)
}
