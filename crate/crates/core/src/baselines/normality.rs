use crate::degenerate::standard_normal_cdf;
use crate::error::{Error, Result};

/// Lilliefors-type KS distance between the ECDF and a plug-in Gaussian
/// with ML mean and standard deviation (divisor `n`).
pub fn ks_normality_statistic(raw: &[f64]) -> Result<f64> {
    if raw.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: raw.len(),
        });
    }
    if let Some(&bad) = raw.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let var = raw.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let mut sorted = raw.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let phi = standard_normal_cdf((x - mean) / sd);
        let above = (i + 1) as f64 / n - phi;
        let below = phi - i as f64 / n;
        sup = sup.max(above).max(below);
    }
    Ok(sup)
}
