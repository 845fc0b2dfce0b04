use rayon::prelude::*;

use crate::types::Decision;

use super::rng::trial_stream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    /// Fraction of H0 statistics strictly above the threshold.
    pub pf: f64,
    /// Fraction of H1 statistics strictly above the threshold.
    pub pd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// One point per threshold, thresholds increasing.
    pub points: Vec<RocPoint>,
    pub auc: f64,
    /// Set when the raw curve sat below the chance line and `pf`/`pd` were swapped.
    pub flipped: bool,
}

/// Statistics for `trials` independent draws under one hypothesis, in
/// trial order. Trials run in parallel on the current rayon pool.
pub fn trial_statistics<S, G>(
    statistic_fn: &S,
    gen: &G,
    hypothesis: Decision,
    trials: usize,
) -> Vec<f64>
where
    S: Fn(&[f64]) -> f64 + Sync,
    G: Fn(u64) -> Vec<f64> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|t| statistic_fn(&gen(trial_stream(hypothesis, t))))
        .collect()
}

/// Thresholds at evenly spaced quantiles of the pooled finite statistics,
/// bracketed by one value below the minimum and one above the maximum.
/// Infinite statistics lie above every threshold.
pub fn auto_thresholds(h0_stats: &[f64], h1_stats: &[f64], count: usize) -> Vec<f64> {
    let count = count.max(2);
    let mut pooled: Vec<f64> = h0_stats
        .iter()
        .chain(h1_stats)
        .copied()
        .filter(|v| v.is_finite())
        .collect();
    if pooled.is_empty() {
        return vec![-1.0, 0.0, 1.0];
    }
    pooled.sort_by(f64::total_cmp);
    let last = pooled.len() - 1;
    let (lo, hi) = (pooled[0], pooled[last]);
    let pad = ((hi - lo) * 1e-3)
        .max(lo.abs().max(hi.abs()) * 1e-9)
        .max(1e-12);
    let mut out = Vec::with_capacity(count + 2);
    out.push(lo - pad);
    for j in 0..count {
        let idx = ((j as f64 / (count - 1) as f64) * last as f64).round() as usize;
        out.push(pooled[idx]);
    }
    out.push(hi + pad);
    out.dedup();
    out
}

fn exceedance(sorted: &[f64], t: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let at_or_below = sorted.partition_point(|&v| v <= t);
    (sorted.len() - at_or_below) as f64 / sorted.len() as f64
}

fn trapezoid(points: &[RocPoint]) -> f64 {
    let mut xy: Vec<(f64, f64)> = points.iter().map(|p| (p.pf, p.pd)).collect();
    xy.push((0.0, 0.0));
    xy.push((1.0, 1.0));
    xy.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    xy.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}

/// ROC from precomputed statistics. `thresholds` must be sorted.
pub fn roc_from_statistics(h0_stats: &[f64], h1_stats: &[f64], thresholds: &[f64]) -> RocCurve {
    debug_assert!(thresholds.windows(2).all(|w| w[0] <= w[1]));
    let mut h0 = h0_stats.to_vec();
    let mut h1 = h1_stats.to_vec();
    h0.sort_by(f64::total_cmp);
    h1.sort_by(f64::total_cmp);
    let mut points: Vec<RocPoint> = thresholds
        .iter()
        .map(|&t| RocPoint {
            threshold: t,
            pf: exceedance(&h0, t),
            pd: exceedance(&h1, t),
        })
        .collect();
    let raw = trapezoid(&points);
    if raw < 0.5 {
        for p in &mut points {
            std::mem::swap(&mut p.pf, &mut p.pd);
        }
        RocCurve {
            points,
            auc: 1.0 - raw,
            flipped: true,
        }
    } else {
        RocCurve {
            points,
            auc: raw,
            flipped: false,
        }
    }
}

/// Runs `trials` draws per hypothesis and sweeps the given thresholds.
pub fn sweep_roc<S, G0, G1>(
    statistic_fn: S,
    h0_gen: G0,
    h1_gen: G1,
    trials: usize,
    thresholds: &[f64],
) -> RocCurve
where
    S: Fn(&[f64]) -> f64 + Sync,
    G0: Fn(u64) -> Vec<f64> + Sync,
    G1: Fn(u64) -> Vec<f64> + Sync,
{
    let h0 = trial_statistics(&statistic_fn, &h0_gen, Decision::H0, trials);
    let h1 = trial_statistics(&statistic_fn, &h1_gen, Decision::H1, trials);
    roc_from_statistics(&h0, &h1, thresholds)
}
