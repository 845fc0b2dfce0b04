//! Brute-force reference for small samples.
//!
//! Searches every cumulative path on the lattice `{0, step, 2 step, ..., 1}`
//! that respects the raw band values at `X_1 .. X_{n-1}` and keeps the best
//! likelihood. The search is a max-plus dynamic program over lattice
//! levels, which visits the same candidate set as full enumeration. It
//! shares no code with the barrier solver.

use crate::error::{Error, Result};
use crate::types::{CdfBand, SortedSample};

const MAX_ORACLE_N: usize = 4;
/// Lattice points within this distance of a band value count as on it.
const SNAP: f64 = 1e-12;

pub fn grid_oracle_solve(sample: &SortedSample, band: &CdfBand, step: f64) -> Result<f64> {
    let n = sample.len();
    if n > MAX_ORACLE_N {
        return Err(Error::InvalidArgument(format!(
            "grid oracle supports n <= {MAX_ORACLE_N}, got {n}"
        )));
    }
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::InvalidArgument(format!(
            "step {step} outside (0, 0.1]"
        )));
    }
    let levels = (1.0 / step).round() as usize;
    let value = |k: usize| k as f64 / levels as f64;
    let log_gap: Vec<f64> = (0..=levels).map(|g| value(g).ln()).collect();

    // best[k]: best log-likelihood of a partial path ending at lattice level k.
    let mut best: Vec<Option<f64>> = vec![None; levels + 1];
    best[0] = Some(0.0);
    for (i, &x) in sample.values().iter().enumerate() {
        let last = i + 1 == n;
        let (lo, hi) = if last {
            (1.0, 1.0)
        } else {
            (band.lower().eval_right(x), band.upper().eval_right(x))
        };
        let mut next: Vec<Option<f64>> = vec![None; levels + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let v = value(k);
            if v < lo - SNAP || v > hi + SNAP {
                continue;
            }
            let mut acc: Option<f64> = None;
            for (j, prev) in best.iter().enumerate().take(k + 1) {
                if let Some(p) = prev {
                    let cand = p + log_gap[k - j];
                    if acc.is_none_or(|a| cand > a) {
                        acc = Some(cand);
                    }
                }
            }
            *slot = acc;
        }
        best = next;
    }
    let loglik = best[levels].ok_or(Error::InfeasibleBand)?;
    let nf = n as f64;
    if loglik == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((-(loglik + nf * nf.ln()) / nf).max(0.0))
}
