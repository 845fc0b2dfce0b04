//! Log-barrier path following for the band-constrained empirical likelihood.
//!
//! In cumulative coordinates `s_1 < ... < s_{n-1}` (with `s_0 = 0`,
//! `s_n = 1`) the objective `sum_i log(s_i - s_{i-1})` is strictly concave
//! and its Hessian is tridiagonal, so each Newton step is an O(n) LDL^T
//! solve. Once the barrier path has identified the active bounds, a short
//! active-set Newton phase lands exactly on them.

use crate::elrdf::bounds::{Feasibility, TightenedBounds};
use crate::elrdf::ElrdfResult;
use crate::error::{Error, Result};
use crate::types::WeightVector;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Target bound on the barrier duality gap and the Newton decrement.
    pub tol: f64,
    /// Cap on Newton iterations across all stages.
    pub max_iterations: usize,
    pub initial_barrier: f64,
    pub barrier_decrease: f64,
    /// Newton decrement at which a barrier stage is considered centered.
    pub newton_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iterations: 500,
            initial_barrier: 1.0,
            barrier_decrease: 10.0,
            newton_tol: 1e-8,
        }
    }
}

/// Fraction of each barrier argument that must survive a step.
const KEEP_FRACTION: f64 = 0.01;
const ARMIJO: f64 = 1e-4;
/// Below this predicted gain (relative to the objective) the Armijo test is
/// pure rounding noise and is skipped.
const FLAT_GAIN: f64 = 1e-10;
const POLISH_ROUNDS: usize = 16;
const POLISH_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pin {
    Free,
    AtLower,
    AtUpper,
}

struct Problem<'a> {
    bounds: &'a TightenedBounds,
    pins: Vec<Pin>,
    /// Barrier weight; zero disables the box barrier.
    tau: f64,
}

impl Problem<'_> {
    fn objective(&self, s: &[f64]) -> f64 {
        let mut total = 0.0;
        let mut prev = 0.0;
        for &v in s.iter().chain(std::iter::once(&1.0)) {
            let w = v - prev;
            if !(w > 0.0) {
                return f64::NEG_INFINITY;
            }
            total += w.ln();
            prev = v;
        }
        if self.tau > 0.0 {
            for (k, &v) in s.iter().enumerate() {
                if self.pins[k] != Pin::Free {
                    continue;
                }
                let (a, b) = (v - self.bounds.lower[k], self.bounds.upper[k] - v);
                if !(a > 0.0 && b > 0.0) {
                    return f64::NEG_INFINITY;
                }
                total += self.tau * (a.ln() + b.ln());
            }
        }
        total
    }

    /// Newton direction and squared decrement at `s`.
    fn newton(&self, s: &[f64]) -> (Vec<f64>, f64) {
        let m = s.len();
        let w = weights_of(s);
        let mut grad = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        for k in 0..m {
            if self.pins[k] != Pin::Free {
                diag[k] = 1.0;
                continue;
            }
            let (a, b) = (1.0 / w[k], 1.0 / w[k + 1]);
            grad[k] = a - b;
            diag[k] = a * a + b * b;
            if self.tau > 0.0 {
                let lo = 1.0 / (s[k] - self.bounds.lower[k]);
                let hi = 1.0 / (self.bounds.upper[k] - s[k]);
                grad[k] += self.tau * (lo - hi);
                diag[k] += self.tau * (lo * lo + hi * hi);
            }
            if k + 1 < m && self.pins[k + 1] == Pin::Free {
                off[k] = -b * b;
            }
        }
        let dir = solve_tridiagonal(&diag, &off, &grad);
        let dec2 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum::<f64>();
        (dir, dec2.max(0.0))
    }

    /// Largest step keeping every log argument above `KEEP_FRACTION` of its value.
    fn max_step(&self, s: &[f64], dir: &[f64]) -> f64 {
        let m = s.len();
        let mut alpha = 1.0f64;
        let mut limit = |arg: f64, change: f64| {
            if change < 0.0 {
                alpha = alpha.min((1.0 - KEEP_FRACTION) * arg / -change);
            }
        };
        let w = weights_of(s);
        for i in 0..=m {
            let up = if i < m { dir[i] } else { 0.0 };
            let down = if i > 0 { dir[i - 1] } else { 0.0 };
            limit(w[i], up - down);
        }
        if self.tau > 0.0 {
            for k in 0..m {
                if self.pins[k] == Pin::Free {
                    limit(s[k] - self.bounds.lower[k], dir[k]);
                    limit(self.bounds.upper[k] - s[k], -dir[k]);
                }
            }
        }
        alpha
    }

    /// Damped Newton until the decrement drops below `tol`. Returns false if
    /// the iteration budget ran out.
    fn center(&self, s: &mut [f64], tol: f64, budget: &mut usize, steps_cap: usize) -> bool {
        for _ in 0..steps_cap {
            let (dir, dec2) = self.newton(s);
            if dec2.sqrt() < tol {
                return true;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let phi0 = self.objective(s);
            let flat = dec2 <= FLAT_GAIN * (1.0 + phi0.abs());
            let mut alpha = self.max_step(s, &dir);
            let mut trial = vec![0.0; s.len()];
            loop {
                for (t, (v, d)) in trial.iter_mut().zip(s.iter().zip(&dir)) {
                    *t = v + alpha * d;
                }
                let phi = self.objective(&trial);
                if phi.is_finite() && (flat || phi >= phi0 + ARMIJO * alpha * dec2) {
                    s.copy_from_slice(&trial);
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-14 {
                    // Stalled at rounding level: the iterate is as centered as it gets.
                    return true;
                }
            }
        }
        true
    }
}

/// `w_1 .. w_n` from the interior cumulative values.
fn weights_of(s: &[f64]) -> Vec<f64> {
    let mut w = Vec::with_capacity(s.len() + 1);
    let mut prev = 0.0;
    for &v in s {
        w.push(v - prev);
        prev = v;
    }
    w.push(1.0 - prev);
    w
}

/// Solves a symmetric positive-definite tridiagonal system by LDL^T.
/// `off[k]` couples unknowns `k` and `k + 1`.
pub(crate) fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let m = diag.len();
    if m == 0 {
        return Vec::new();
    }
    let mut d = vec![0.0; m];
    let mut l = vec![0.0; m];
    let mut y = vec![0.0; m];
    d[0] = diag[0];
    y[0] = rhs[0];
    for k in 1..m {
        l[k] = off[k - 1] / d[k - 1];
        d[k] = diag[k] - l[k] * off[k - 1];
        y[k] = rhs[k] - l[k] * y[k - 1];
    }
    let mut x = vec![0.0; m];
    x[m - 1] = y[m - 1] / d[m - 1];
    for k in (0..m - 1).rev() {
        x[k] = y[k] / d[k] - l[k + 1] * x[k + 1];
    }
    x
}

/// Gradient of the statistic's log-likelihood `(1/n) sum log w_i` in cumulative coordinates.
pub(crate) fn scaled_gradient(s: &[f64]) -> Vec<f64> {
    let n = (s.len() + 1) as f64;
    let w = weights_of(s);
    (0..s.len())
        .map(|k| (1.0 / w[k] - 1.0 / w[k + 1]) / n)
        .collect()
}

/// Projected-gradient residual: zero exactly at a KKT point of the box problem.
pub(crate) fn kkt_residual(s: &[f64], bounds: &TightenedBounds) -> f64 {
    scaled_gradient(s)
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let projected = (s[k] + g).clamp(bounds.lower[k], bounds.upper[k]);
            (s[k] - projected).abs()
        })
        .fold(0.0, f64::max)
}

/// A strictly increasing point strictly inside every non-pinned box, or
/// `None` when no such point is representable.
fn interior_start(n: usize, bounds: &TightenedBounds) -> Option<Vec<f64>> {
    let m = n - 1;
    let (lower, upper) = (&bounds.lower, &bounds.upper);
    let mut delta = 0.5 / n as f64;
    while delta > 1e-15 {
        let mut lo = vec![0.0; m];
        let mut prev = 0.0;
        for k in 0..m {
            lo[k] = lower[k].max(prev + delta);
            prev = lo[k];
        }
        let mut hi = vec![0.0; m];
        let mut next = 1.0;
        for k in (0..m).rev() {
            hi[k] = upper[k].min(next - delta);
            next = hi[k];
        }
        let ok = (0..m).all(|k| lo[k] <= hi[k])
            && lo.windows(2).all(|p| p[0] < p[1])
            && hi.windows(2).all(|p| p[0] < p[1])
            && m.checked_sub(1)
                .is_none_or(|last| hi[last] < 1.0 && lo[0] > 0.0);
        if ok {
            let margin = delta.min(1.0 / n as f64) / 4.0;
            let start: Vec<f64> = (0..m)
                .map(|k| {
                    let c = ((k + 1) as f64 / n as f64).clamp(lo[k], hi[k]);
                    if bounds.is_pinned(k) {
                        lower[k]
                    } else {
                        let eta = margin.min((upper[k] - lower[k]) / 4.0);
                        c.clamp(lower[k] + eta, upper[k] - eta)
                    }
                })
                .collect();
            let strictly_inside = start
                .iter()
                .enumerate()
                .all(|(k, &v)| bounds.is_pinned(k) || (v > lower[k] && v < upper[k]));
            let increasing = weights_of(&start).iter().all(|&w| w > 0.0);
            if strictly_inside && increasing {
                return Some(start);
            }
        }
        delta *= 0.5;
    }
    None
}

fn finish(s: &[f64], bounds: &TightenedBounds, iterations: usize) -> ElrdfResult {
    let w = weights_of(s);
    let n = w.len();
    let statistic = super::likelihood_statistic(&w);
    let kkt = if n > 1 { kkt_residual(s, bounds) } else { 0.0 };
    ElrdfResult {
        weights: WeightVector::new(w, 1.0).expect("cumulative path from 0 to 1"),
        statistic,
        kkt_residual: kkt,
        iterations,
    }
}

/// Feasible but every admissible weight vector has a zero: likelihood 0.
fn boundary_result(n: usize, bounds: &TightenedBounds) -> ElrdfResult {
    let mut s = Vec::with_capacity(n - 1);
    let mut prev = 0.0f64;
    for k in 0..n - 1 {
        prev = prev.max(bounds.lower[k]).min(1.0);
        s.push(prev);
    }
    let w: Vec<f64> = weights_of(&s).into_iter().map(|x| x.max(0.0)).collect();
    let total: f64 = w.iter().sum();
    let w = w.into_iter().map(|x| x / total).collect();
    ElrdfResult {
        weights: WeightVector::new(w, 1.0).expect("normalized"),
        statistic: f64::INFINITY,
        kkt_residual: 0.0,
        iterations: 0,
    }
}

/// Maximizes `sum log w_i` over the tightened box for a sample of size `n`.
pub fn solve_bounds(
    n: usize,
    bounds: &TightenedBounds,
    opts: &SolverOptions,
) -> Result<ElrdfResult> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if bounds.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "bounds have {} rows, expected {}",
            bounds.len(),
            n - 1
        )));
    }
    match bounds.feasibility {
        Feasibility::Infeasible => return Err(Error::InfeasibleBand),
        Feasibility::BoundaryOnly => return Ok(boundary_result(n, bounds)),
        Feasibility::InteriorFeasible => {}
    }
    let m = n - 1;
    let uniform: Vec<f64> = (1..n).map(|i| i as f64 / n as f64).collect();
    if (0..m).all(|k| bounds.lower[k] <= uniform[k] && uniform[k] <= bounds.upper[k]) {
        let w = vec![1.0 / n as f64; n];
        return Ok(ElrdfResult {
            weights: WeightVector::new(w, 1.0)?,
            statistic: 0.0,
            kkt_residual: 0.0,
            iterations: 0,
        });
    }

    let Some(mut s) = interior_start(n, bounds) else {
        log::debug!("no representable interior point; treating band as boundary-only");
        return Ok(boundary_result(n, bounds));
    };
    let pins: Vec<Pin> = (0..m)
        .map(|k| {
            if bounds.is_pinned(k) {
                Pin::AtLower
            } else {
                Pin::Free
            }
        })
        .collect();
    if pins.iter().all(|p| *p != Pin::Free) {
        return Ok(finish(&s, bounds, 0));
    }

    let mut budget = opts.max_iterations;
    let mut problem = Problem {
        bounds,
        pins: pins.clone(),
        tau: opts.initial_barrier,
    };
    loop {
        if !problem.center(&mut s, opts.newton_tol, &mut budget, usize::MAX) {
            let best = finish(&s, bounds, opts.max_iterations - budget);
            return Err(Error::MaxIterationsExceeded(Box::new(best)));
        }
        if 2.0 * m as f64 * problem.tau < opts.tol {
            break;
        }
        problem.tau /= opts.barrier_decrease;
    }

    let tau = problem.tau;
    let barrier = finish(&s, bounds, opts.max_iterations - budget);
    match polish(&s, bounds, &pins, tau, &mut budget) {
        Some(exact) => Ok(finish(&exact, bounds, opts.max_iterations - budget)),
        None => Ok(barrier),
    }
}

/// Active-set Newton: fix the bounds the barrier path flags as active,
/// re-solve the rest without the barrier, and swap constraints in or out
/// until the KKT conditions hold.
fn polish(
    s: &[f64],
    bounds: &TightenedBounds,
    pins: &[Pin],
    tau: f64,
    budget: &mut usize,
) -> Option<Vec<f64>> {
    let m = s.len();
    let mut state: Vec<Pin> = pins.to_vec();
    let threshold = tau.sqrt();
    for k in 0..m {
        if state[k] != Pin::Free {
            continue;
        }
        if s[k] - bounds.lower[k] < threshold {
            state[k] = Pin::AtLower;
        } else if bounds.upper[k] - s[k] < threshold {
            state[k] = Pin::AtUpper;
        }
    }

    for _ in 0..POLISH_ROUNDS {
        let mut x = s.to_vec();
        for k in 0..m {
            match state[k] {
                Pin::AtLower => x[k] = bounds.lower[k],
                Pin::AtUpper => x[k] = bounds.upper[k],
                Pin::Free => {}
            }
        }
        if weights_of(&x).iter().any(|&w| !(w > 0.0)) {
            return None;
        }
        let problem = Problem {
            bounds,
            pins: state.clone(),
            tau: 0.0,
        };
        problem.center(&mut x, 1e-13, budget, POLISH_STEPS);

        // Primal check: free coordinates inside their box.
        let mut changed = false;
        for k in 0..m {
            if state[k] != Pin::Free {
                continue;
            }
            if x[k] < bounds.lower[k] {
                state[k] = Pin::AtLower;
                changed = true;
            } else if x[k] > bounds.upper[k] {
                state[k] = Pin::AtUpper;
                changed = true;
            }
        }
        if changed {
            continue;
        }
        // Dual check: multipliers of active bounds have the right sign.
        let g = scaled_gradient(&x);
        let mut worst: Option<(usize, f64)> = None;
        for k in 0..m {
            if pins[k] != Pin::Free {
                continue;
            }
            let violation = match state[k] {
                Pin::AtLower => g[k],
                Pin::AtUpper => -g[k],
                Pin::Free => 0.0,
            };
            if violation > 1e-12 && worst.is_none_or(|(_, v)| violation > v) {
                worst = Some((k, violation));
            }
        }
        match worst {
            Some((k, _)) => state[k] = Pin::Free,
            None => return Some(x),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_matches_dense_solution() {
        // [[4,1,0],[1,4,1],[0,1,4]] x = [1,2,3]
        let x = solve_tridiagonal(&[4.0, 4.0, 4.0], &[1.0, 1.0], &[1.0, 2.0, 3.0]);
        let back = [
            4.0 * x[0] + x[1],
            x[0] + 4.0 * x[1] + x[2],
            x[1] + 4.0 * x[2],
        ];
        for (b, want) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((b - want).abs() < 1e-14);
        }
    }

    #[test]
    fn gradient_matches_central_differences() {
        let s = vec![0.1, 0.35, 0.4, 0.8];
        let n = (s.len() + 1) as f64;
        let f = |s: &[f64]| weights_of(s).iter().map(|w| w.ln()).sum::<f64>() / n;
        let g = scaled_gradient(&s);
        let h = 1e-6;
        for k in 0..s.len() {
            let mut up = s.clone();
            let mut down = s.clone();
            up[k] += h;
            down[k] -= h;
            let fd = (f(&up) - f(&down)) / (2.0 * h);
            assert!(
                ((fd - g[k]) / g[k]).abs() < 1e-6,
                "k={k}: fd={fd} g={}",
                g[k]
            );
        }
    }

    #[test]
    fn interior_start_respects_tight_chain() {
        let b = TightenedBounds::from_raw(&[0.5, 0.5, 0.5], &[0.5000001, 0.5000002, 1.0]);
        let s = interior_start(4, &b).unwrap();
        assert!(weights_of(&s).iter().all(|&w| w > 0.0));
        for ((v, lo), hi) in s.iter().zip(&b.lower).zip(&b.upper) {
            assert!(v > lo && v < hi);
        }
    }

    #[test]
    fn one_dimensional_active_lower_bound() {
        let b = TightenedBounds::from_raw(&[0.8], &[0.9]);
        let r = solve_bounds(2, &b, &SolverOptions::default()).unwrap();
        assert_eq!(r.weights.weights(), &[0.8, 0.19999999999999996]);
        assert!(r.kkt_residual < 1e-12);
    }
}
