use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::SortedSample;

/// Scalar moment function `g`.
pub trait MomentFn {
    fn eval(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> MomentFn for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Named moment functions selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    /// `g(x) = x`
    Mean,
    /// `g(x) = x^2`
    Square,
    /// `g(x) = |x|`
    Abs,
}

impl MomentFn for Moment {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Moment::Mean => x,
            Moment::Square => x * x,
            Moment::Abs => x.abs(),
        }
    }
}

impl FromStr for Moment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" | "x" => Ok(Moment::Mean),
            "square" | "x2" => Ok(Moment::Square),
            "abs" => Ok(Moment::Abs),
            other => Err(Error::InvalidArgument(format!("unknown moment '{other}'"))),
        }
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Moment::Mean => "mean",
            Moment::Square => "square",
            Moment::Abs => "abs",
        })
    }
}

/// `l <= sum w_i g(X_i) <= u`.
#[derive(Debug, Clone)]
pub struct MomentConstraint<G> {
    pub g: G,
    pub lower: f64,
    pub upper: f64,
}

impl<G: MomentFn> MomentConstraint<G> {
    /// Bounds may be given in either order.
    pub fn new(g: G, a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite(a));
        }
        if !b.is_finite() {
            return Err(Error::NonFinite(b));
        }
        Ok(Self {
            g,
            lower: a.min(b),
            upper: a.max(b),
        })
    }
}

const ROOT_ITERS: usize = 200;

/// Empirical likelihood statistic under a scalar moment interval.
pub fn elrm_statistic<G: MomentFn>(
    sample: &SortedSample,
    constraint: &MomentConstraint<G>,
) -> Result<f64> {
    let (lower, upper) = (
        constraint.lower.min(constraint.upper),
        constraint.lower.max(constraint.upper),
    );
    let g: Vec<f64> = sample
        .values()
        .iter()
        .map(|&x| constraint.g.eval(x))
        .collect();
    if let Some(&bad) = g.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let n = g.len() as f64;
    let gmin = g.iter().copied().fold(f64::INFINITY, f64::min);
    let gmax = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = g.iter().sum::<f64>() / n;
    if lower <= mean && mean <= upper {
        return Ok(0.0);
    }
    let mu = if mean < lower { lower } else { upper };
    if mu < gmin || mu > gmax {
        return Err(Error::InfeasibleMoment {
            target: mu,
            min: gmin,
            max: gmax,
        });
    }
    if mu == gmin || mu == gmax {
        // only the extreme points may carry mass
        return Ok(f64::INFINITY);
    }
    let d: Vec<f64> = g.iter().map(|v| v - mu).collect();
    let lambda = solve_lambda(&d);
    let log_sum: f64 = d.iter().map(|&di| (lambda * di).ln_1p()).sum();
    Ok((log_sum / n).max(0.0))
}

/// Root of `h(l) = sum d_i / (1 + l d_i)` on `(-1/max d, -1/min d)`;
/// `h` is strictly decreasing there.
fn solve_lambda(d: &[f64]) -> f64 {
    let dmax = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut a, mut b) = (-1.0 / dmax, -1.0 / dmin);
    let h = |l: f64| -> (f64, f64) {
        d.iter().fold((0.0, 0.0), |(v, dv), &di| {
            let q = 1.0 + l * di;
            (v + di / q, dv - di * di / (q * q))
        })
    };
    let mut lambda = 0.0;
    for _ in 0..ROOT_ITERS {
        let (v, dv) = h(lambda);
        if v == 0.0 {
            return lambda;
        }
        if v > 0.0 {
            a = lambda;
        } else {
            b = lambda;
        }
        let newton = lambda - v / dv;
        let next = if newton > a && newton < b {
            newton
        } else {
            a + 0.5 * (b - a)
        };
        if next == lambda || b - a <= f64::EPSILON * lambda.abs().max(1e-300) {
            return next;
        }
        lambda = next;
    }
    lambda
}
