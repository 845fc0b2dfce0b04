//! Sample and step-function types shared by every statistic.
//!
//! All CDFs in this crate are right-continuous step functions: a
//! [`StepCdf`] takes the value `levels[j]` on `[knots[j], knots[j+1])` and
//! zero before its first knot. A knot at `-inf` is allowed and gives a
//! function that is constant over the whole real line.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Tolerance used when checking probability invariants.
pub const PROB_TOL: f64 = 1e-12;

/// Outcome of a binary test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    H0,
    H1,
}

impl Decision {
    /// Threshold rule shared by every detector: ties go to H0.
    pub fn from_threshold(statistic: f64, threshold: f64) -> Self {
        if statistic > threshold {
            Decision::H1
        } else {
            Decision::H0
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::H0 => "H0",
            Decision::H1 => "H1",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How exact duplicates are treated when canonicalizing raw observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Reject duplicates.
    #[default]
    Error,
    /// Nudge each duplicate up by one ulp past its predecessor.
    Jitter,
}

impl std::str::FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error" => Ok(TiePolicy::Error),
            "jitter" => Ok(TiePolicy::Jitter),
            other => Err(Error::InvalidArgument(format!(
                "unknown tie policy `{other}`"
            ))),
        }
    }
}

/// Observations in strictly increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Wraps values that are already strictly increasing and finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        for pair in values.windows(2) {
            match pair[0].partial_cmp(&pair[1]) {
                Some(Ordering::Less) => {}
                Some(Ordering::Equal) => return Err(Error::DuplicateSample(pair[0])),
                _ => {
                    return Err(Error::InvalidArgument(
                        "sample values must be strictly increasing".into(),
                    ))
                }
            }
        }
        Ok(Self { values })
    }

    /// Sorts raw observations and resolves ties according to `policy`.
    pub fn canonicalize(raw: &[f64], policy: TiePolicy) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = raw.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        let mut values = raw.to_vec();
        values.sort_by(f64::total_cmp);
        for i in 1..values.len() {
            if values[i] <= values[i - 1] {
                match policy {
                    TiePolicy::Error => return Err(Error::DuplicateSample(values[i])),
                    TiePolicy::Jitter => values[i] = values[i - 1].next_up(),
                }
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Right-continuous, piecewise-constant CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    knots: Vec<f64>,
    levels: Vec<f64>,
}

impl StepCdf {
    pub fn new(knots: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        if knots.len() != levels.len() {
            return Err(Error::InvalidStepCdf(format!(
                "{} knots but {} levels",
                knots.len(),
                levels.len()
            )));
        }
        if knots.iter().any(|k| k.is_nan() || *k == f64::INFINITY) {
            return Err(Error::InvalidStepCdf("knots must be finite or -inf".into()));
        }
        if knots.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidStepCdf(
                "knots must be strictly increasing".into(),
            ));
        }
        if levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::InvalidStepCdf("levels must lie in [0, 1]".into()));
        }
        if levels.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InvalidStepCdf("levels must be nondecreasing".into()));
        }
        Ok(Self { knots, levels })
    }

    /// The zero function; used as a neutral element when merging knots.
    pub fn flat() -> Self {
        Self {
            knots: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// A function equal to `level` on the whole real line.
    pub fn constant(level: f64) -> Result<Self> {
        Self::new(vec![f64::NEG_INFINITY], vec![level])
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Value at `x`.
    pub fn eval_right(&self, x: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            0.0
        } else {
            self.levels[idx - 1]
        }
    }

    /// Limit from the left at `x`.
    pub fn eval_left(&self, x: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k < x);
        if idx == 0 {
            0.0
        } else {
            self.levels[idx - 1]
        }
    }
}

/// ECDF of a sorted sample: jumps of `1/n` at every observation.
pub fn ecdf(sample: &SortedSample) -> StepCdf {
    let n = sample.len() as f64;
    let levels = (1..=sample.len()).map(|i| i as f64 / n).collect();
    StepCdf {
        knots: sample.values().to_vec(),
        levels,
    }
}

/// Sorted union of the knot sets of `cdfs`.
pub fn merged_knots(cdfs: &[&StepCdf]) -> Vec<f64> {
    let mut all: Vec<f64> = cdfs.iter().flat_map(|c| c.knots.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

/// Pair of step CDFs bounding the null hypothesis: `lower <= G <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfBand {
    lower: StepCdf,
    upper: StepCdf,
}

impl CdfBand {
    pub fn new(lower: StepCdf, upper: StepCdf) -> Result<Self> {
        // Both edges are constant between merged knots, so checking the knots suffices.
        for k in merged_knots(&[&lower, &upper]) {
            let (lo, hi) = (lower.eval_right(k), upper.eval_right(k));
            if lo > hi + PROB_TOL {
                return Err(Error::CrossedBand {
                    knot: k,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The band `0 <= G <= 1`, which constrains nothing.
    pub fn vacuous() -> Self {
        Self {
            lower: StepCdf::flat(),
            upper: StepCdf::constant(1.0).expect("1.0 is a valid level"),
        }
    }

    /// Band whose edges coincide.
    pub fn degenerate(cdf: StepCdf) -> Self {
        Self {
            lower: cdf.clone(),
            upper: cdf,
        }
    }

    pub fn lower(&self) -> &StepCdf {
        &self.lower
    }

    pub fn upper(&self) -> &StepCdf {
        &self.upper
    }

    pub fn knots(&self) -> Vec<f64> {
        merged_knots(&[&self.lower, &self.upper])
    }

    /// True when `cdf` lies inside the band everywhere.
    pub fn contains(&self, cdf: &StepCdf) -> bool {
        merged_knots(&[&self.lower, &self.upper, cdf])
            .into_iter()
            .all(|k| {
                let v = cdf.eval_right(k);
                self.lower.eval_right(k) <= v + PROB_TOL && v <= self.upper.eval_right(k) + PROB_TOL
            })
    }
}

/// Probability weights on the sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
    sum_target: f64,
}

impl WeightVector {
    pub fn new(w: Vec<f64>, sum_target: f64) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !(sum_target > 0.0 && sum_target <= 1.0 + PROB_TOL) {
            return Err(Error::InvalidArgument(format!(
                "weight total {sum_target} outside (0, 1]"
            )));
        }
        if let Some(&bad) = w.iter().find(|&&x| !(x >= 0.0)) {
            return Err(Error::InvalidArgument(format!("negative weight {bad}")));
        }
        let total: f64 = w.iter().sum();
        if (total - sum_target).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {total}, expected {sum_target}"
            )));
        }
        Ok(Self { w, sum_target })
    }

    /// Skips validation; used for all-zero spacings whose total is 0.
    pub(crate) fn new_unchecked(w: Vec<f64>, sum_target: f64) -> Self {
        Self { w, sum_target }
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn sum_target(&self) -> f64 {
        self.sum_target
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Prefix sums `s_i = w_1 + ... + w_i`.
    pub fn cumulative(&self) -> Vec<f64> {
        self.w
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }
}
