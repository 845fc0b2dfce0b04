//! ELRDF when the band collapses to a single, fully known CDF.
//!
//! The weights are then fixed at the spacings `F(X_i) - F(X_{i-1})` of the
//! transformed order statistics. Under the null each spacing of an
//! `n`-sample has density `n (1 - w)^(n-1)` and mean `1/(n+1)`, so the
//! statistic settles at `log(1 + 1/n)` rather than 0. Averaging spacings
//! over `k` random groups of `m` concentrates it at `log(1 + 1/m)`.

use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::types::{ecdf, SortedSample, StepCdf, TiePolicy, WeightVector};

/// A fully specified null distribution function.
pub trait NullCdf {
    fn cdf(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> NullCdf for F {
    fn cdf(&self, x: f64) -> f64 {
        self(x)
    }
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, PartialEq)]
pub enum NullModel {
    Normal { mean: f64, sd: f64 },
    Uniform { a: f64, b: f64 },
    Empirical(StepCdf),
}

impl NullModel {
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0) || !mean.is_finite() {
            return Err(Error::InvalidArgument(format!("bad normal({mean}, {sd})")));
        }
        Ok(Self::Normal { mean, sd })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("bad uniform({a}, {b})")));
        }
        Ok(Self::Uniform { a, b })
    }

    /// ECDF of reference noise; ties are allowed here.
    pub fn empirical(values: &[f64]) -> Result<Self> {
        Ok(Self::Empirical(ecdf_with_ties(values)?))
    }

    /// Parses `normal:<mean>:<sd>`, `uniform:<a>:<b>` or `ecdf:<file>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad null spec `{spec}`"));
        let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
        let pair = || -> Result<(f64, f64)> {
            let (a, b) = rest.split_once(':').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        };
        match kind {
            "normal" => {
                let (m, s) = pair()?;
                Self::normal(m, s)
            }
            "uniform" => {
                let (a, b) = pair()?;
                Self::uniform(a, b)
            }
            "ecdf" => Self::empirical(&crate::io::read_sample(Path::new(rest))?),
            _ => Err(bad()),
        }
    }
}

impl FromStr for NullModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl NullCdf for NullModel {
    fn cdf(&self, x: f64) -> f64 {
        match self {
            NullModel::Normal { mean, sd } => standard_normal_cdf((x - mean) / sd),
            NullModel::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            NullModel::Empirical(f) => f.eval_right(x),
        }
    }
}

/// ECDF of unsorted values that may contain ties.
pub fn ecdf_with_ties(values: &[f64]) -> Result<StepCdf> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut knots = Vec::new();
    let mut levels = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        if knots.last() == Some(&v) {
            *levels.last_mut().unwrap() = (i + 1) as f64 / n;
        } else {
            knots.push(v);
            levels.push((i + 1) as f64 / n);
        }
    }
    if knots.len() == sorted.len() {
        return Ok(ecdf(&SortedSample::new(sorted)?));
    }
    StepCdf::new(knots, levels)
}

/// Spacings of the null CDF at the ordered sample; they sum to `F(X_n)`.
pub fn degenerate_weights(sample: &SortedSample, null: &impl NullCdf) -> Result<WeightVector> {
    let x = sample.values();
    let mut w = Vec::with_capacity(x.len());
    let mut prev_x = f64::NEG_INFINITY;
    let mut prev_f = 0.0;
    for &xi in x {
        let f = null.cdf(xi);
        if !(0.0..=1.0).contains(&f) || f < prev_f {
            return Err(Error::NonMonotoneCdf(prev_x, xi));
        }
        w.push(f - prev_f);
        prev_f = f;
        prev_x = xi;
    }
    let total: f64 = w.iter().sum();
    if prev_f == 0.0 {
        // Whole sample sits where the null has no mass; report the zero weights as-is.
        return Ok(WeightVector::new_unchecked(w, 0.0));
    }
    WeightVector::new(w, total)
}

/// Assignment of `n = k * m` observations to `k` groups of `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingPlan {
    groups: usize,
    group_size: usize,
    assignment: Vec<usize>,
}

impl GroupingPlan {
    /// `assignment[g * m + j]` is the index of the `j`-th member of group `g`.
    pub fn new(groups: usize, group_size: usize, assignment: Vec<usize>) -> Result<Self> {
        if groups == 0 || group_size == 0 {
            return Err(Error::InvalidArgument(
                "groups and group size must be positive".into(),
            ));
        }
        let n = groups * group_size;
        if assignment.len() != n {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} entries, expected {n}",
                assignment.len()
            )));
        }
        let mut seen = vec![false; n];
        for &a in &assignment {
            if a >= n || std::mem::replace(&mut seen[a], true) {
                return Err(Error::InvalidArgument(
                    "assignment is not a permutation".into(),
                ));
            }
        }
        Ok(Self {
            groups,
            group_size,
            assignment,
        })
    }

    /// Consecutive blocks: group `g` holds indices `g*m .. (g+1)*m`.
    pub fn sequential(groups: usize, group_size: usize) -> Result<Self> {
        Self::new(groups, group_size, (0..groups * group_size).collect())
    }

    pub fn random<R: Rng + ?Sized>(groups: usize, group_size: usize, rng: &mut R) -> Result<Self> {
        let mut assignment: Vec<usize> = (0..groups * group_size).collect();
        assignment.shuffle(rng);
        Self::new(groups, group_size, assignment)
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn group(&self, g: usize) -> &[usize] {
        &self.assignment[g * self.group_size..(g + 1) * self.group_size]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sidedness {
    /// Large statistics are evidence for H1.
    #[default]
    OneSided,
    /// Distance from the null reference `log(1 + 1/m)`.
    TwoSided,
}

/// Value the grouped statistic concentrates at under the null.
pub fn grouped_reference(group_size: usize) -> f64 {
    (1.0 / group_size as f64).ln_1p()
}

/// Averaged-spacing statistic `-(1/m) sum_j log(m w~_j)`.
pub fn grouped_statistic(
    raw: &[f64],
    null: &impl NullCdf,
    plan: &GroupingPlan,
    ties: TiePolicy,
) -> Result<f64> {
    if raw.len() != plan.len() {
        return Err(Error::InvalidArgument(format!(
            "{} observations for a plan over {}",
            raw.len(),
            plan.len()
        )));
    }
    let m = plan.group_size();
    let mut averaged = vec![0.0; m];
    let mut members = Vec::with_capacity(m);
    for g in 0..plan.groups() {
        members.clear();
        members.extend(plan.group(g).iter().map(|&i| raw[i]));
        let sorted = SortedSample::canonicalize(&members, ties)?;
        let w = degenerate_weights(&sorted, null)?;
        for (acc, wi) in averaged.iter_mut().zip(w.weights()) {
            *acc += wi;
        }
    }
    let k = plan.groups() as f64;
    let mf = m as f64;
    if averaged.iter().any(|&a| !(a > 0.0)) {
        return Ok(f64::INFINITY);
    }
    let log_ratio: f64 = averaged.iter().map(|&a| (mf * a / k).ln()).sum();
    Ok(-log_ratio / mf)
}

pub fn grouped_score(
    raw: &[f64],
    null: &impl NullCdf,
    plan: &GroupingPlan,
    ties: TiePolicy,
    side: Sidedness,
) -> Result<f64> {
    let stat = grouped_statistic(raw, null, plan, ties)?;
    Ok(match side {
        Sidedness::OneSided => stat,
        Sidedness::TwoSided => (stat - grouped_reference(plan.group_size())).abs(),
    })
}

/// CDF of a single null spacing of an `n`-sample: `1 - (1 - w)^n`.
pub fn spacing_cdf(n: usize, w: f64) -> f64 {
    let w = w.clamp(0.0, 1.0);
    -(n as f64 * (-w).ln_1p()).exp_m1()
}
