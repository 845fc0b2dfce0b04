use crate::types::{CdfBand, SortedSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// A strictly increasing cumulative path exists, so every weight can be positive.
    InteriorFeasible,
    /// Feasible, but every feasible weight vector has a zero entry.
    BoundaryOnly,
    /// No weight vector satisfies the band.
    Infeasible,
}

/// Box constraints on the cumulative weights `s_1 .. s_{n-1}`.
///
/// `lower[i]` is the running maximum of the lower edge over `X_1 ..= X_{i+1}`
/// and `upper[i]` the running minimum of the upper edge over
/// `X_{i+1} ..= X_{n-1}`, capped at 1. Since cumulative weights are
/// nondecreasing, the tightened box is equivalent to the raw constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct TightenedBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub feasibility: Feasibility,
}

impl TightenedBounds {
    /// Tightens raw per-point bounds (length `n - 1`) and classifies them.
    pub fn from_raw(raw_lower: &[f64], raw_upper: &[f64]) -> Self {
        assert_eq!(raw_lower.len(), raw_upper.len());
        let m = raw_lower.len();
        let mut lower = Vec::with_capacity(m);
        let mut running = 0.0f64;
        for &l in raw_lower {
            running = running.max(l);
            lower.push(running);
        }
        let mut upper = vec![0.0; m];
        let mut running = 1.0f64;
        for i in (0..m).rev() {
            running = running.min(raw_upper[i]);
            upper[i] = running;
        }
        let feasibility = classify(&lower, &upper);
        Self {
            lower,
            upper,
            feasibility,
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// Coordinate `i` is fixed by the band.
    pub fn is_pinned(&self, i: usize) -> bool {
        self.lower[i] >= self.upper[i]
    }
}

pub fn tighten_bounds(sample: &SortedSample, band: &CdfBand) -> TightenedBounds {
    let x = sample.values();
    let head = &x[..x.len() - 1];
    let raw_lower: Vec<f64> = head.iter().map(|&v| band.lower().eval_right(v)).collect();
    let raw_upper: Vec<f64> = head.iter().map(|&v| band.upper().eval_right(v)).collect();
    TightenedBounds::from_raw(&raw_lower, &raw_upper)
}

/// Exact classification: walk the infimum of each reachable `s_i`, tracking
/// whether it is attained, and check that a strictly increasing path from
/// `s_0 = 0` to `s_n = 1` survives.
fn classify(lower: &[f64], upper: &[f64]) -> Feasibility {
    if lower.iter().zip(upper).any(|(l, u)| l > u) || lower.iter().any(|&l| l > 1.0) {
        return Feasibility::Infeasible;
    }
    if upper.iter().any(|&u| u < 0.0) {
        return Feasibility::Infeasible;
    }
    let mut inf = 0.0f64;
    for (&l, &u) in lower.iter().zip(upper) {
        let attained = l > inf;
        inf = inf.max(l);
        if inf > u || (!attained && inf >= u) {
            return Feasibility::BoundaryOnly;
        }
    }
    if inf >= 1.0 {
        return Feasibility::BoundaryOnly;
    }
    Feasibility::InteriorFeasible
}
