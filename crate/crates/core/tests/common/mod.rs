//! Brute-force references shared by the integration and acceptance tests.
#![allow(dead_code)]

use bandtest_core::types::{merged_knots, CdfBand, SortedSample, StepCdf};
use rand::Rng;

pub const GRID: f64 = 1e-3;
const EPS: f64 = 1e-12;

fn on_grid(k: u32) -> f64 {
    f64::from(k) / 1000.0
}

/// Random band whose levels are multiples of 1e-3, with sorted sample of `n`
/// distinct points drawn from the same coarse integer range.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, max_knots: usize) -> (SortedSample, CdfBand) {
    let mut xs: Vec<i32> = Vec::new();
    while xs.len() < n {
        let v = rng.random_range(-40..40);
        if !xs.contains(&v) {
            xs.push(v);
        }
    }
    xs.sort();
    let mut ks: Vec<i32> = Vec::new();
    let m = rng.random_range(1..=max_knots);
    while ks.len() < m {
        let v = rng.random_range(-45..45);
        if !ks.contains(&v) {
            ks.push(v);
        }
    }
    ks.sort();
    let mut lower: Vec<u32> = (0..m).map(|_| rng.random_range(0..=1000)).collect();
    lower.sort();
    let mut upper = Vec::with_capacity(m);
    let mut run = 0u32;
    for &l in &lower {
        let width = rng.random_range(20..=600);
        run = run.max((l + width).min(1000));
        upper.push(run);
    }
    let knots: Vec<f64> = ks.iter().map(|&k| f64::from(k) / 2.0).collect();
    let band = CdfBand::new(
        StepCdf::new(knots.clone(), lower.into_iter().map(on_grid).collect()).unwrap(),
        StepCdf::new(knots, upper.into_iter().map(on_grid).collect()).unwrap(),
    )
    .unwrap();
    let sample =
        SortedSample::new(xs.iter().map(|&x| f64::from(x) / 2.0 + 0.25).collect()).unwrap();
    (sample, band)
}

/// Values of a step CDF at the merged knots, plus the value before them.
fn right_values(f: &StepCdf, knots: &[f64]) -> Vec<f64> {
    knots.iter().map(|&k| f.eval_right(k)).collect()
}

fn ecdf_at(sample: &SortedSample, x: f64) -> f64 {
    let c = sample.values().partition_point(|&v| v <= x);
    c as f64 / sample.len() as f64
}

/// Smallest grid `d` for which some monotone step CDF on the merged knots
/// stays within the band and within `d` of the ECDF everywhere.
pub fn ks_oracle(sample: &SortedSample, band: &CdfBand) -> f64 {
    let mut knots = merged_knots(&[band.lower(), band.upper()]);
    knots.extend_from_slice(sample.values());
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let lo = right_values(band.lower(), &knots);
    let hi = right_values(band.upper(), &knots);
    let fe: Vec<f64> = knots.iter().map(|&k| ecdf_at(sample, k)).collect();
    let feasible = |d: f64| {
        let mut g = 0.0f64;
        for j in 0..knots.len() {
            g = g.max(lo[j]).max(fe[j] - d);
            if g > hi[j].min(fe[j] + d) + EPS {
                return false;
            }
        }
        true
    };
    (0..=1000)
        .map(on_grid)
        .find(|&d| feasible(d))
        .unwrap_or(f64::INFINITY)
}

/// `sup_x |F_e(x) - G(x)|` for `G` given by its values at `knots`.
pub fn sup_distance(sample: &SortedSample, knots: &[f64], g: &[f64]) -> f64 {
    let mut all = knots.to_vec();
    all.extend_from_slice(sample.values());
    all.sort_by(f64::total_cmp);
    all.dedup();
    let g_at = |x: f64| -> f64 {
        let j = knots.partition_point(|&k| k <= x);
        if j == 0 {
            0.0
        } else {
            g[j - 1]
        }
    };
    let mut sup = 0.0f64;
    for &x in &all {
        sup = sup.max((ecdf_at(sample, x) - g_at(x)).abs());
        let left = x - 1e-9;
        sup = sup.max((ecdf_at(sample, left) - g_at(left)).abs());
    }
    sup
}

/// A random monotone CDF inside the band, given by its values at the merged knots.
pub fn random_in_band<R: Rng>(rng: &mut R, band: &CdfBand) -> (Vec<f64>, Vec<f64>) {
    let knots = band.knots();
    let mut g = Vec::with_capacity(knots.len());
    let mut prev = 0.0f64;
    for &k in &knots {
        let (l, u) = (band.lower().eval_right(k), band.upper().eval_right(k));
        let a = prev.max(l);
        let v = a + rng.random::<f64>() * (u - a).max(0.0);
        g.push(v);
        prev = v;
    }
    (knots, g)
}

/// Monotone box-constrained least squares by enumerating every partition of
/// `0..n` into consecutive blocks that share a value.
pub fn cvm_qp_oracle(sample: &SortedSample, band: &CdfBand) -> f64 {
    let n = sample.len();
    let nf = n as f64;
    let t: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64 / (2.0 * nf)).collect();
    let lo: Vec<f64> = sample
        .values()
        .iter()
        .map(|&x| band.lower().eval_right(x))
        .collect();
    let hi: Vec<f64> = sample
        .values()
        .iter()
        .map(|&x| band.upper().eval_right(x))
        .collect();
    let mut best = f64::INFINITY;
    'cut: for mask in 0u32..(1 << (n - 1)) {
        let mut f = vec![0.0; n];
        let mut start = 0;
        for end in 1..=n {
            if end == n || mask & (1 << (end - 1)) != 0 {
                let block = start..end;
                let mean = t[block.clone()].iter().sum::<f64>() / (end - start) as f64;
                let l = lo[block.clone()].iter().copied().fold(0.0, f64::max);
                let u = hi[block.clone()].iter().copied().fold(1.0, f64::min);
                if l > u {
                    continue 'cut;
                }
                let c = mean.clamp(l, u);
                f[block].iter_mut().for_each(|v| *v = c);
                start = end;
            }
        }
        if f.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        let obj: f64 = t.iter().zip(&f).map(|(a, b)| (a - b).powi(2)).sum();
        best = best.min(obj);
    }
    1.0 / (12.0 * nf) + best
}

/// Best `-(1/n) sum log(n w_i)` over the simplex grid with step `1/steps`
/// subject to `l <= sum w_i g_i <= u`; `g.len()` is 2 or 3.
pub fn elrm_grid_oracle(g: &[f64], l: f64, u: f64, steps: u32) -> f64 {
    let n = g.len();
    let nf = n as f64;
    let h = 1.0 / f64::from(steps);
    let score = |w: &[f64]| -> Option<f64> {
        let m: f64 = w.iter().zip(g).map(|(a, b)| a * b).sum();
        if m < l - EPS || m > u + EPS || w.iter().any(|&x| x <= 0.0) {
            return None;
        }
        Some(-w.iter().map(|&x| (nf * x).ln()).sum::<f64>() / nf)
    };
    let mut best = f64::INFINITY;
    match n {
        2 => {
            for a in 1..steps {
                let w = [f64::from(a) * h, f64::from(steps - a) * h];
                if let Some(s) = score(&w) {
                    best = best.min(s);
                }
            }
        }
        3 => {
            for a in 1..steps {
                for b in 1..steps - a {
                    let w = [
                        f64::from(a) * h,
                        f64::from(b) * h,
                        f64::from(steps - a - b) * h,
                    ];
                    if let Some(s) = score(&w) {
                        best = best.min(s);
                    }
                }
            }
        }
        _ => panic!("grid oracle supports n = 2 or 3"),
    }
    best.max(0.0)
}

/// Two-sample Kolmogorov-Smirnov distance; both inputs sorted.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    two_sample_signed(a, b).0.max(two_sample_signed(a, b).1)
}

/// `(sup (F_a - F_b), sup (F_b - F_a))`; both inputs sorted.
pub fn two_sample_signed(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (mut i, mut j) = (0usize, 0usize);
    let (mut plus, mut minus) = (0.0f64, 0.0f64);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => break,
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        let d = i as f64 / a.len() as f64 - j as f64 / b.len() as f64;
        plus = plus.max(d);
        minus = minus.max(-d);
    }
    (plus, minus)
}

/// One-sample KS distance of sorted `v` against `cdf`.
pub fn ks_against(v: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Band `Phi(x) -/+ margin` as step functions on a fine grid.
pub fn normal_band(margin: f64) -> CdfBand {
    let phi = bandtest_core::degenerate::standard_normal_cdf;
    let grid: Vec<f64> = (-800..=800).map(|i| f64::from(i) / 100.0).collect();
    let lower = StepCdf::new(
        grid.clone(),
        grid.iter()
            .map(|&x| (phi(x) - margin).clamp(0.0, 1.0))
            .collect(),
    )
    .unwrap();
    let mut uk = vec![f64::NEG_INFINITY];
    uk.extend_from_slice(&grid);
    let mut ul: Vec<f64> = grid.iter().map(|&x| (phi(x) + margin).min(1.0)).collect();
    ul.push(1.0);
    let upper = StepCdf::new(uk, ul).unwrap();
    CdfBand::new(lower, upper).unwrap()
}
