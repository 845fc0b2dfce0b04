//! CDF bands as the envelope of ECDFs over consecutive sample groups.

use crate::error::{Error, Result};
use crate::types::{CdfBand, StepCdf};

/// Splits `raw` into consecutive groups of `group_size` and returns the
/// pointwise min/max of the group ECDFs on the union of their knots.
/// Trailing samples that do not fill a group are dropped.
pub fn build_band(raw: &[f64], group_size: usize) -> Result<CdfBand> {
    if group_size == 0 {
        return Err(Error::InvalidArgument(
            "group size must be at least 1".into(),
        ));
    }
    let groups = raw.len() / group_size;
    if groups < 2 {
        return Err(Error::TooFewSamples {
            needed: 2 * group_size,
            got: raw.len(),
        });
    }
    if let Some(&bad) = raw.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let dropped = raw.len() - groups * group_size;
    if dropped > 0 {
        log::warn!(
            "discarding {dropped} trailing samples that do not fill a group of {group_size}"
        );
    }

    let mut points: Vec<(f64, usize)> = raw[..groups * group_size]
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i / group_size))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let m = group_size as f64;
    let mut counts = vec![0usize; groups];
    // hist[c]: number of groups whose running count is c
    let mut hist = vec![0usize; group_size + 1];
    hist[0] = groups;
    let (mut min_count, mut max_count) = (0usize, 0usize);

    let mut knots = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut i = 0;
    while i < points.len() {
        let x = points[i].0;
        while i < points.len() && points[i].0 == x {
            let g = points[i].1;
            hist[counts[g]] -= 1;
            counts[g] += 1;
            hist[counts[g]] += 1;
            max_count = max_count.max(counts[g]);
            i += 1;
        }
        while hist[min_count] == 0 {
            min_count += 1;
        }
        knots.push(x);
        lower.push(min_count as f64 / m);
        upper.push(max_count as f64 / m);
    }
    // the final knot reaches 1 exactly in both edges
    CdfBand::new(
        StepCdf::new(knots.clone(), lower)?,
        StepCdf::new(knots, upper)?,
    )
}

/// `(knot, upper - lower)` on the merged knots of the band.
pub fn band_width_profile(band: &CdfBand) -> Vec<(f64, f64)> {
    band.knots()
        .into_iter()
        .map(|k| (k, band.upper().eval_right(k) - band.lower().eval_right(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{ecdf, SortedSample};
    use proptest::prelude::*;

    #[test]
    fn identical_groups_collapse() {
        let band = build_band(&[0.5, 0.1, 0.9, 0.1, 0.9, 0.5], 3).unwrap();
        assert_eq!(band.lower(), band.upper());
        assert_eq!(band.lower().levels(), &[1.0 / 3.0, 2.0 / 3.0, 1.0]);
        assert!(band_width_profile(&band).iter().all(|&(_, w)| w == 0.0));
    }

    #[test]
    fn disjoint_groups() {
        let band = build_band(&[0.0, 1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(band.lower().eval_right(1.5), 0.0);
        assert_eq!(band.upper().eval_right(1.5), 1.0);
        let profile = band_width_profile(&band);
        assert_eq!(
            profile,
            vec![(0.0, 0.5), (1.0, 1.0), (2.0, 0.5), (3.0, 0.0)]
        );
    }

    #[test]
    fn remainder_dropped_and_too_few() {
        let band = build_band(&[0.0, 1.0, 2.0, 3.0, 100.0], 2).unwrap();
        assert_eq!(*band.knots().last().unwrap(), 3.0);
        assert!(matches!(
            build_band(&[0.0, 1.0, 2.0], 2),
            Err(Error::TooFewSamples { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn vacuous_widths_in_unit_interval() {
        let w = band_width_profile(&CdfBand::vacuous());
        assert!(w.iter().all(|&(_, v)| (0.0..=1.0).contains(&v)));
    }

    proptest! {
        #[test]
        fn every_group_ecdf_inside(
            raw in prop::collection::vec(-5.0f64..5.0, 6..60),
            m in 1usize..6,
        ) {
            prop_assume!(raw.len() >= 2 * m);
            let band = build_band(&raw, m).unwrap();
            for chunk in raw.chunks_exact(m) {
                let mut v = chunk.to_vec();
                v.sort_by(f64::total_cmp);
                v.dedup();
                if v.len() == m {
                    let e = ecdf(&SortedSample::new(v).unwrap());
                    prop_assert!(band.contains(&e));
                }
            }
            prop_assert!(band_width_profile(&band).iter().all(|&(_, w)| w >= 0.0));
        }

        #[test]
        fn adding_a_group_never_narrows(
            raw in prop::collection::vec(-5.0f64..5.0, 12..40),
        ) {
            let m = 3;
            let groups = raw.len() / m;
            let sup = |b: &CdfBand| band_width_profile(b).iter().map(|p| p.1).fold(0.0, f64::max);
            let fewer = build_band(&raw[..(groups - 1) * m], m).unwrap();
            let more = build_band(&raw[..groups * m], m).unwrap();
            prop_assert!(sup(&more) >= sup(&fewer));
        }
    }
}
