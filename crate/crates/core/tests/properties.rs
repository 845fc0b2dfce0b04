use bandtest_core::band::build_band;
use bandtest_core::baselines::{ks_normality_statistic, robust_ks_statistic};
use bandtest_core::elrdf::solve_elrdf;
use bandtest_core::io::{read_band_from, write_band};
use bandtest_core::types::{ecdf, CdfBand, SortedSample, StepCdf};
use proptest::prelude::*;

fn sample_strategy() -> impl Strategy<Value = SortedSample> {
    prop::collection::btree_set(-1000i32..1000, 1..12).prop_map(|s| {
        SortedSample::new(s.into_iter().map(|v| f64::from(v) / 100.0).collect()).unwrap()
    })
}

fn band_strategy() -> impl Strategy<Value = CdfBand> {
    (
        prop::collection::btree_set(-1200i32..1200, 1..10),
        prop::collection::vec((0.0f64..1.0, 0.0f64..0.5), 10),
    )
        .prop_map(|(knots, levels)| {
            let knots: Vec<f64> = knots.into_iter().map(|v| f64::from(v) / 100.0).collect();
            let mut lo: Vec<f64> = levels[..knots.len()].iter().map(|p| p.0).collect();
            lo.sort_by(f64::total_cmp);
            let mut run = 0.0f64;
            let hi: Vec<f64> = lo
                .iter()
                .zip(&levels)
                .map(|(l, p)| {
                    run = run.max((l + p.1).min(1.0));
                    run
                })
                .collect();
            CdfBand::new(
                StepCdf::new(knots.clone(), lo).unwrap(),
                StepCdf::new(knots, hi).unwrap(),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn band_files_round_trip(band in band_strategy()) {
        let mut buf = Vec::new();
        write_band(&mut buf, &band).unwrap();
        let back = read_band_from(buf.as_slice()).unwrap();
        for k in band.knots() {
            prop_assert!((back.lower().eval_right(k) - band.lower().eval_right(k)).abs() <= 1e-12);
            prop_assert!((back.upper().eval_right(k) - band.upper().eval_right(k)).abs() <= 1e-12);
        }
    }

    #[test]
    fn elrdf_statistic_is_nonnegative_and_feasible(s in sample_strategy(), band in band_strategy()) {
        let r = solve_elrdf(&s, &band, 1e-8).unwrap();
        prop_assert!(r.statistic >= 0.0);
        if r.statistic.is_finite() {
            let cum = r.weights.cumulative();
            for (i, &x) in s.values().iter().enumerate().take(s.len() - 1) {
                prop_assert!(cum[i] >= band.lower().eval_right(x) - 1e-9);
                prop_assert!(cum[i] <= band.upper().eval_right(x) + 1e-9);
            }
        }
    }

    #[test]
    fn ecdf_inside_band_gives_zero(s in sample_strategy()) {
        let band = CdfBand::degenerate(ecdf(&s));
        prop_assert_eq!(robust_ks_statistic(&s, &band), 0.0);
        prop_assert_eq!(solve_elrdf(&s, &band, 1e-8).unwrap().statistic, 0.0);
    }

    #[test]
    fn built_band_contains_its_groups(raw in prop::collection::vec(-3.0f64..3.0, 20..80), m in 2usize..10) {
        prop_assume!(raw.len() >= 2 * m);
        let band = build_band(&raw, m).unwrap();
        for chunk in raw.chunks_exact(m) {
            if let Ok(s) = SortedSample::canonicalize(chunk, bandtest_core::TiePolicy::Error) {
                prop_assert!(band.contains(&ecdf(&s)));
            }
        }
    }

    #[test]
    fn normality_affine_invariant(v in prop::collection::vec(-5.0f64..5.0, 2..40), a in 0.01f64..100.0, b in -100.0f64..100.0) {
        prop_assume!(ks_normality_statistic(&v).is_ok());
        let w: Vec<f64> = v.iter().map(|x| a * x + b).collect();
        let d = ks_normality_statistic(&v).unwrap() - ks_normality_statistic(&w).unwrap();
        prop_assert!(d.abs() < 1e-12);
    }
}
