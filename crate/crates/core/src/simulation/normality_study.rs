use rayon::prelude::*;

use crate::baselines::ks_normality_statistic;
use crate::error::{Error, Result};
use crate::types::Decision;

use super::noise::{gen_noise, NoiseModel};
use super::rng::trial_stream;

/// Sorted normality statistics at one sample size; index `i` is the
/// `(i + 1) / reps` quantile.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityCurves {
    pub size: usize,
    pub gaussian: Vec<f64>,
    pub nonstationary: Vec<f64>,
}

fn curve(model: &NoiseModel, size: usize, reps: usize) -> Result<Vec<f64>> {
    let mut stats = (0..reps as u64)
        .into_par_iter()
        .map(|r| ks_normality_statistic(&gen_noise(model, size, trial_stream(Decision::H0, r))))
        .collect::<Result<Vec<f64>>>()?;
    stats.sort_by(f64::total_cmp);
    Ok(stats)
}

/// KS normality statistic distribution under stationary Gaussian noise and
/// under `nonstationary`, for each sample size.
pub fn normality_study(
    sizes: &[usize],
    reps: usize,
    nonstationary: &NoiseModel,
) -> Result<Vec<NormalityCurves>> {
    if reps == 0 || reps as u64 >= 1 << 32 {
        return Err(Error::InvalidArgument(format!(
            "reps must be in 1..2^32, got {reps}"
        )));
    }
    let gaussian = NoiseModel::gaussian(0.0, 1.0, nonstationary.seed)?;
    sizes
        .iter()
        .map(|&size| {
            if size < 2 {
                return Err(Error::TooFewSamples {
                    needed: 2,
                    got: size,
                });
            }
            Ok(NormalityCurves {
                size,
                gaussian: curve(&gaussian, size, reps)?,
                nonstationary: curve(nonstationary, size, reps)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_order() {
        let model = NoiseModel::block_nonstationary(100, 0.5, 2.0, 1).unwrap();
        let out = normality_study(&[10, 50], 200, &model).unwrap();
        assert_eq!(out.len(), 2);
        for c in &out {
            assert_eq!(c.gaussian.len(), 200);
            assert!(c.gaussian.windows(2).all(|w| w[0] <= w[1]));
            assert!(c.nonstationary.windows(2).all(|w| w[0] <= w[1]));
        }
        assert!(normality_study(&[1], 10, &model).is_err());
    }

    #[test]
    fn gaussian_statistic_shrinks_with_n() {
        let model = NoiseModel::block_nonstationary(100, 1.0, 1.0, 2).unwrap();
        let out = normality_study(&[10, 100], 500, &model).unwrap();
        let median = |v: &[f64]| v[v.len() / 2];
        assert!(median(&out[1].gaussian) < median(&out[0].gaussian));
    }
}
