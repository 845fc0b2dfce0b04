use rand::Rng;

use crate::error::{Error, Result};
use crate::types::Decision;

use super::noise::NoiseModel;
use super::rng::stream_rng;

/// Gains are drawn from a stream disjoint from the noise stream.
const GAIN_STREAM_BIT: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fading {
    /// Constant gain across the observation window.
    Slow(f64),
    /// I.i.d. gains uniform on `[low, high]`.
    Fast { low: f64, high: f64 },
}

/// `Y_i = h_i X + v_i` with the signal `X` fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub fading: Fading,
}

impl ChannelModel {
    pub fn slow(h: f64) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::NonFinite(h));
        }
        Ok(Self {
            fading: Fading::Slow(h),
        })
    }

    pub fn fast(low: f64, high: f64) -> Result<Self> {
        if !(low < high) || !low.is_finite() || !high.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "fast fading needs low < high, got [{low}, {high}]"
            )));
        }
        Ok(Self {
            fading: Fading::Fast { low, high },
        })
    }

    pub fn gains(&self, n: usize, seed: u64, stream: u64) -> Vec<f64> {
        match self.fading {
            Fading::Slow(h) => vec![h; n],
            Fading::Fast { low, high } => {
                let mut rng = stream_rng(seed, stream | GAIN_STREAM_BIT);
                (0..n).map(|_| rng.random_range(low..high)).collect()
            }
        }
    }
}

/// Pure noise under H0, `h_i + v_i` under H1.
pub fn gen_observation(
    channel: &ChannelModel,
    noise: &NoiseModel,
    n: usize,
    hypothesis: Decision,
    stream: u64,
) -> Vec<f64> {
    let mut y = super::noise::gen_noise(noise, n, stream);
    if hypothesis == Decision::H1 {
        for (v, h) in y.iter_mut().zip(channel.gains(n, noise.seed, stream)) {
            *v += h;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slow_gain_shift() {
        let noise = NoiseModel::gaussian(0.0, 1e-9, 0).unwrap();
        let y = gen_observation(
            &ChannelModel::slow(3.0).unwrap(),
            &noise,
            20,
            Decision::H1,
            1,
        );
        assert!(y.iter().all(|v| (v - 3.0).abs() < 1e-6));
        let h0 = gen_observation(
            &ChannelModel::slow(3.0).unwrap(),
            &noise,
            20,
            Decision::H0,
            1,
        );
        assert!(h0.iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn zero_gain_matches_h0() {
        let noise = NoiseModel::gaussian(0.0, 1.0, 5).unwrap();
        let ch = ChannelModel::slow(0.0).unwrap();
        assert_eq!(
            gen_observation(&ch, &noise, 50, Decision::H1, 2),
            gen_observation(&ch, &noise, 50, Decision::H0, 2)
        );
    }

    #[test]
    fn fast_gains_uniform() {
        let ch = ChannelModel::fast(-10.0, 10.0).unwrap();
        let h = ch.gains(100_000, 1, 0);
        assert!(h.iter().all(|v| (-10.0..=10.0).contains(v)));
        let mean = h.iter().sum::<f64>() / h.len() as f64;
        let se = 20.0 / 12f64.sqrt() / (h.len() as f64).sqrt();
        assert!(mean.abs() < 3.0 * se);
        assert!(ChannelModel::fast(1.0, 1.0).is_err());
    }
}
