use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    Gaussian {
        mean: f64,
        sd: f64,
    },
    Mixture(Vec<MixtureComponent>),
    /// Zero-mean Gaussian whose sd is redrawn from `U[sd_low, sd_high]`
    /// every `block_len` samples. The first block starts at a random phase.
    BlockNonstationary {
        block_len: usize,
        sd_low: f64,
        sd_high: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub seed: u64,
}

fn check_sd(sd: f64) -> Result<()> {
    if sd > 0.0 && sd.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "standard deviation must be positive, got {sd}"
        )))
    }
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, seed: u64) -> Result<Self> {
        match &kind {
            NoiseKind::Gaussian { mean, sd } => {
                if !mean.is_finite() {
                    return Err(Error::NonFinite(*mean));
                }
                check_sd(*sd)?;
            }
            NoiseKind::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidArgument("mixture needs a component".into()));
                }
                for p in parts {
                    if !(p.weight > 0.0) || !p.mean.is_finite() {
                        return Err(Error::InvalidArgument(format!(
                            "bad mixture component {p:?}"
                        )));
                    }
                    check_sd(p.sd)?;
                }
                let total: f64 = parts.iter().map(|p| p.weight).sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "mixture weights sum to {total}"
                    )));
                }
            }
            NoiseKind::BlockNonstationary {
                block_len,
                sd_low,
                sd_high,
            } => {
                if *block_len == 0 {
                    return Err(Error::InvalidArgument(
                        "block length must be at least 1".into(),
                    ));
                }
                check_sd(*sd_low)?;
                check_sd(*sd_high)?;
                if sd_low > sd_high {
                    return Err(Error::InvalidArgument(format!(
                        "sd interval [{sd_low}, {sd_high}] is empty"
                    )));
                }
            }
        }
        Ok(Self { kind, seed })
    }

    pub fn gaussian(mean: f64, sd: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseKind::Gaussian { mean, sd }, seed)
    }

    pub fn block_nonstationary(
        block_len: usize,
        sd_low: f64,
        sd_high: f64,
        seed: u64,
    ) -> Result<Self> {
        Self::new(
            NoiseKind::BlockNonstationary {
                block_len,
                sd_low,
                sd_high,
            },
            seed,
        )
    }

    pub(crate) fn fill<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        match &self.kind {
            NoiseKind::Gaussian { mean, sd } => (0..n)
                .map(|_| {
                    let e: f64 = StandardNormal.sample(rng);
                    mean + sd * e
                })
                .collect(),
            NoiseKind::Mixture(parts) => {
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    let u: f64 = rng.random();
                    let mut acc = 0.0;
                    let mut pick = parts[parts.len() - 1];
                    for p in parts {
                        acc += p.weight;
                        if u < acc {
                            pick = *p;
                            break;
                        }
                    }
                    let e: f64 = StandardNormal.sample(rng);
                    out.push(pick.mean + pick.sd * e);
                }
                out
            }
            NoiseKind::BlockNonstationary {
                block_len,
                sd_low,
                sd_high,
            } => {
                let mut out = Vec::with_capacity(n);
                let mut left = rng.random_range(1..=*block_len);
                let mut sd = draw_sd(rng, *sd_low, *sd_high);
                while out.len() < n {
                    if left == 0 {
                        left = *block_len;
                        sd = draw_sd(rng, *sd_low, *sd_high);
                    }
                    let e: f64 = StandardNormal.sample(rng);
                    out.push(sd * e);
                    left -= 1;
                }
                out
            }
        }
    }
}

fn draw_sd<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// `n` noise samples; a pure function of `(model.seed, stream)`.
pub fn gen_noise(model: &NoiseModel, n: usize, stream: u64) -> Vec<f64> {
    model.fill(n, &mut stream_rng(model.seed, stream))
}
