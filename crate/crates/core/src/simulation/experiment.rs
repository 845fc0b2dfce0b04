use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::band::build_band;
use crate::baselines::{
    elrm_statistic, ks_normality_statistic, robust_cvm_statistic, robust_ks_statistic, Moment,
    MomentConstraint, MomentFn,
};
use crate::degenerate::{grouped_score, GroupingPlan, NullModel, Sidedness};
use crate::elrdf::solve_elrdf;
use crate::error::{Error, Result};
use crate::io::read_band;
use crate::types::{Decision, SortedSample, TiePolicy};

use super::channel::{gen_observation, ChannelModel};
use super::noise::{gen_noise, NoiseModel};
use super::rng::{stream_rng, BAND_STREAM};
use super::roc::{auto_thresholds, roc_from_statistics, trial_statistics, RocCurve};

const PLAN_STREAM: u64 = 4 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Elrdf,
    RobustKs,
    RobustCvm,
    Elrm,
    Degenerate,
    Normality,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Elrdf => "elrdf",
            TestKind::RobustKs => "rks",
            TestKind::RobustCvm => "rcvm",
            TestKind::Elrm => "elrm",
            TestKind::Degenerate => "degen",
            TestKind::Normality => "normality",
        }
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "elrdf" => TestKind::Elrdf,
            "rks" => TestKind::RobustKs,
            "rcvm" => TestKind::RobustCvm,
            "elrm" => TestKind::Elrm,
            "degen" => TestKind::Degenerate,
            "normality" => TestKind::Normality,
            other => return Err(Error::InvalidArgument(format!("unknown test '{other}'"))),
        })
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BandSource {
    File(PathBuf),
    /// Built from `samples` draws of the experiment's noise model.
    Noise {
        samples: usize,
        group_size: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElrmSettings {
    pub moment: Moment,
    /// When absent, the range of group moments in the band noise is used.
    pub bounds: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub test: TestKind,
    /// Its seed is replaced by `seed`.
    pub noise: NoiseModel,
    pub channel: ChannelModel,
    pub n: usize,
    pub trials: usize,
    pub threshold_count: usize,
    pub seed: u64,
    pub band: BandSource,
    pub tol: f64,
    pub degen_groups: usize,
    pub degen_group_size: usize,
    pub sidedness: Sidedness,
    /// Null CDF for the degenerate test; defaults to the band noise ECDF.
    pub null: Option<NullModel>,
    pub elrm: ElrmSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            test: TestKind::Elrdf,
            noise: NoiseModel::block_nonstationary(100, 0.5, 2.0, 0).expect("valid default"),
            channel: ChannelModel::fast(-10.0, 10.0).expect("valid default"),
            n: 10,
            trials: 2000,
            threshold_count: 200,
            seed: 0,
            band: BandSource::Noise {
                samples: 100_000,
                group_size: 100,
            },
            tol: 1e-8,
            degen_groups: 1,
            degen_group_size: 10,
            sidedness: Sidedness::OneSided,
            null: None,
            elrm: ElrmSettings {
                moment: Moment::Mean,
                bounds: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub roc: RocCurve,
    pub thresholds: Vec<f64>,
    /// Per-trial statistics in trial order.
    pub h0: Vec<f64>,
    pub h1: Vec<f64>,
}

type StatFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

fn or_infinite(r: Result<f64>) -> f64 {
    match r {
        Ok(v) => v,
        Err(Error::MaxIterationsExceeded(best)) => best.statistic,
        Err(_) => f64::INFINITY,
    }
}

fn sorted(raw: &[f64]) -> Result<SortedSample> {
    SortedSample::canonicalize(raw, TiePolicy::Jitter)
}

fn moment_range(noise: &[f64], m: usize, g: Moment) -> (f64, f64) {
    noise
        .chunks_exact(m)
        .map(|c| c.iter().map(|&x| g.eval(x)).sum::<f64>() / m as f64)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

fn statistic_fn(cfg: &ExperimentConfig, noise: &NoiseModel) -> Result<StatFn> {
    let (band, band_noise, band_group) = match &cfg.band {
        BandSource::File(p) => (read_band(p)?, None, None),
        BandSource::Noise {
            samples,
            group_size,
        } => {
            let raw = gen_noise(noise, *samples, BAND_STREAM);
            (build_band(&raw, *group_size)?, Some(raw), Some(*group_size))
        }
    };
    let tol = cfg.tol;
    let f: StatFn = match cfg.test {
        TestKind::Elrdf => Box::new(move |x| {
            or_infinite(sorted(x).and_then(|s| Ok(solve_elrdf(&s, &band, tol)?.statistic)))
        }),
        TestKind::RobustKs => {
            Box::new(move |x| or_infinite(sorted(x).map(|s| robust_ks_statistic(&s, &band))))
        }
        TestKind::RobustCvm => {
            Box::new(move |x| or_infinite(sorted(x).and_then(|s| robust_cvm_statistic(&s, &band))))
        }
        TestKind::Normality => Box::new(|x| or_infinite(ks_normality_statistic(x))),
        TestKind::Elrm => {
            let g = cfg.elrm.moment;
            let (lo, hi) = match (cfg.elrm.bounds, &band_noise) {
                (Some(b), _) => b,
                (None, Some(raw)) => moment_range(raw, band_group.unwrap_or(100), g),
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "elrm with a band file needs explicit moment bounds".into(),
                    ))
                }
            };
            let constraint = MomentConstraint::new(g, lo, hi)?;
            Box::new(move |x| or_infinite(sorted(x).and_then(|s| elrm_statistic(&s, &constraint))))
        }
        TestKind::Degenerate => {
            let (k, m) = (cfg.degen_groups, cfg.degen_group_size);
            if k * m != cfg.n {
                return Err(Error::InvalidArgument(format!(
                    "degenerate test needs n = groups * group size, got {} != {k} * {m}",
                    cfg.n
                )));
            }
            let null = match (&cfg.null, &band_noise) {
                (Some(null), _) => null.clone(),
                (None, Some(raw)) => NullModel::empirical(raw)?,
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "degenerate test with a band file needs a null model".into(),
                    ))
                }
            };
            let plan = GroupingPlan::random(k, m, &mut stream_rng(cfg.seed, PLAN_STREAM))?;
            let side = cfg.sidedness;
            Box::new(move |x| or_infinite(grouped_score(x, &null, &plan, TiePolicy::Jitter, side)))
        }
    };
    Ok(f)
}

/// Runs the Monte-Carlo ROC experiment; a pure function of the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    if cfg.n == 0 || cfg.trials == 0 {
        return Err(Error::InvalidArgument(
            "n and trials must be positive".into(),
        ));
    }
    if cfg.trials as u64 >= 1 << 32 {
        return Err(Error::InvalidArgument("trials must be below 2^32".into()));
    }
    let noise = NoiseModel {
        seed: cfg.seed,
        ..cfg.noise.clone()
    };
    let stat = statistic_fn(cfg, &noise)?;
    let channel = cfg.channel;
    let n = cfg.n;
    let h0_gen = |s| gen_observation(&channel, &noise, n, Decision::H0, s);
    let h1_gen = |s| gen_observation(&channel, &noise, n, Decision::H1, s);
    let h0 = trial_statistics(&stat, &h0_gen, Decision::H0, cfg.trials);
    let h1 = trial_statistics(&stat, &h1_gen, Decision::H1, cfg.trials);
    let thresholds = auto_thresholds(&h0, &h1, cfg.threshold_count);
    let roc = roc_from_statistics(&h0, &h1, &thresholds);
    Ok(ExperimentOutput {
        roc,
        thresholds,
        h0,
        h1,
    })
}
