//! Synthetic noise, fading channels and the Monte-Carlo ROC harness.

mod channel;
mod experiment;
mod noise;
mod normality_study;
mod rng;
mod roc;

pub use channel::{gen_observation, ChannelModel, Fading};
pub use experiment::{
    run_experiment, BandSource, ElrmSettings, ExperimentConfig, ExperimentOutput, TestKind,
};
pub use noise::{gen_noise, MixtureComponent, NoiseKind, NoiseModel};
pub use normality_study::{normality_study, NormalityCurves};
pub use rng::{stream_rng, trial_stream, BAND_STREAM};
pub use roc::{
    auto_thresholds, roc_from_statistics, sweep_roc, trial_statistics, RocCurve, RocPoint,
};
