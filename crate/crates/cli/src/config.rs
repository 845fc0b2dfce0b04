//! Flat `key=value` experiment configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use bandtest_core::degenerate::{NullModel, Sidedness};
use bandtest_core::simulation::{
    BandSource, ChannelModel, ExperimentConfig, MixtureComponent, NoiseKind, NoiseModel,
};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` {msg}")]
    Range {
        line: usize,
        key: String,
        msg: String,
    },
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error(transparent)]
    Core(#[from] bandtest_core::Error),
}

type Result<T> = std::result::Result<T, ConfigError>;

pub const KEYS: &[&str] = &[
    "test",
    "noise.kind",
    "noise.mean",
    "noise.sd",
    "noise.components",
    "noise.block_len",
    "noise.sd_low",
    "noise.sd_high",
    "channel.fading",
    "channel.h",
    "channel.low",
    "channel.high",
    "n",
    "trials",
    "thresholds.count",
    "seed",
    "tol",
    "band.file",
    "band.group_size",
    "band.samples",
    "degen.groups",
    "degen.group_size",
    "degen.null",
    "degen.two_sided",
    "elrm.moment",
    "elrm.lower",
    "elrm.upper",
];

struct Entries {
    map: BTreeMap<&'static str, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn float(&mut self, key: &str) -> Result<Option<f64>> {
        Ok(self.float_at(key)?.map(|(_, x)| x))
    }

    fn float_at(&mut self, key: &str) -> Result<Option<(usize, f64)>> {
        let Some((line, v)) = self.take(key) else {
            return Ok(None);
        };
        let x: f64 = v.parse().map_err(|_| ConfigError::Parse {
            line,
            msg: format!("`{key}` expects a number, got `{v}`"),
        })?;
        if !x.is_finite() {
            return Err(range(line, key, "must be finite"));
        }
        Ok(Some((line, x)))
    }

    fn int(&mut self, key: &str, min: i64) -> Result<Option<u64>> {
        let Some((line, v)) = self.take(key) else {
            return Ok(None);
        };
        let x: i64 = v.parse().map_err(|_| ConfigError::Parse {
            line,
            msg: format!("`{key}` expects an integer, got `{v}`"),
        })?;
        if x < min {
            return Err(range(
                line,
                key,
                &format!("must be at least {min}, got {x}"),
            ));
        }
        Ok(Some(x as u64))
    }

    fn size(&mut self, key: &str, min: i64, default: usize) -> Result<usize> {
        Ok(self.int(key, min)?.map_or(default, |v| v as usize))
    }

    fn bool(&mut self, key: &str) -> Result<Option<bool>> {
        let Some((line, v)) = self.take(key) else {
            return Ok(None);
        };
        match v.as_str() {
            "true" | "1" | "yes" => Ok(Some(true)),
            "false" | "0" | "no" => Ok(Some(false)),
            _ => Err(ConfigError::Parse {
                line,
                msg: format!("`{key}` expects true or false, got `{v}`"),
            }),
        }
    }
}

fn range(line: usize, key: &str, msg: &str) -> ConfigError {
    ConfigError::Range {
        line,
        key: key.to_string(),
        msg: msg.to_string(),
    }
}

fn lex(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| ConfigError::Parse {
            line,
            msg: format!("expected key=value, got `{body}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let key =
            *KEYS
                .iter()
                .find(|&&known| known == k)
                .ok_or_else(|| ConfigError::UnknownKey {
                    line,
                    key: k.to_string(),
                })?;
        if let Some((first, _)) = map.insert(key, (line, v.to_string())) {
            return Err(ConfigError::Parse {
                line,
                msg: format!("`{key}` already set on line {first}"),
            });
        }
    }
    Ok(Entries { map })
}

fn core_err(line: usize) -> impl Fn(bandtest_core::Error) -> ConfigError {
    move |e| ConfigError::Parse {
        line,
        msg: e.to_string(),
    }
}

fn parse_components(line: usize, text: &str) -> Result<Vec<MixtureComponent>> {
    text.split(',')
        .map(|part| {
            let f: Vec<&str> = part.split(':').map(str::trim).collect();
            let nums: Option<Vec<f64>> = f.iter().map(|s| s.parse().ok()).collect();
            match nums.as_deref() {
                Some(&[weight, mean, sd]) => Ok(MixtureComponent { weight, mean, sd }),
                _ => Err(ConfigError::Parse {
                    line,
                    msg: format!("mixture component `{part}` is not weight:mean:sd"),
                }),
            }
        })
        .collect()
}

fn noise(e: &mut Entries, seed: u64) -> Result<NoiseModel> {
    let (line, kind) = e.take("noise.kind").unwrap_or((0, "block".to_string()));
    let kind = match kind.as_str() {
        "gaussian" => NoiseKind::Gaussian {
            mean: e.float("noise.mean")?.unwrap_or(0.0),
            sd: e.float("noise.sd")?.unwrap_or(1.0),
        },
        "mixture" => {
            let (cl, text) = e
                .take("noise.components")
                .ok_or_else(|| ConfigError::MissingKey("noise.components".into()))?;
            NoiseKind::Mixture(parse_components(cl, &text)?)
        }
        "block" => NoiseKind::BlockNonstationary {
            block_len: e.size("noise.block_len", 1, 100)?,
            sd_low: e.float("noise.sd_low")?.unwrap_or(0.5),
            sd_high: e.float("noise.sd_high")?.unwrap_or(2.0),
        },
        other => {
            return Err(ConfigError::Parse {
                line,
                msg: format!("unknown noise kind `{other}` (gaussian, mixture, block)"),
            })
        }
    };
    NoiseModel::new(kind, seed).map_err(core_err(line))
}

fn channel(e: &mut Entries) -> Result<ChannelModel> {
    let (line, fading) = e.take("channel.fading").unwrap_or((0, "fast".to_string()));
    match fading.as_str() {
        "slow" => {
            let h = e
                .float("channel.h")?
                .ok_or_else(|| ConfigError::MissingKey("channel.h".into()))?;
            ChannelModel::slow(h).map_err(core_err(line))
        }
        "fast" => {
            let low = e.float("channel.low")?.unwrap_or(-10.0);
            let high = e.float("channel.high")?.unwrap_or(10.0);
            ChannelModel::fast(low, high).map_err(core_err(line))
        }
        other => Err(ConfigError::Parse {
            line,
            msg: format!("unknown fading `{other}` (slow, fast)"),
        }),
    }
}

/// Parses a configuration; absent keys take their defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut e = lex(text)?;
    let mut cfg = ExperimentConfig::default();
    if let Some((line, t)) = e.take("test") {
        cfg.test = t.parse().map_err(core_err(line))?;
    }
    cfg.seed = e.int("seed", 0)?.unwrap_or(0);
    cfg.noise = noise(&mut e, cfg.seed)?;
    cfg.channel = channel(&mut e)?;
    cfg.n = e.size("n", 1, cfg.n)?;
    cfg.trials = e.size("trials", 1, cfg.trials)?;
    cfg.threshold_count = e.size("thresholds.count", 2, cfg.threshold_count)?;
    if let Some((line, tol)) = e.float_at("tol")? {
        if !(tol > 0.0) {
            return Err(range(line, "tol", "must be positive"));
        }
        cfg.tol = tol;
    }
    let group_size = e.size("band.group_size", 1, 100)?;
    let samples = e.size("band.samples", 2, 100_000)?;
    cfg.band = match e.take("band.file") {
        Some((_, path)) => BandSource::File(PathBuf::from(path)),
        None => BandSource::Noise {
            samples,
            group_size,
        },
    };
    cfg.degen_groups = e.size("degen.groups", 1, cfg.degen_groups)?;
    cfg.degen_group_size = e.size("degen.group_size", 1, cfg.degen_group_size)?;
    if let Some((line, spec)) = e.take("degen.null") {
        cfg.null = Some(NullModel::parse(&spec).map_err(core_err(line))?);
    }
    if e.bool("degen.two_sided")?.unwrap_or(false) {
        cfg.sidedness = Sidedness::TwoSided;
    }
    if let Some((line, m)) = e.take("elrm.moment") {
        cfg.elrm.moment = m.parse().map_err(core_err(line))?;
    }
    match (e.float("elrm.lower")?, e.float("elrm.upper")?) {
        (Some(l), Some(u)) => cfg.elrm.bounds = Some((l, u)),
        (None, None) => {}
        (Some(_), None) => return Err(ConfigError::MissingKey("elrm.upper".into())),
        (None, Some(_)) => return Err(ConfigError::MissingKey("elrm.lower".into())),
    }
    if let Some((&key, &(line, _))) = e.map.iter().next() {
        return Err(ConfigError::Parse {
            line,
            msg: format!("`{key}` has no effect with this configuration"),
        });
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bandtest_core::simulation::{Fading, TestKind};

    #[test]
    fn empty_is_default() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.tol, 1e-8);
        assert_eq!(cfg.trials, 2000);
        assert_eq!(cfg.seed, 0);
        assert_eq!(
            cfg.band,
            BandSource::Noise {
                samples: 100_000,
                group_size: 100
            }
        );
    }

    #[test]
    fn group_size_and_comments() {
        let cfg = parse_config("# band\nband.group_size = 100  # per group\n\ntest=rks\n").unwrap();
        assert_eq!(
            cfg.band,
            BandSource::Noise {
                samples: 100_000,
                group_size: 100
            }
        );
        assert_eq!(cfg.test, TestKind::RobustKs);
    }

    #[test]
    fn negative_trials_is_range_error() {
        assert!(matches!(
            parse_config("trials=-5"),
            Err(ConfigError::Range { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("n=0"),
            Err(ConfigError::Range { .. })
        ));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(matches!(
            parse_config("seed=1\nfoo=2"),
            Err(ConfigError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("seed"),
            Err(ConfigError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("trials=many"),
            Err(ConfigError::Parse { .. })
        ));
        assert!(matches!(
            parse_config("seed=1\nseed=2"),
            Err(ConfigError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("channel.fading=slow"),
            Err(ConfigError::MissingKey(_))
        ));
        assert!(matches!(
            parse_config("noise.kind=gaussian\nnoise.sd_low=1"),
            Err(ConfigError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn full_config() {
        let text = "test=degen\nnoise.kind=mixture\nnoise.components=0.5:0:1, 0.5:0:3\nchannel.fading=slow\nchannel.h=-3\n\
                    seed=9\ndegen.groups=10\ndegen.group_size=1\ndegen.null=normal:0:2\ndegen.two_sided=true\nthresholds.count=50";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.channel.fading, Fading::Slow(-3.0));
        assert_eq!(cfg.noise.seed, 9);
        assert_eq!((cfg.degen_groups, cfg.degen_group_size), (10, 1));
        assert_eq!(cfg.sidedness, Sidedness::TwoSided);
        assert_eq!(cfg.threshold_count, 50);
    }
}
