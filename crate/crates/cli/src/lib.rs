//! `bandtest` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bandtest_core::baselines::{ks_decide, Moment, MomentConstraint};
use bandtest_core::degenerate::{
    grouped_reference, grouped_score, GroupingPlan, NullModel, Sidedness,
};
use bandtest_core::elrdf::{elrdf_decide, solve_elrdf};
use bandtest_core::io::{read_band, read_sample, write_band};
use bandtest_core::simulation::{normality_study, run_experiment, stream_rng, NoiseModel};
use bandtest_core::{
    band_width_profile, build_band, elrm_statistic, ks_normality_statistic, robust_cvm_statistic,
    robust_ks_statistic, Decision, SortedSample, TiePolicy,
};
use clap::{Args, Parser, Subcommand};

pub use config::{parse_config, ConfigError};

pub const THREADS_ENV: &str = "BANDTEST_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bandtest_core::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 when the constraint set is empty, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use bandtest_core::Error as E;
        match self {
            CliError::Core(
                E::InfeasibleBand | E::CrossedBand { .. } | E::InfeasibleMoment { .. },
            ) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "bandtest",
    version,
    about = "Empirical likelihood detection under CDF-band uncertainty"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Observations, one per line (`#` starts a comment)
    #[arg(long)]
    pub sample: PathBuf,
    /// How to treat repeated values: `error` or `jitter`
    #[arg(long, default_value = "error")]
    pub ties: TiePolicy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band-constrained empirical likelihood statistic
    Elrdf {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        band: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Grouped statistic against a fully known null CDF
    Degen {
        #[command(flatten)]
        sample: SampleArgs,
        /// `normal:<mean>:<sd>`, `uniform:<a>:<b>` or `ecdf:<file>`
        #[arg(long)]
        null: String,
        #[arg(long)]
        groups: usize,
        #[arg(long)]
        group_size: usize,
        #[arg(long)]
        two_sided: bool,
        /// Seed for the random group assignment
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Robust Kolmogorov-Smirnov distance to the band
    Rks {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        band: PathBuf,
        /// Threshold on `sqrt(n) * statistic`
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Robust Cramer-von Mises statistic
    Rcvm {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        band: PathBuf,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Empirical likelihood under a moment interval
    Elrm {
        #[command(flatten)]
        sample: SampleArgs,
        /// `mean`, `square` or `abs`
        #[arg(long, default_value = "mean")]
        moment: Moment,
        #[arg(long, allow_hyphen_values = true)]
        lower: f64,
        #[arg(long, allow_hyphen_values = true)]
        upper: f64,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// KS distance to the fitted Gaussian
    Normality {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Band construction and inspection
    Band {
        #[command(subcommand)]
        command: BandCommand,
    },
    /// Monte-Carlo ROC experiment
    Roc {
        #[arg(long)]
        config: PathBuf,
        /// Directory for `roc.csv` and `summary.csv`
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Normality statistic under Gaussian and nonstationary noise
    NormalityStudy {
        #[arg(long, value_delimiter = ',', default_value = "10,50,100,500")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        block_len: usize,
        #[arg(long, default_value_t = 0.5)]
        sd_low: f64,
        #[arg(long, default_value_t = 2.0)]
        sd_high: f64,
        /// Write here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BandCommand {
    /// Envelope of group ECDFs
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        group_size: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// `knot,width` profile of a band file
    Width {
        #[arg(long)]
        band: PathBuf,
    },
}

fn load_sample(args: &SampleArgs) -> Result<SortedSample> {
    let raw = load_raw(&args.sample)?;
    Ok(SortedSample::canonicalize(&raw, args.ties)?)
}

fn load_raw(path: &Path) -> Result<Vec<f64>> {
    read_sample(path).map_err(|e| with_path(e, path))
}

fn load_band(path: &Path) -> Result<bandtest_core::CdfBand> {
    read_band(path).map_err(|e| with_path(e, path))
}

fn with_path(e: bandtest_core::Error, path: &Path) -> CliError {
    match e {
        bandtest_core::Error::Io(source) => CliError::File {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::Core(other),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })
}

fn line_with_decision(
    out: &mut dyn Write,
    statistic: f64,
    decision: Option<Decision>,
) -> Result<()> {
    match decision {
        Some(d) => writeln!(out, "{statistic},{d}")?,
        None => writeln!(out, "{statistic}")?,
    }
    Ok(())
}

/// Pool sized from `BANDTEST_THREADS` (unset or 0 means one per core).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a nonnegative integer, got `{v}`"
            ))
        })?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Runs the experiment in `config` and writes `roc.csv` and `summary.csv`.
pub fn run_roc(config: &Path, out_dir: &Path) -> Result<()> {
    let text = std::fs::read_to_string(config).map_err(|source| CliError::File {
        path: config.to_path_buf(),
        source,
    })?;
    let cfg = parse_config(&text)?;
    let out = thread_pool()?.install(|| run_experiment(&cfg))?;
    let mut roc = create(&out_dir.join("roc.csv"))?;
    writeln!(roc, "threshold,pf,pd")?;
    for p in &out.roc.points {
        writeln!(roc, "{},{},{}", p.threshold, p.pf, p.pd)?;
    }
    roc.flush()?;
    let mut summary = create(&out_dir.join("summary.csv"))?;
    writeln!(summary, "test,auc,flipped,seed")?;
    writeln!(
        summary,
        "{},{},{},{}",
        cfg.test, out.roc.auc, out.roc.flipped, cfg.seed
    )?;
    summary.flush()?;
    Ok(())
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Elrdf {
            sample,
            band,
            eta,
            tol,
        } => {
            if !(eta >= 0.0) {
                return Err(CliError::Usage(format!(
                    "--eta must be nonnegative, got {eta}"
                )));
            }
            let s = load_sample(&sample)?;
            let r = solve_elrdf(&s, &load_band(&band)?, tol)?;
            let d = elrdf_decide(r.statistic, eta);
            writeln!(
                out,
                "{},{},{},{}",
                r.statistic, d, r.iterations, r.kkt_residual
            )?;
        }
        Command::Degen {
            sample,
            null,
            groups,
            group_size,
            two_sided,
            seed,
            eta,
        } => {
            let raw = load_raw(&sample.sample)?;
            let null = NullModel::parse(&null)?;
            let plan = GroupingPlan::random(groups, group_size, &mut stream_rng(seed, 0))?;
            let side = if two_sided {
                Sidedness::TwoSided
            } else {
                Sidedness::OneSided
            };
            let stat = grouped_score(&raw, &null, &plan, sample.ties, side)?;
            let reference = grouped_reference(group_size);
            match eta {
                Some(eta) => writeln!(
                    out,
                    "{stat},{reference},{}",
                    Decision::from_threshold(stat, eta)
                )?,
                None => writeln!(out, "{stat},{reference}")?,
            }
        }
        Command::Rks {
            sample,
            band,
            gamma,
        } => {
            let s = load_sample(&sample)?;
            let d = robust_ks_statistic(&s, &load_band(&band)?);
            line_with_decision(out, d, gamma.map(|g| ks_decide(d, s.len(), g)))?;
        }
        Command::Rcvm { sample, band, eta } => {
            let s = load_sample(&sample)?;
            let t = robust_cvm_statistic(&s, &load_band(&band)?)?;
            line_with_decision(out, t, eta.map(|e| Decision::from_threshold(t, e)))?;
        }
        Command::Elrm {
            sample,
            moment,
            lower,
            upper,
            eta,
        } => {
            let s = load_sample(&sample)?;
            let t = elrm_statistic(&s, &MomentConstraint::new(moment, lower, upper)?)?;
            line_with_decision(out, t, eta.map(|e| Decision::from_threshold(t, e)))?;
        }
        Command::Normality { sample, eta } => {
            let t = ks_normality_statistic(&load_raw(&sample)?)?;
            line_with_decision(out, t, eta.map(|e| Decision::from_threshold(t, e)))?;
        }
        Command::Band { command } => match command {
            BandCommand::Build {
                input,
                group_size,
                output,
            } => {
                let band = build_band(&load_raw(&input)?, group_size)?;
                let mut w = create(&output)?;
                write_band(&mut w, &band)?;
                w.flush()?;
            }
            BandCommand::Width { band } => {
                writeln!(out, "knot,width")?;
                for (k, w) in band_width_profile(&load_band(&band)?) {
                    writeln!(out, "{k},{w}")?;
                }
            }
        },
        Command::Roc { config, out_dir } => run_roc(&config, &out_dir)?,
        Command::NormalityStudy {
            sizes,
            reps,
            seed,
            block_len,
            sd_low,
            sd_high,
            output,
        } => {
            let model = NoiseModel::block_nonstationary(block_len, sd_low, sd_high, seed)?;
            let curves = thread_pool()?.install(|| normality_study(&sizes, reps, &model))?;
            let mut sink: Box<dyn Write> = match &output {
                Some(p) => Box::new(create(p)?),
                None => Box::new(&mut *out),
            };
            writeln!(sink, "size,p,gaussian,nonstationary")?;
            for c in &curves {
                for (i, (g, ns)) in c.gaussian.iter().zip(&c.nonstationary).enumerate() {
                    writeln!(sink, "{},{},{g},{ns}", c.size, (i + 1) as f64 / reps as f64)?;
                }
            }
            sink.flush()?;
        }
    }
    Ok(())
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock).and_then(|()| lock.flush().map_err(CliError::from)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bandtest: {e}");
            e.exit_code()
        }
    }
}
