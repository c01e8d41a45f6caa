//! Command-line front end: argument parsing, report writing and exit codes.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qham_core::polytope::Source;
use qham_core::{SolverConfig, Tolerances};

use config::{check_out_dir, load_tol_file, parse_classes, parse_group, resolve_seed, RunConfig, SpaceChoice, SEED_ENV};
use error::{CliError, EXIT_CONFIG, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(name = "qham", version, about = "Numerical checks on quasi-Hamiltonian spaces of SU(n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the moment map axioms at sampled points.
    VerifyAxioms(Common),
    /// Check the hypotheses on the anti-symplectic involution.
    VerifyInvolution(Common),
    /// Dump momentum-image samples as CSV.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SourceArg::Full)]
        source: SourceArg,
    },
    /// Hull and convexity score of the momentum image.
    Polytope(Common),
    /// Compare the images of the full space and of the fixed-point set.
    RealConvexity(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SourceArg {
    Full,
    Fixed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpaceArg {
    Classes,
    Double,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Structure group, e.g. su3.
    #[arg(long)]
    pub group: String,
    /// Conjugacy classes as alcove angles: "a1,a2,a3;b1,b2,b3". Multiples of
    /// pi are accepted (pi/3, -2pi/5).
    #[arg(long, allow_hyphen_values = true)]
    pub classes: Option<String>,
    #[arg(long, value_enum, default_value_t = SpaceArg::Classes)]
    pub space: SpaceArg,
    /// Number of points (full-space samples for sampling commands).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Number of fixed-point samples.
    #[arg(long, default_value_t = 1000)]
    pub fixed_samples: usize,
    /// Base seed; falls back to QHAM_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Existing output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with [tolerances] and [solver] tables.
    #[arg(long)]
    pub tol_file: Option<PathBuf>,
    /// Grid resolution per dimension of the convexity score.
    #[arg(long, default_value_t = 50)]
    pub grid_res: usize,
    /// Record elapsed seconds in the report (breaks byte reproducibility).
    #[arg(long)]
    pub wall_clock: bool,
}

fn default_samples(command: &str) -> usize {
    match command {
        "verify-axioms" => 100,
        "verify-involution" => 50,
        "sample" => 10_000,
        _ => 100_000,
    }
}

impl Common {
    fn resolve(self, command: &str, env_seed: Option<String>) -> Result<RunConfig, CliError> {
        let group = parse_group(&self.group)?;
        let out = check_out_dir(self.out)?;
        let seed = resolve_seed(self.seed, env_seed)?;
        let (tolerances, solver) = match &self.tol_file {
            Some(p) => load_tol_file(p)?,
            None => (Tolerances::default(), SolverConfig::default()),
        };
        let mut warnings = Vec::new();
        let (space, classes) = match self.space {
            SpaceArg::Double => {
                if self.classes.is_some() {
                    warnings.push("--classes is ignored for the double".to_string());
                }
                (SpaceChoice::Double, Vec::new())
            }
            SpaceArg::Classes => {
                let raw = self
                    .classes
                    .ok_or_else(|| CliError::Config("--classes is required unless --space double".into()))?;
                let (classes, w) = parse_classes(&raw, group)?;
                warnings.extend(w);
                (SpaceChoice::Classes, classes)
            }
        };
        let cfg = RunConfig {
            command: command.to_string(),
            group,
            space,
            classes,
            samples: self.samples.unwrap_or_else(|| default_samples(command)),
            fixed_samples: self.fixed_samples,
            seed,
            grid_res: self.grid_res,
            tolerances,
            solver,
            out,
            wall_clock: self.wall_clock,
            warnings,
        };
        cfg.spec()?;
        Ok(cfg)
    }
}

fn dispatch(command: Command, env_seed: Option<String>) -> Result<i32, CliError> {
    match command {
        Command::VerifyAxioms(c) => commands::verify_axioms(&announce(c.resolve("verify-axioms", env_seed)?)),
        Command::VerifyInvolution(c) => {
            commands::verify_involution(&announce(c.resolve("verify-involution", env_seed)?))
        }
        Command::Sample { common, source } => {
            let source = match source {
                SourceArg::Full => Source::FullSpace,
                SourceArg::Fixed => Source::FixedPointSet,
            };
            commands::sample(&announce(common.resolve("sample", env_seed)?), source)
        }
        Command::Polytope(c) => commands::polytope(&announce(c.resolve("polytope", env_seed)?)),
        Command::RealConvexity(c) => commands::real_convexity(&announce(c.resolve("real-convexity", env_seed)?)),
    }
}

fn announce(cfg: RunConfig) -> RunConfig {
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    cfg
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command, std::env::var(SEED_ENV).ok()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            }
        }
    }
}
