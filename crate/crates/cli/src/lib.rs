//! Command-line driver for hilbert-kit: JSON run configurations in,
//! CSV/JSON/SVG artifacts and pass/fail exit codes out.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{BodySource, Command, GroupSource, RunConfig, SCHEMA};
pub use output::Artifact;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(#[from] hilbert_kit::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

/// Result of a run before its artifacts are written.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    /// One line per failed check, naming the statement it probes.
    pub failures: Vec<String>,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Resolves `config`, runs it and writes its artifacts.
pub fn run(config: RunConfig) -> Result<Outcome, CliError> {
    let resolved = config.resolve()?;
    let outcome = commands::execute(&resolved)?;
    for a in &outcome.artifacts {
        a.write()?;
    }
    Ok(outcome)
}

#[derive(Debug, Parser)]
#[command(name = "hilbert-kit", version, about = "Hilbert geometry computations and probes")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Extended Hilbert distance between two points of the closure
    Distance(Overrides),
    /// Face of a point of the closure
    Face(Overrides),
    /// Samples of a closed ball of the extended metric
    Ball(Overrides),
    /// Boundary samples in the shadow of a ball seen from a light source
    Shadow(Overrides),
    /// Attracting points of proximal group elements up to a word length
    Limitset(Overrides),
    /// Coverage gap of the limit set approximations over word lengths
    Coverage(Overrides),
    /// Face and ball containment checks on random polytopes, and lower
    /// semi-continuity of the extended metric
    VerifyFacts(Overrides),
    /// Grain-of-sand probe on a cylinder body
    GrainProbe(Overrides),
    /// Builds the cylinder body of a step function and renders it
    OmegafBuild(Overrides),
    /// Searches a radius grid for shadows that always contain a limit point
    ShadowLemma(Overrides),
}

/// A comma separated list given as one flag value.
#[derive(Clone, Debug)]
struct List<T>(Vec<T>);

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<List<T>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| format!("cannot parse {t:?}")))
        .collect::<Result<_, _>>()
        .map(List)
}

fn parse_reals(s: &str) -> Result<List<f64>, String> {
    parse_list(s)
}

fn parse_lengths(s: &str) -> Result<List<usize>, String> {
    parse_list(s)
}

/// Scalar overrides; everything else comes from `--config`.
#[derive(Debug, Args)]
struct Overrides {
    /// JSON run configuration (schema "hilbert-kit/1")
    #[arg(long)]
    config: Option<PathBuf>,
    /// Main output file; SVG renderings are written beside it
    #[arg(long)]
    out: Option<PathBuf>,
    /// Builtin body name
    #[arg(long)]
    body: Option<String>,
    /// Builtin group name
    #[arg(long)]
    group: Option<String>,
    /// First point, comma separated chart coordinates
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
    x: Option<List<f64>>,
    /// Second point, comma separated chart coordinates
    #[arg(long, value_parser = parse_reals, allow_hyphen_values = true)]
    y: Option<List<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    big_radius: Option<f64>,
    /// Maximal word length
    #[arg(long)]
    length: Option<usize>,
    /// Comma separated word lengths
    #[arg(long, value_parser = parse_lengths)]
    lengths: Option<List<usize>>,
    /// Comma separated radius grid
    #[arg(long, value_parser = parse_reals)]
    radii: Option<List<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    configurations: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    invariance_tol: Option<f64>,
    /// Homothety ratio rule for the ball containment check: stated or tight
    #[arg(long)]
    ratio: Option<String>,
}

impl Overrides {
    fn into_config(self, command: Command) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::new(command),
        };
        match cfg.command {
            Some(c) if c != command => {
                return Err(CliError::Config(format!(
                    "config is for `{}`, not `{}`",
                    c.name(),
                    command.name()
                )))
            }
            _ => cfg.command = Some(command),
        }
        if let Some(v) = self.out {
            cfg.output = Some(v);
        }
        if let Some(v) = self.body {
            cfg.body = Some(BodySource::Builtin(v));
        }
        if let Some(v) = self.group {
            cfg.group = Some(GroupSource::Builtin(v));
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if self.$f.is_some() { cfg.$f = self.$f; } )* };
        }
        set!(radius, big_radius, length, samples, trials, configurations, grid_n, tol, invariance_tol);
        for (field, list) in [(&mut cfg.x, self.x), (&mut cfg.y, self.y), (&mut cfg.radii, self.radii)] {
            if let Some(List(v)) = list {
                *field = Some(v);
            }
        }
        if let Some(List(v)) = self.lengths {
            cfg.lengths = Some(v);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.ratio {
            cfg.ratio = Some(match r.as_str() {
                "stated" => hilbert_kit::facts::BallRatio::Stated,
                "tight" => hilbert_kit::facts::BallRatio::Tight,
                other => return Err(CliError::Config(format!("unknown ratio rule {other:?}"))),
            });
        }
        Ok(cfg)
    }
}

/// Parses `args`, runs, prints the summary, and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (command, overrides) = match cli.command {
        CliCommand::Distance(o) => (Command::Distance, o),
        CliCommand::Face(o) => (Command::Face, o),
        CliCommand::Ball(o) => (Command::Ball, o),
        CliCommand::Shadow(o) => (Command::Shadow, o),
        CliCommand::Limitset(o) => (Command::Limitset, o),
        CliCommand::Coverage(o) => (Command::Coverage, o),
        CliCommand::VerifyFacts(o) => (Command::VerifyFacts, o),
        CliCommand::GrainProbe(o) => (Command::GrainProbe, o),
        CliCommand::OmegafBuild(o) => (Command::OmegafBuild, o),
        CliCommand::ShadowLemma(o) => (Command::ShadowLemma, o),
    };
    let result = overrides.into_config(command).and_then(run);
    match result {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.summary.as_bytes());
            for a in &outcome.artifacts {
                let _ = writeln!(stdout, "wrote {}", a.path.display());
            }
            for f in &outcome.failures {
                let _ = writeln!(stderr, "FAIL {f}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
