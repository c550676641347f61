//! Experiment runner behind the `nearquad` binary.

pub mod commands;
pub mod config;
pub mod problem;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use nearquad::RuleKind;

use crate::commands::CommandError;
use crate::config::{ConfigError, ExperimentConfig, RawConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const AFTER_HELP: &str = "\
Output is CSV with '#' metadata lines (version, seed, config echo).

estimate columns: index,x,y,z,estimate,reliable,converged,t0_re,t0_im,preimage_re,preimage_im,status
  t0 is the panel-local root of the largest contribution; preimage is the
  generator's global parameter when it constructs one.
validate columns: index,x,y,z,measured_error,estimate,ratio,reliable,status
  followed by '# summary:' with the within-10x fraction and the extreme
  over/under-estimation ratios over rows with measured error > 1e-12.
sweep columns: n,p,max_error,argmax_index,estimate_at_argmax,ratio
  followed by '# fit:' log-slopes per unit n.
rules-dump columns: index,node,weight

Exit codes: 0 success, 2 configuration error, 3 numerical failure.";

#[derive(Debug, Parser)]
#[command(name = "nearquad", version, about = "Quadrature error estimates for nearly singular layer potentials")]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (flat `key = value` file).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file; defaults to the configured path, else stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error estimates at every target.
    Estimate,
    /// Estimates next to measured errors, with a summary footer.
    Validate,
    /// Maximum measured error over the targets for each n in `sweep.n` and p in `sweep.p`.
    Sweep,
    /// Nodes and weights of a base rule.
    RulesDump {
        /// gauss-legendre, trapezoidal or gauss-laguerre; falls back to `rule.kind`.
        #[arg(long)]
        kind: Option<String>,
        /// Node count; falls back to `rule.n`.
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Result of a run: text to write, where, and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub output: Option<String>,
    pub path: Option<PathBuf>,
    pub message: Option<String>,
    pub code: i32,
}

fn config_failure(e: ConfigError) -> Outcome {
    Outcome { output: None, path: None, message: Some(format!("config error: {e}")), code: EXIT_CONFIG }
}

fn load_raw(cli: &Cli) -> Result<RawConfig, ConfigError> {
    let mut raw = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
                line: None,
                key: None,
                message: format!("{}: {e}", path.display()),
            })?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    if let Some(seed) = cli.seed {
        raw.set("seed", seed.to_string());
    }
    Ok(raw)
}

fn rules_dump(raw: &RawConfig, kind: Option<&str>, n: Option<usize>) -> Result<String, CommandError> {
    let bad = |key: &str, message: String| CommandError::Config(ConfigError { line: None, key: Some(key.into()), message });
    let kind = kind.or(raw.get("rule.kind")).unwrap_or("gauss-legendre");
    let kind = RuleKind::from_name(kind).map_err(|e| bad("rule.kind", e.to_string()))?;
    let n = match n {
        Some(n) => n,
        None => raw
            .get("rule.n")
            .ok_or_else(|| bad("rule.n", "missing".into()))?
            .parse()
            .map_err(|_| bad("rule.n", "not an integer".into()))?,
    };
    commands::cmd_rules_dump(kind, n)
}

/// Runs a parsed command line without touching stdout or the filesystem
/// beyond reading inputs.
pub fn execute(cli: &Cli) -> Outcome {
    let raw = match load_raw(cli) {
        Ok(r) => r,
        Err(e) => return config_failure(e),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return config_failure(ConfigError { line: None, key: Some("--jobs".into()), message: "must be positive".into() });
        }
        builder = builder.num_threads(jobs);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return config_failure(ConfigError { line: None, key: Some("--jobs".into()), message: e.to_string() }),
    };

    let (result, path) = match &cli.command {
        Command::RulesDump { kind, n } => (pool.install(|| rules_dump(&raw, kind.as_deref(), *n)), None),
        command => {
            let cfg = match ExperimentConfig::from_raw(raw) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            let result = pool.install(|| match command {
                Command::Estimate => commands::cmd_estimate(&cfg),
                Command::Validate => commands::cmd_validate(&cfg),
                Command::Sweep => commands::cmd_sweep(&cfg),
                Command::RulesDump { .. } => unreachable!(),
            });
            (result, cfg.output.clone())
        }
    };
    let path = cli.output.clone().or(path);
    match result {
        Ok(output) => Outcome { output: Some(output), path, message: None, code: EXIT_OK },
        Err(CommandError::Config(e)) => config_failure(e),
        Err(CommandError::Numerical { output, message }) => Outcome {
            output: (!output.is_empty()).then_some(output),
            path,
            message: Some(format!("numerical failure: {message}")),
            code: EXIT_NUMERICAL,
        },
    }
}
