//! `hyperdist`: exact hyper normalisation and conditioning from the command line.

mod commands;
mod error;

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperdist::format::Workspace;

use commands::{Format, Output};
use error::CliError;

#[derive(Parser)]
#[command(name = "hyperdist", version, about = "Exact hyper normalisation, conditioning and refinement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Workspace file; `-` or no flag reads standard input.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ket")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Normalise a subdistribution.
    Nrm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: String,
    },
    /// Hyper normalise a joint over n·A.
    Hypernorm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: String,
    },
    /// Condition a distribution on a predicate.
    Condition {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        pred: String,
    },
    /// Hyper condition a distribution on a test.
    Hypercond {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        test: String,
    },
    /// Split a joint over n·A into a conditional and a marginal.
    Disintegrate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: String,
    },
    /// The distribution over posteriors induced by a test.
    Denote {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dist: String,
        #[arg(long)]
        test: String,
    },
    /// Decide refinement between two tests or two hyper conditionals.
    Refine {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Build a refinement witness, or check a declared one.
    Witness {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "witness")]
        dist: Option<String>,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Check the algebraic laws on small instances.
    Laws {
        #[arg(long, value_enum, default_value = "ket")]
        format: Format,
        /// `all` or a single suite name.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long, default_value_t = 4)]
        max_denominator: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Sample this many instances per law instead of enumerating.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        sequential: bool,
    },
    /// Replay the built-in worked examples.
    Examples {
        #[arg(long, value_enum, default_value = "ket")]
        format: Format,
        #[arg(long, conflicts_with = "only")]
        all: bool,
        #[arg(long)]
        only: Option<String>,
    },
}

fn load(common: &Common) -> Result<Workspace, CliError> {
    let text = match &common.input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        })?,
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
            text
        }
    };
    Ok(Workspace::from_json(&text)?)
}

fn run(cli: Cli) -> Result<Output, CliError> {
    use commands::*;
    match cli.command {
        Command::Nrm { common, dist } => nrm_cmd(&load(&common)?, &dist, common.format),
        Command::Hypernorm { common, dist } => hypernorm_cmd(&load(&common)?, &dist, common.format),
        Command::Condition { common, dist, pred } => condition_cmd(&load(&common)?, &dist, &pred, common.format),
        Command::Hypercond { common, dist, test } => hypercond_cmd(&load(&common)?, &dist, &test, common.format),
        Command::Disintegrate { common, dist } => disintegrate_cmd(&load(&common)?, &dist, common.format),
        Command::Denote { common, dist, test } => denote_cmd(&load(&common)?, &dist, &test, common.format),
        Command::Refine { common, from, to } => refine_cmd(&load(&common)?, &from, &to, common.format),
        Command::Witness {
            common,
            dist,
            witness,
            from,
            to,
        } => witness_cmd(
            &load(&common)?,
            dist.as_deref(),
            witness.as_deref(),
            &from,
            &to,
            common.format,
        ),
        Command::Laws {
            format,
            suite,
            max_size,
            max_arity,
            max_denominator,
            seed,
            trials,
            sequential,
        } => laws_cmd(
            &LawArgs {
                suite,
                max_size,
                max_arity,
                max_denominator,
                seed,
                trials,
                sequential,
            },
            format,
        ),
        Command::Examples { format, only, .. } => examples_cmd(only.as_deref(), format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
