//! `ilproof`: proof search, checking, translation and interpolation for IL.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use commands::{InterpolateArgs, ProveArgs, Source, Status, Target, TranslateArgs};
use config::{Config, Format, Limits, LogicArg};

#[derive(Parser, Debug)]
#[command(name = "ilproof", version, about = "Proof theory toolkit for the interpretability logic IL")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Logic for decisions and interpolation.
    #[arg(long, global = true, value_enum, env = "ILPROOF_LOGIC", default_value = "il")]
    logic: LogicArg,
    /// Output format.
    #[arg(long, global = true, value_enum, env = "ILPROOF_FORMAT", default_value = "text")]
    format: Format,
    /// Comma-separated key=value limits: max_nodes, max_orderings, max_depth,
    /// fixpoint_cap, witness_cap, template_cap, simplify_cap.
    #[arg(long, global = true, env = "ILPROOF_LIMITS", default_value = "")]
    limits: Limits,
    /// Print formulas in core syntax, without ~, [] and <>.
    #[arg(long, global = true, env = "ILPROOF_PLAIN")]
    plain: bool,
    /// Read one input per line from a file instead of the positional argument.
    #[arg(long, global = true, env = "ILPROOF_BATCH")]
    batch: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula or a sequent (`Γ => Δ`) and print it back.
    Parse { input: Option<String> },
    /// Search for a cyclic proof of a sequent.
    Prove {
        sequent: Option<String>,
        /// Write the proof as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Write the proof as a Graphviz graph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a proof, Hilbert proof or template file.
    Check {
        file: PathBuf,
        /// Calculus to check against instead of the one the file names.
        #[arg(long)]
        calculus: Option<String>,
        /// Accept open assumption leaves.
        #[arg(long)]
        allow_assumptions: bool,
    },
    /// Translate between proof systems.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long, value_enum)]
        to: Target,
        /// Modal layers unfolded for gil-prefix.
        #[arg(long, default_value_t = 2)]
        fuel: usize,
        /// Comma-separated formulas Λ for cyclic to fgil.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Replace an fgil proof with cuts by a cut-free one of the same sequent.
    Cutelim {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute the uniform interpolant of a formula over a vocabulary.
    Interpolate {
        formula: Option<String>,
        /// Comma-separated atoms; empty for the empty vocabulary.
        #[arg(long, default_value = "")]
        vocab: String,
        /// Check the result against all formulas over the vocabulary up to this size.
        #[arg(long)]
        verify_cap: Option<usize>,
        /// Also print the unsimplified interpolant.
        #[arg(long)]
        raw: bool,
        /// Write the interpolation template as JSON.
        #[arg(long)]
        emit_template: Option<PathBuf>,
    },
    /// Compute an explicit fixpoint of a formula modalized in a variable.
    Fixpoint {
        formula: Option<String>,
        #[arg(long)]
        var: String,
    },
}

fn inputs(batch: &Option<PathBuf>, single: &Option<String>) -> Result<Vec<String>> {
    match (batch, single) {
        (Some(path), None) => commands::batch_inputs(path),
        (None, Some(s)) => Ok(vec![s.clone()]),
        (Some(_), Some(_)) => bail!("give either an input or --batch, not both"),
        (None, None) => bail!("missing input"),
    }
}

/// Runs one input per line, prefixing each output with its input in batch mode.
fn each(
    batch: &Option<PathBuf>,
    single: &Option<String>,
    mut run: impl FnMut(&str) -> Result<(Status, String)>,
) -> Result<Status> {
    let items = inputs(batch, single)?;
    let mut worst = Status::Success;
    let out = std::io::stdout();
    for item in &items {
        let (status, text) = match run(item) {
            Ok(r) => r,
            Err(e) if batch.is_some() => (Status::Error, format!("error: {e:#}\n")),
            Err(e) => return Err(e),
        };
        let mut lock = out.lock();
        if batch.is_some() {
            writeln!(lock, "# {item}")?;
        }
        write!(lock, "{text}")?;
        worst = worst.max(status);
    }
    Ok(worst)
}

fn run(cli: Cli) -> Result<Status> {
    let g = &cli.global;
    let cfg = Config {
        logic: g.logic.into(),
        limits: g.limits,
        format: g.format,
        sugar: !g.plain,
    };
    let single = |(status, text): (Status, String)| {
        print!("{text}");
        Ok(status)
    };
    match &cli.command {
        Command::Parse { input } => each(&g.batch, input, |i| commands::cmd_parse(&cfg, i)),
        Command::Prove { sequent, emit, dot } => {
            let args = ProveArgs {
                emit: emit.as_deref(),
                dot: dot.as_deref(),
            };
            each(&g.batch, sequent, |i| commands::cmd_prove(&cfg, i, &args))
        }
        Command::Check {
            file,
            calculus,
            allow_assumptions,
        } => single(commands::cmd_check(&cfg, file, calculus.as_deref(), *allow_assumptions)?),
        Command::Translate {
            file,
            from,
            to,
            fuel,
            lambda,
            out,
        } => {
            let args = TranslateArgs {
                from: *from,
                to: *to,
                fuel: *fuel,
                lambda: lambda.as_deref(),
                out: out.as_deref(),
            };
            single(commands::cmd_translate(&cfg, file, &args)?)
        }
        Command::Cutelim { file, out } => single(commands::cmd_cutelim(&cfg, file, out.as_deref())?),
        Command::Interpolate {
            formula,
            vocab,
            verify_cap,
            raw,
            emit_template,
        } => {
            let args = InterpolateArgs {
                vocab,
                verify_cap: *verify_cap,
                raw: *raw,
                emit_template: emit_template.as_deref(),
            };
            each(&g.batch, formula, |i| commands::cmd_interpolate(&cfg, i, &args))
        }
        Command::Fixpoint { formula, var } => each(&g.batch, formula, |i| commands::cmd_fixpoint(&cfg, i, var)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Error as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(s as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Error as u8)
        }
    }
}
