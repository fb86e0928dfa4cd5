//! The `gamecheck` command line: check ATL queries against LCGS models and export graphs.
//!
//! ```text
//! gamecheck solver -m standoff.lcgs -f billy-can-stay-alive.atl
//! gamecheck graph -m standoff.lcgs > standoff.dot
//! ```

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamecheck::atl::{parse_formula, Phi};
use gamecheck::dot::{cgs_dot, edg_dot};
use gamecheck::error::ModelError;
use gamecheck::global::check_global;
use gamecheck::lcgs::{compile, CompiledGame};
use gamecheck::local::{check_local_with, LocalOptions, WitnessError};
use gamecheck::strategy::Strategy;

/// Upper bound on states or configurations a graph export may visit.
pub const GRAPH_LIMIT: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "gamecheck", version, about = "On-the-fly ATL model checker for LCGS models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether the formula holds in the initial state of the model.
    Solver(SolverArgs),
    /// Print the reachable game, or the dependency graph of a formula, as Graphviz dot.
    Graph(GraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Local,
    Global,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(short, long)]
    model: PathBuf,
    #[arg(short, long)]
    formula: PathBuf,
    #[arg(long, value_enum, default_value = "local")]
    engine: Engine,
    /// Search strategy of the local engine: bfs, dfs, dhs, ihs, lps or lrs.
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
    /// Print the coalition's moves certifying a satisfied enforce formula.
    #[arg(long)]
    witness: bool,
    /// Print key=value instrumentation after the result.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(short, long)]
    model: PathBuf,
    /// Export the dependency graph of the formula instead of the game.
    #[arg(long, requires = "formula")]
    edg: bool,
    #[arg(short, long)]
    formula: Option<PathBuf>,
    /// Leave move vectors off the game's edges.
    #[arg(long)]
    no_moves: bool,
}

/// A failure and its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Display) -> Self {
        Failure { code: 1, message: message.to_string() }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

/// Runs one invocation and returns the exit code: 0 on success, 1 on unreadable or invalid
/// input, 2 when the model fails at run time.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Solver(a) => solver(&a, out),
        Command::Graph(a) => graph(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<CompiledGame, Failure> {
    compile(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_formula(path: &Path, game: &CompiledGame) -> Result<Phi, Failure> {
    parse_formula(read(path)?.trim(), game).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: impl Display) -> Result<(), Failure> {
    write!(out, "{text}").map_err(|e| Failure { code: 2, message: format!("cannot write output: {e}") })
}

fn solver(a: &SolverArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if a.engine == Engine::Global && a.strategy.is_some() {
        return Err(Failure::input("--strategy only applies to --engine local"));
    }
    let game = load_model(&a.model)?;
    let phi = load_formula(&a.formula, &game)?;
    let start = Instant::now();
    let mut text = String::new();
    match a.engine {
        Engine::Global => {
            let outcome = check_global(&game, &phi)?;
            text += &format!("Result: {}\n", outcome.verdict);
            if a.witness {
                text += "Witness unavailable: witnesses come from the local engine\n";
            }
            if a.stats {
                text += "engine=global\n";
                text += &format!("configurations={}\n", outcome.configurations);
                text += &format!("hyper_edges={}\n", outcome.hyper_edges);
                text += &format!("negation_edges={}\n", outcome.negation_edges);
                text += &format!("time_ms={}\n", start.elapsed().as_millis());
            }
        }
        Engine::Local => {
            let strategy = a.strategy.unwrap_or_default();
            let options = LocalOptions {
                strategy,
                workers: a.threads as usize,
                witness: a.witness,
            };
            let outcome = check_local_with(&game, &phi, &options)?;
            text += &format!("Result: {}\n", outcome.verdict);
            match outcome.witness {
                None => {}
                Some(Ok(w)) => {
                    text += "Witness:\n";
                    for line in w.lines(&game) {
                        text += &format!("  {line}\n");
                    }
                }
                Some(Err(e @ (WitnessError::Unsatisfied | WitnessError::Unsupported))) => {
                    text += &format!("Witness unavailable: {e}\n");
                }
            }
            if a.stats {
                text += "engine=local\n";
                text += &format!("strategy={strategy}\n");
                text += &format!("threads={}\n", a.threads);
                for line in outcome.stats.lines() {
                    text += &line;
                    text.push('\n');
                }
                text += &format!("time_ms={}\n", start.elapsed().as_millis());
            }
        }
    }
    emit(out, text)
}

fn graph(a: &GraphArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let game = load_model(&a.model)?;
    let dot = match (&a.formula, a.edg) {
        (Some(path), true) => edg_dot(&game, &load_formula(path, &game)?, GRAPH_LIMIT)?,
        _ => cgs_dot(&game, !a.no_moves, GRAPH_LIMIT)?,
    };
    emit(out, dot)
}
