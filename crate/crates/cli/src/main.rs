use std::path::PathBuf;
use std::process::ExitCode;

use caba::arguments::DEFAULT_MAX_DEPTH;
use caba::ground_oracle::{parse_universe, CheckMode};
use caba::semantics::Semantics;
use caba::splitting::DEFAULT_MAX_ITERS;
use caba_cli::{run, Command, OutputFormat, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "caba", version, about = "Constrained assumption-based argumentation over linear rational arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Unfolding depth cap for recursive frameworks.
    #[arg(long, env = "CABA_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH, global = true)]
    max_depth: usize,
    /// Repair cap for argument splitting.
    #[arg(long, env = "CABA_MAX_ITERS", default_value_t = DEFAULT_MAX_ITERS, global = true)]
    max_iters: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    ConflictFree,
    Admissible,
    Stable,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Arguments,
    Attacks,
    Extension,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a framework.
    Parse { input: PathBuf },
    /// Most general constrained arguments.
    Arguments { input: PathBuf },
    /// Attacks between the most general arguments.
    Attacks { input: PathBuf },
    /// Argument splitting with a step log.
    Split { input: PathBuf },
    /// Extensions over the split basis.
    Extensions {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Stable)]
        semantics: SemanticsArg,
        /// Also confirm each stable extension by the coverage characterisation.
        #[arg(long)]
        native_check: bool,
    },
    /// Ground over a finite universe.
    Ground {
        input: PathBuf,
        #[arg(long, value_parser = universe, allow_hyphen_values = true)]
        universe: Universe,
    },
    /// Cross-check native results against the grounding.
    Check {
        input: PathBuf,
        #[arg(long, value_parser = universe, allow_hyphen_values = true)]
        universe: Universe,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Stable)]
        semantics: SemanticsArg,
    },
}

/// Wrapped so clap treats the list as one value.
#[derive(Clone)]
struct Universe(Vec<caba_lra::Rational>);

fn universe(s: &str) -> Result<Universe, String> {
    parse_universe(s).map(Universe).map_err(|e| e.to_string())
}

fn semantics(s: SemanticsArg) -> Semantics {
    match s {
        SemanticsArg::ConflictFree => Semantics::ConflictFree,
        SemanticsArg::Admissible => Semantics::Admissible,
        SemanticsArg::Stable => Semantics::Stable,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures; exit 2 is kept for limits
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut config = RunConfig {
        input_path: PathBuf::new(),
        command: Command::Parse,
        max_depth: cli.max_depth,
        max_iters: cli.max_iters,
        universe: None,
        semantics: None,
        mode: None,
        native_check: false,
        output_format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
    };
    match cli.command {
        Cmd::Parse { input } => (config.command, config.input_path) = (Command::Parse, input),
        Cmd::Arguments { input } => (config.command, config.input_path) = (Command::Arguments, input),
        Cmd::Attacks { input } => (config.command, config.input_path) = (Command::Attacks, input),
        Cmd::Split { input } => (config.command, config.input_path) = (Command::Split, input),
        Cmd::Extensions {
            input,
            semantics: s,
            native_check,
        } => {
            (config.command, config.input_path) = (Command::Extensions, input);
            config.semantics = Some(semantics(s));
            config.native_check = native_check;
        }
        Cmd::Ground { input, universe } => {
            (config.command, config.input_path) = (Command::Ground, input);
            config.universe = Some(universe.0);
        }
        Cmd::Check {
            input,
            universe,
            mode,
            semantics: s,
        } => {
            (config.command, config.input_path) = (Command::Check, input);
            config.universe = Some(universe.0);
            config.semantics = Some(semantics(s));
            config.mode = Some(match mode {
                ModeArg::Arguments => CheckMode::Arguments,
                ModeArg::Attacks => CheckMode::Attacks,
                ModeArg::Extension => CheckMode::Extension,
            });
        }
    }
    let code = run(&config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
