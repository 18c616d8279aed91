//! Pipeline driver behind the `caba` binary.
//!
//! Exit statuses: 0 on success, 1 on invalid input or a failed check, 2 when
//! a resource limit is hit.

use std::io::Write;
use std::path::PathBuf;

use caba::arguments::{build_mgcarg, ArgumentError, ConstrainedArgument};
use caba::attacks::attack_graph;
use caba::framework::{Framework, FrameworkError};
use caba::ground_oracle::{cross_check, ground, CheckMode, NativeResult, OracleError, Verdict};
use caba::semantics::{check_stable_native, enumerate_extensions, Semantics, SemanticsError};
use caba::splitting::{argument_splitting, SplitError, SplitOutcome};
use caba_lra::Rational;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Parse,
    Arguments,
    Attacks,
    Split,
    Extensions,
    Ground,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub command: Command,
    pub max_depth: usize,
    pub max_iters: usize,
    pub universe: Option<Vec<Rational>>,
    pub semantics: Option<Semantics>,
    pub mode: Option<CheckMode>,
    pub native_check: bool,
    pub output_format: OutputFormat,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Framework(#[from] FrameworkError),
    #[error("{0}")]
    Argument(#[from] ArgumentError),
    #[error("{0}")]
    Split(#[from] SplitError),
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Argument(ArgumentError::DepthExceeded { .. })
            | CliError::Split(SplitError::IterationLimit { .. })
            | CliError::Oracle(OracleError::UniverseTooLarge { .. }) => 2,
            _ => 1,
        }
    }
}

fn args_json(args: &[ConstrainedArgument]) -> Value {
    Value::Array(args.iter().map(|a| a.to_json()).collect())
}

fn args_text(out: &mut String, args: &[ConstrainedArgument]) {
    for a in args {
        out.push_str(&format!("{}: {a}\n", a.id));
    }
}

struct Pipeline {
    framework: Framework,
    config: RunConfig,
}

impl Pipeline {
    fn mgcargs(&self) -> Result<Vec<ConstrainedArgument>, CliError> {
        Ok(build_mgcarg(&self.framework, self.config.max_depth)?)
    }

    fn split(&self) -> Result<(Vec<ConstrainedArgument>, SplitOutcome), CliError> {
        let m = self.mgcargs()?;
        let out = argument_splitting(&self.framework, &m, self.config.max_iters)?;
        Ok((m, out))
    }

    fn universe(&self) -> Result<&[Rational], CliError> {
        self.config
            .universe
            .as_deref()
            .ok_or_else(|| CliError::Usage("--universe is required".into()))
    }

    fn semantics(&self) -> Semantics {
        self.config.semantics.unwrap_or(Semantics::Stable)
    }
}

/// Output of a successful run, before formatting choices are applied.
struct Output {
    text: String,
    json: Value,
    /// A failed cross-check still prints its report.
    failure: Option<String>,
}

fn execute(p: &Pipeline) -> Result<Output, CliError> {
    let f = &p.framework;
    let mut text = String::new();
    let (json, failure) = match p.config.command {
        Command::Parse => {
            text.push_str(&f.to_caba());
            (json!({ "framework": f.to_json() }), None)
        }
        Command::Arguments => {
            let m = p.mgcargs()?;
            args_text(&mut text, &m);
            (json!({ "arguments": args_json(&m) }), None)
        }
        Command::Attacks => {
            let m = p.mgcargs()?;
            let g = attack_graph(f, &m);
            args_text(&mut text, &m);
            text.push('\n');
            for e in &g.edges {
                text.push_str(&format!("{e}\n"));
            }
            (json!({ "arguments": args_json(&m), "attacks": g.edges }), None)
        }
        Command::Split => {
            let (m, out) = p.split()?;
            text.push_str("# before\n");
            args_text(&mut text, &m);
            text.push_str("# steps\n");
            for s in &out.steps {
                text.push_str(&format!("{s}\n"));
            }
            text.push_str("# after\n");
            args_text(&mut text, &out.arguments);
            (
                json!({ "before": args_json(&m), "steps": out.steps, "after": args_json(&out.arguments) }),
                None,
            )
        }
        Command::Extensions => {
            let sem = p.semantics();
            let (_, out) = p.split()?;
            let basis = out.arguments;
            let exts = enumerate_extensions(f, &basis, sem, "split")?;
            text.push_str(&format!("# basis ({} arguments)\n", basis.len()));
            args_text(&mut text, &basis);
            text.push_str(&format!("# {} {sem} extensions\n", exts.len()));
            let mut items = Vec::new();
            for (k, e) in exts.iter().enumerate() {
                let mut item = json!({ "members": e.members, "semantics": e.semantics, "basis": e.basis });
                text.push_str(&format!("E{}: {e}", k + 1));
                if p.config.native_check && sem == Semantics::Stable {
                    let ok = check_stable_native(f, &e.arguments(&basis), &basis).map_err(SemanticsError::from)?;
                    item["native_check"] = json!(ok);
                    text.push_str(if ok { "  [native check: ok]" } else { "  [native check: FAILED]" });
                }
                text.push('\n');
                items.push(item);
            }
            (
                json!({ "semantics": sem, "basis": args_json(&basis), "extensions": items }),
                None,
            )
        }
        Command::Ground => {
            let g = ground(f, p.universe()?);
            text.push_str(&g.to_string());
            (g.to_json(), None)
        }
        Command::Check => {
            let universe = p.universe()?;
            let mode = p
                .config
                .mode
                .ok_or_else(|| CliError::Usage("--mode is required".into()))?;
            let native = match mode {
                CheckMode::Arguments | CheckMode::Attacks => NativeResult::Arguments(p.mgcargs()?),
                CheckMode::Extension => {
                    let sem = p.semantics();
                    let basis = p.split()?.1.arguments;
                    let extensions = enumerate_extensions(f, &basis, sem, "split")?
                        .iter()
                        .map(|e| e.arguments(&basis))
                        .collect();
                    NativeResult::Extensions {
                        basis,
                        semantics: sem,
                        extensions,
                        complete: true,
                    }
                }
            };
            let report = cross_check(f, universe, &native, mode)?;
            text.push_str(&format!("{report}\n"));
            let failure = (report.verdict == Verdict::Mismatch)
                .then(|| report.witness.clone().unwrap_or_else(|| "mismatch".into()));
            (json!({ "report": report }), failure)
        }
    };
    Ok(Output { text, json, failure })
}

fn load(config: &RunConfig) -> Result<Framework, CliError> {
    let src = std::fs::read_to_string(&config.input_path).map_err(|source| CliError::Io {
        path: config.input_path.display().to_string(),
        source,
    })?;
    if config.input_path.extension().is_some_and(|e| e == "json") {
        let value: Value = serde_json::from_str(&src).map_err(|e| FrameworkError::Json(e.to_string()))?;
        return Ok(Framework::from_json(&value)?);
    }
    Ok(Framework::parse(&src)?)
}

/// Runs one command, writing the artifact to `out` and diagnostics to `err`.
/// Returns the exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = load(config).and_then(|framework| {
        execute(&Pipeline {
            framework,
            config: config.clone(),
        })
    });
    match result {
        Ok(o) => {
            let written = match config.output_format {
                OutputFormat::Text => out.write_all(o.text.as_bytes()),
                OutputFormat::Json => {
                    let mut v = o.json;
                    v["schema"] = json!(1);
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json serialises"))
                }
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            match o.failure {
                Some(w) => {
                    let _ = writeln!(err, "error: cross-check failed: {w}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
