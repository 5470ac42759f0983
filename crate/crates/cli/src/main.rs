use std::collections::BTreeMap;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use msos_core::components::{describe, ENV_ENTITY, STORE_ENTITY};
use msos_core::engine::{EngineError, DEFAULT_FUEL};
use msos_core::fixtures::Fork;
use msos_core::json;
use msos_core::labels::LabelSignature;
use msos_core::properties::{check_category_laws, check_global_determinism_with, CheckOptions, Mode};
use msos_core::sexp::parse_term;
use msos_core::*;

const EXIT_CODES: &str = "\
Exit codes:
  0  completed run, or a clean check
  1  usage, parse, build or harness error
  2  run got stuck
  3  run exhausted its fuel
  4  run hit a nondeterministic step
  5  check found counterexamples or law failures
  6  check stopped at its time limit before finishing

Set MSOS_COLOR=0 to disable colored diagnostics.";

#[derive(Parser)]
#[command(name = "msos", version, about = "Run and check component-based MSOS languages")]
#[command(after_help = EXIT_CODES)]
struct Cli {
    /// Add the nondeterministic `Cmd.fork` test component to the repository.
    #[arg(long, global = true)]
    with_fixtures: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program and print its outcome and composed label.
    Run(RunArgs),
    /// Run a program and write its trace as JSON Lines.
    Trace {
        #[command(flatten)]
        run: RunArgs,
        /// Write the trace here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property checks.
    #[command(subcommand)]
    Check(Check),
    /// List every built-in component.
    Components,
}

#[derive(Args)]
struct RunArgs {
    /// Language definition (TOML).
    lang: PathBuf,
    /// Program (s-expression).
    program: PathBuf,
    /// Initial environment binding, `name=literal`.
    #[arg(long = "env", value_name = "K=V", value_parser = binding)]
    env: Vec<(String, Value)>,
    /// Initial store binding, `name=literal`.
    #[arg(long = "store", value_name = "K=V", value_parser = binding)]
    store: Vec<(String, Value)>,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: usize,
}

#[derive(Subcommand)]
enum Check {
    /// Exhaustive determinism check over enumerated terms.
    Det {
        /// Language definition (TOML).
        lang: PathBuf,
        #[arg(long, value_parser = sort)]
        sort: Sort,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
        depth: u32,
        #[arg(long, value_parser = mode, default_value = "both")]
        mode: Mode,
        /// Stop after this many seconds and report the partial result.
        #[arg(long, value_name = "SECS")]
        timeout: Option<u64>,
    },
    /// Category laws on seeded random labels.
    Laws {
        /// Take the label signature from this language definition instead
        /// of {ρ, σ, out}.
        #[arg(long)]
        lang: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn binding(text: &str) -> Result<(String, Value), String> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=literal, got `{text}`"))?;
    let value = Value::parse_literal(v).ok_or_else(|| format!("`{v}` is not a literal"))?;
    Ok((k.to_string(), value))
}

fn sort(text: &str) -> Result<Sort, String> {
    Sort::parse(text).ok_or_else(|| format!("unknown sort `{text}`"))
}

fn mode(text: &str) -> Result<Mode, String> {
    Mode::parse(text).ok_or_else(|| format!("unknown mode `{text}`, expected modular, brute or both"))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn error(message: impl std::fmt::Display) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

fn repository(with_fixtures: bool) -> Repository {
    let repo = Repository::standard();
    if with_fixtures {
        repo.with(Fork)
    } else {
        repo
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn load(path: &Path, repo: &Repository) -> Result<Language, Failure> {
    let def = LanguageDefinition::from_toml(&read(path)?)
        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    Language::build(&def, repo).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn execute(args: &RunArgs, repo: &Repository) -> Result<Trace, Failure> {
    let lang = load(&args.lang, repo)?;
    let program = parse_term(&read(&args.program)?, lang.grammar())
        .map_err(|e| Failure::error(format!("{}:{e}", args.program.display())))?;
    let mut init = BTreeMap::new();
    for (entity, bindings) in [(ENV_ENTITY, &args.env), (STORE_ENTITY, &args.store)] {
        if bindings.is_empty() {
            continue;
        }
        if lang.signature().index_of(entity).is_none() {
            return Err(Failure::error(format!("the language has no `{entity}` entity")));
        }
        let map = Value::map(bindings.iter().map(|(k, v)| (k.as_str(), v.clone())));
        init.insert(entity.to_string(), map);
    }
    let init = lang.objects(&init).map_err(Failure::error)?;
    match run_trace(&lang, &program, &init, args.fuel) {
        Ok(trace) => Ok(trace),
        Err(e @ EngineError::Nondeterministic { .. }) => Err(Failure {
            code: 4,
            message: e.to_string(),
        }),
        Err(e) => Err(Failure::error(e)),
    }
}

fn outcome_code(trace: &Trace) -> u8 {
    match trace.outcome {
        Outcome::Completed(_) => 0,
        Outcome::Stuck(_) => 2,
        Outcome::FuelExhausted(_) => 3,
    }
}

fn summary(trace: &Trace) {
    emit(&format!(
        "{}: {}\nsteps: {}\nlabel: {}\n",
        trace.outcome.as_str(),
        trace.outcome.term(),
        trace.steps.len(),
        json::label(&trace.composed)
    ));
}

/// Writes to standard output, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    let repo = repository(cli.with_fixtures);
    match cli.command {
        Command::Run(args) => {
            let trace = execute(&args, &repo)?;
            summary(&trace);
            Ok(outcome_code(&trace))
        }
        Command::Trace { run, out } => {
            let trace = execute(&run, &repo)?;
            let lines = json::trace_jsonl(&trace);
            match out {
                Some(path) => {
                    std::fs::write(&path, lines)
                        .map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
                    summary(&trace);
                }
                None => emit(&lines),
            }
            Ok(outcome_code(&trace))
        }
        Command::Check(Check::Det {
            lang,
            sort,
            depth,
            mode,
            timeout,
        }) => {
            let lang = load(&lang, &repo)?;
            if !lang.sorts().contains(&sort) {
                return Err(Failure::error(format!("sort {sort} is not declared by the language")));
            }
            let opts = CheckOptions {
                deadline: timeout.map(Duration::from_secs),
                ..CheckOptions::default()
            };
            let report = check_global_determinism_with(&lang, sort, depth as usize, mode, &opts)
                .map_err(Failure::error)?;
            emit(&pretty(&json::determinism_report(&report)));
            Ok(if !report.counterexamples.is_empty() {
                5
            } else if !report.complete {
                6
            } else {
                0
            })
        }
        Command::Check(Check::Laws { lang, samples, seed }) => {
            let sig = match lang {
                Some(path) => load(&path, &repo)?.signature().clone(),
                None => LabelSignature::standard(&[ENV_ENTITY, STORE_ENTITY, "out"]),
            };
            let report = check_category_laws(&sig, samples, seed);
            emit(&pretty(&json::law_report(&report)));
            Ok(if report.holds() { 0 } else { 5 })
        }
        Command::Components => {
            let listing: String = repo.components().iter().map(|c| describe(c.as_ref())).collect();
            emit(&listing);
            Ok(0)
        }
    }
}

fn color() -> bool {
    std::env::var("MSOS_COLOR").map_or(true, |v| v != "0") && std::io::stderr().is_terminal()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let prefix = if color() { "\x1b[1;31merror:\x1b[0m" } else { "error:" };
            eprintln!("{prefix} {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
