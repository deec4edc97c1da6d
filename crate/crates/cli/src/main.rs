use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paracon_core::proof::{check_proof, parse_proof};
use paracon_core::scenario::{Scenario, ScenarioError};
use paracon_core::selftest::{render_table, run_selftest};
use paracon_core::semantics::{decide, DecideOptions, SemanticsError, DEFAULT_CAP, DEFAULT_DEPTH};
use paracon_core::superposition::KB_DEFAULT_CAP;
use paracon_core::syntax::{print_with, PrintOptions};
use paracon_core::{parse, star_translate, Formula};
use serde::Serialize;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "paracon",
    version,
    about = "Paraconsistent formula, proof and superposition toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output mode; `structured` (alias `json`) emits JSON.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Closure depth for semantic queries.
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    depth: usize,

    /// Largest closure set a semantic query may enumerate [default: 64, or
    /// 256 for superpose].
    #[arg(long, global = true)]
    cap: Option<usize>,

    /// Print `~(X & ~X)` as `X^o` and `~X & X^o` as `~*X`.
    #[arg(long, global = true)]
    resugar: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "json", alias = "json-like-structured")]
    Structured,
}

#[derive(Args)]
struct Input {
    /// Input text.
    #[arg(conflicts_with = "file", required_unless_present = "file")]
    text: Option<String>,

    /// Read the input from a file instead.
    #[arg(long, short)]
    file: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<String, Failure> {
        match (&self.text, &self.file) {
            (Some(text), _) => Ok(text.clone()),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
            (None, None) => Err(Failure::input("no input given".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and show its syntax tree.
    Parse(Input),
    /// Parse a formula and print it in canonical form.
    Fmt(Input),
    /// Decide a quantifier-free formula, printing a countermodel if invalid.
    Decide {
        #[command(flatten)]
        input: Input,
        /// A premise; may be repeated.
        #[arg(long = "premise", short)]
        premises: Vec<String>,
    },
    /// Check a proof file.
    Check(Input),
    /// Print the star translation of a formula.
    Star(Input),
    /// Replay a superposition scenario.
    Superpose(Input),
    /// Decide the six reference formulas and print a pass/fail table.
    Selftest,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: String) -> Self {
        Failure {
            code: EXIT_INPUT,
            message,
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        let code = match e {
            SemanticsError::ClosureTooLarge { .. } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        let code = match e {
            ScenarioError::Semantics {
                source: SemanticsError::ClosureTooLarge { .. },
                ..
            } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Output {
    code: u8,
    text: String,
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| Failure::input(e.to_string()))
}

fn structured<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable output");
    s.push('\n');
    s
}

fn tree(f: &Formula, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match f {
        Formula::Atom { .. } => {
            let _ = writeln!(out, "{pad}{}", paracon_core::print(f));
        }
        Formula::Not(a) => {
            let _ = writeln!(out, "{pad}~");
            tree(a, indent + 1, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => "&",
                Formula::Or(..) => "|",
                _ => "->",
            };
            let _ = writeln!(out, "{pad}{op}");
            tree(a, indent + 1, out);
            tree(b, indent + 1, out);
        }
        Formula::ForAll(x, a) | Formula::Exists(x, a) => {
            let q = if matches!(f, Formula::ForAll(..)) {
                "forall"
            } else {
                "exists"
            };
            let _ = writeln!(out, "{pad}{q} {x}");
            tree(a, indent + 1, out);
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let print_opts = PrintOptions {
        resugar: cli.resugar,
    };
    let show = |f: &Formula| print_with(f, print_opts);
    let opts = DecideOptions {
        depth: cli.depth,
        cap: cli.cap.unwrap_or(DEFAULT_CAP),
    };
    let json = cli.format == Format::Structured;
    let ok = |text: String| {
        Ok(Output {
            code: EXIT_OK,
            text,
        })
    };

    match &cli.command {
        Command::Parse(input) => {
            let f = parse_formula(&input.read()?)?;
            if json {
                #[derive(Serialize)]
                struct Parsed<'a> {
                    formula: String,
                    tree: &'a Formula,
                }
                ok(structured(&Parsed {
                    formula: show(&f),
                    tree: &f,
                }))
            } else {
                let mut out = String::new();
                tree(&f, 0, &mut out);
                ok(out)
            }
        }
        Command::Fmt(input) | Command::Star(input) => {
            let f = parse_formula(&input.read()?)?;
            let f = match cli.command {
                Command::Star(_) => star_translate(&f),
                _ => f,
            };
            if json {
                ok(structured(&serde_json::json!({ "formula": show(&f) })))
            } else {
                ok(format!("{}\n", show(&f)))
            }
        }
        Command::Decide { input, premises } => {
            let f = parse_formula(&input.read()?)?;
            let premises = premises
                .iter()
                .map(|p| parse_formula(p))
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = decide(&f, &premises, opts)?;
            let code = if verdict.is_valid() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            let text = if json {
                structured(&verdict)
            } else {
                let mut out = format!("{}\n", verdict.name());
                if let Some(cm) = verdict.countermodel() {
                    for (g, v) in cm.iter() {
                        let _ = writeln!(out, "{} = {}", show(g), u8::from(v));
                    }
                }
                out
            };
            Ok(Output { code, text })
        }
        Command::Check(input) => {
            let proof = parse_proof(&input.read()?).map_err(|e| Failure::input(e.to_string()))?;
            let report = check_proof(&proof);
            let code = if report.accepted {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            let text = if json {
                structured(&report)
            } else {
                report.render()
            };
            Ok(Output { code, text })
        }
        Command::Superpose(input) => {
            let scenario = Scenario::parse(&input.read()?)?;
            let opts = DecideOptions {
                cap: cli.cap.unwrap_or(KB_DEFAULT_CAP),
                ..opts
            };
            let outcomes = scenario.run_with(opts, print_opts)?;
            if json {
                ok(structured(&outcomes))
            } else {
                ok(outcomes.iter().map(|o| o.render()).collect())
            }
        }
        Command::Selftest => {
            let rows = run_selftest(opts)?;
            let code = if rows.iter().all(|r| r.pass) {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            let text = if json {
                structured(&rows)
            } else {
                render_table(&rows)
            };
            Ok(Output { code, text })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            ExitCode::from(fail.code)
        }
    }
}
