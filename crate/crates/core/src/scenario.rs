//! Plain-text superposition scenarios.
//!
//! ```text
//! system S states s1,s2 amplitudes 0.7071067811865476,0;0.7071067811865476,0
//! assert P -> Q
//! guard P
//! query K(S, s1)
//! check nontrivial
//! ```

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::semantics::{DecideOptions, SemanticsError, Verdict};
use crate::superposition::{
    create_system, entails, inconsistency_facts, is_nontrivial, wellbehaved_guard, KbError,
    KnowledgeBase, SystemError,
};
use crate::syntax::{parse, print_with, PrintOptions};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("scenario line {line}: {source}")]
    System { line: usize, source: SystemError },
    #[error("scenario line {line}: {source}")]
    Kb { line: usize, source: KbError },
    #[error("scenario line {line}: {source}")]
    Semantics { line: usize, source: SemanticsError },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    System {
        id: String,
        labels: Vec<String>,
        amplitudes: Option<Vec<Complex64>>,
    },
    Assert(Formula),
    Guard(Formula),
    Query(Formula),
    CheckNontrivial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    /// Steps with their source line numbers.
    pub steps: Vec<(usize, Step)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum Outcome {
    System { id: String, facts: usize },
    Assert { formula: String },
    Guard { formula: String },
    Query { formula: String, verdict: Verdict },
    Nontrivial { nontrivial: bool },
}

impl Outcome {
    pub fn render(&self) -> String {
        match self {
            Outcome::System { id, facts } => format!("system {id}: {facts} K-facts\n"),
            Outcome::Assert { formula } => format!("assert {formula}\n"),
            Outcome::Guard { formula } => format!("guard {formula}\n"),
            Outcome::Query { formula, verdict } => format!("query {formula}: {}\n", verdict.name()),
            Outcome::Nontrivial { nontrivial } => format!("nontrivial: {nontrivial}\n"),
        }
    }
}

fn parse_amplitudes(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(';')
        .map(|pair| {
            let (re, im) = pair
                .split_once(',')
                .ok_or_else(|| format!("amplitude `{pair}` is not `re,im`"))?;
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{}` is not a number", s.trim()))
            };
            Ok(Complex64::new(num(re)?, num(im)?))
        })
        .collect()
}

fn parse_system(rest: &str) -> Result<Step, String> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    match words.as_slice() {
        [id, "states", labels, tail @ ..] => {
            let labels = labels.split(',').map(|s| s.trim().to_string()).collect();
            let amplitudes = match tail {
                [] => None,
                ["amplitudes", amps] => Some(parse_amplitudes(amps)?),
                _ => return Err("expected `amplitudes <re,im;...>`".into()),
            };
            Ok(Step::System {
                id: id.to_string(),
                labels,
                amplitudes,
            })
        }
        _ => Err("expected `system <id> states <s1,s2,...>`".into()),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ScenarioError::Syntax { line, message };
            let (keyword, rest) = content
                .split_once(char::is_whitespace)
                .unwrap_or((content, ""));
            let rest = rest.trim();
            let formula = || parse(rest).map_err(|e| err(e.to_string()));
            let step = match keyword {
                "system" => parse_system(rest).map_err(err)?,
                "assert" => Step::Assert(formula()?),
                "guard" => Step::Guard(formula()?),
                "query" => Step::Query(formula()?),
                "check" if rest == "nontrivial" => Step::CheckNontrivial,
                other => return Err(err(format!("unknown directive `{other}`"))),
            };
            steps.push((line, step));
        }
        Ok(Scenario { steps })
    }

    /// Replays the steps against a growing knowledge base.
    pub fn run(&self, opts: DecideOptions) -> Result<Vec<Outcome>, ScenarioError> {
        self.run_with(opts, PrintOptions::default())
    }

    /// As [`Scenario::run`], printing formulas in the outcomes with `style`.
    pub fn run_with(
        &self,
        opts: DecideOptions,
        style: PrintOptions,
    ) -> Result<Vec<Outcome>, ScenarioError> {
        let print = |f: &Formula| print_with(f, style);
        let mut kb = KnowledgeBase::new();
        let mut out = Vec::new();
        for (line, step) in &self.steps {
            let line = *line;
            let sem = |source| ScenarioError::Semantics { line, source };
            let kb_err = |source| ScenarioError::Kb { line, source };
            match step {
                Step::System {
                    id,
                    labels,
                    amplitudes,
                } => {
                    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
                    let sys = create_system(id, &labels, amplitudes.as_deref())
                        .map_err(|source| ScenarioError::System { line, source })?;
                    let facts = inconsistency_facts(&sys);
                    kb.extend(&facts);
                    out.push(Outcome::System {
                        id: id.clone(),
                        facts: facts.len(),
                    });
                }
                Step::Assert(f) => {
                    kb.insert(f.clone()).map_err(kb_err)?;
                    out.push(Outcome::Assert { formula: print(f) });
                }
                Step::Guard(f) => {
                    kb = wellbehaved_guard(&kb, std::slice::from_ref(f));
                    out.push(Outcome::Guard { formula: print(f) });
                }
                Step::Query(f) => {
                    let verdict = entails(&kb, f, opts).map_err(sem)?;
                    out.push(Outcome::Query {
                        formula: print(f),
                        verdict,
                    });
                }
                Step::CheckNontrivial => {
                    let nontrivial = is_nontrivial(&kb, opts).map_err(sem)?;
                    out.push(Outcome::Nontrivial { nontrivial });
                }
            }
        }
        Ok(out)
    }
}
