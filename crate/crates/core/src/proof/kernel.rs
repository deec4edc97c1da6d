//! Line-by-line proof checking.

use std::fmt;

use serde::Serialize;

use crate::formula::{Formula, Var};
use crate::proof::schema::{instantiate, match_axiom, SchemaBinding, SchemaId};
use crate::subst::is_reletter_of;
use crate::syntax::print;

/// Line references are 1-based, as in proof files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Justification {
    /// An empty binding asks the checker to find one.
    Axiom(SchemaId, SchemaBinding),
    Premise,
    /// `Mp(i, j)`: line `j` is `line i -> this line`.
    Mp(usize, usize),
    /// From `C -> A` infer `C -> forall x. A`.
    Qr1(usize, Var),
    /// From `A -> C` infer `(exists x. A) -> C`.
    Qr4(usize, Var),
    Reletter(usize),
}

impl Justification {
    pub fn rule(&self) -> &'static str {
        match self {
            Justification::Axiom(..) => "axiom",
            Justification::Premise => "premise",
            Justification::Mp(..) => "mp",
            Justification::Qr1(..) => "qr1",
            Justification::Qr4(..) => "qr4",
            Justification::Reletter(_) => "reletter",
        }
    }

    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Axiom(..) | Justification::Premise => vec![],
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::Qr1(i, _) | Justification::Qr4(i, _) | Justification::Reletter(i) => {
                vec![*i]
            }
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(SchemaId::Prop(k), b) => {
                write!(f, "ax{k}")?;
                if !b.is_empty() {
                    write!(f, " {b}")?;
                }
                Ok(())
            }
            Justification::Axiom(SchemaId::Quant(k), b) => {
                write!(f, "axq{k}")?;
                if !b.is_empty() {
                    write!(f, " {b}")?;
                }
                Ok(())
            }
            Justification::Premise => f.write_str("premise"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Qr1(i, x) => write!(f, "qr1 {i} {x}"),
            Justification::Qr4(i, x) => write!(f, "qr4 {i} {x}"),
            Justification::Reletter(i) => write!(f, "reletter {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Proof {
    pub premises: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Renders the proof in the line-oriented file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in &self.premises {
            out.push_str(&format!("premise: {}\n", print(p)));
        }
        for (i, line) in self.lines.iter().enumerate() {
            out.push_str(&format!(
                "{}: {} ; {}\n",
                i + 1,
                print(&line.formula),
                line.justification
            ));
        }
        out
    }
}

/// Why a line was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub rule: String,
    pub message: String,
}

impl Diagnostic {
    fn new(rule: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            rule: rule.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// 1-based line number.
    pub line: usize,
    pub rule: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub accepted: bool,
    pub lines: usize,
    pub conclusion: Option<String>,
    pub failure: Option<Failure>,
}

impl CheckReport {
    pub fn render(&self) -> String {
        match &self.failure {
            None => format!(
                "accepted: {} ({} lines)\n",
                self.conclusion.as_deref().unwrap_or(""),
                self.lines
            ),
            Some(fail) => format!(
                "rejected at line {}: {}: {}\n",
                fail.line, fail.rule, fail.message
            ),
        }
    }
}

fn line_ref(proof: &Proof, current: usize, r: usize) -> Result<&Formula, Diagnostic> {
    if r == 0 || r >= current {
        return Err(Diagnostic::new(
            "structure",
            format!("line {current} refers to line {r}, which is not an earlier line"),
        ));
    }
    Ok(&proof.lines[r - 1].formula)
}

/// Checks line `number` (1-based), assuming every earlier line is valid.
pub fn check_line(proof: &Proof, number: usize) -> Result<(), Diagnostic> {
    let line = proof
        .lines
        .get(number.wrapping_sub(1))
        .ok_or_else(|| Diagnostic::new("structure", format!("there is no line {number}")))?;
    let current = &line.formula;
    match &line.justification {
        Justification::Axiom(id, binding) => check_axiom(current, *id, binding),
        Justification::Premise => {
            if proof.premises.contains(current) {
                Ok(())
            } else {
                Err(Diagnostic::new(
                    "premise",
                    format!("{} is not a declared premise", print(current)),
                ))
            }
        }
        Justification::Mp(i, j) => {
            let minor = line_ref(proof, number, *i)?;
            let major = line_ref(proof, number, *j)?;
            let expected = minor.clone().implies(current.clone());
            if *major == expected {
                Ok(())
            } else {
                Err(Diagnostic::new(
                    "mp",
                    format!(
                        "line {j} should be {} but is {}",
                        print(&expected),
                        print(major)
                    ),
                ))
            }
        }
        Justification::Qr1(i, x) => {
            let premise = line_ref(proof, number, *i)?;
            let Formula::Implies(side, body) = premise else {
                return Err(Diagnostic::new(
                    "QR1",
                    format!("line {i} is not an implication"),
                ));
            };
            let expected = (**side)
                .clone()
                .implies(Formula::forall(x.clone(), (**body).clone()));
            if *current != expected {
                return Err(Diagnostic::new(
                    "QR1",
                    format!("expected {} from line {i}", print(&expected)),
                ));
            }
            if side.is_free(x) {
                return Err(Diagnostic::new("QR1", format!("{x} free in antecedent")));
            }
            Ok(())
        }
        Justification::Qr4(i, x) => {
            let premise = line_ref(proof, number, *i)?;
            let Formula::Implies(body, side) = premise else {
                return Err(Diagnostic::new(
                    "QR4",
                    format!("line {i} is not an implication"),
                ));
            };
            let expected = Formula::exists(x.clone(), (**body).clone()).implies((**side).clone());
            if *current != expected {
                return Err(Diagnostic::new(
                    "QR4",
                    format!("expected {} from line {i}", print(&expected)),
                ));
            }
            if side.is_free(x) {
                return Err(Diagnostic::new("QR4", format!("{x} free in consequent")));
            }
            Ok(())
        }
        Justification::Reletter(i) => {
            let source = line_ref(proof, number, *i)?;
            if is_reletter_of(source, current) {
                Ok(())
            } else {
                Err(Diagnostic::new(
                    "reletter",
                    format!("{} is not a relettering of line {i}", print(current)),
                ))
            }
        }
    }
}

fn check_axiom(f: &Formula, id: SchemaId, binding: &SchemaBinding) -> Result<(), Diagnostic> {
    let rule = format!("ax{id}");
    if id.is_rule() {
        return Err(Diagnostic::new(
            &rule,
            format!("postulate {id} is a rule, not an axiom"),
        ));
    }
    if binding.is_empty() {
        if match_axiom(f).iter().any(|(k, _)| *k == id) {
            return Ok(());
        }
        return Err(Diagnostic::new(
            &rule,
            format!("{} is not an instance of postulate {id}", print(f)),
        ));
    }
    match instantiate(id, binding) {
        Ok(instance) if instance == *f => Ok(()),
        Ok(instance) => Err(Diagnostic::new(
            &rule,
            format!(
                "binding {binding} gives {}, not {}",
                print(&instance),
                print(f)
            ),
        )),
        Err(e) => Err(Diagnostic::new(&rule, e.to_string())),
    }
}

fn structural_check(proof: &Proof) -> Result<(), (usize, Diagnostic)> {
    if proof.lines.is_empty() {
        return Err((0, Diagnostic::new("structure", "proof has no lines")));
    }
    for (i, line) in proof.lines.iter().enumerate() {
        let number = i + 1;
        for r in line.justification.references() {
            line_ref(proof, number, r).map_err(|d| (number, d))?;
        }
        if let Justification::Axiom(id, _) = &line.justification {
            if id.is_rule() {
                return Err((
                    number,
                    Diagnostic::new(
                        "structure",
                        format!("postulate {id} is a rule, not an axiom"),
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Accepted iff every line checks. Dangling references anywhere in the
/// proof are reported before any logical check.
pub fn check_proof(proof: &Proof) -> CheckReport {
    let lines = proof.lines.len();
    let failure = structural_check(proof)
        .err()
        .or_else(|| (1..=lines).find_map(|n| check_line(proof, n).err().map(|d| (n, d))))
        .map(|(line, d)| Failure {
            line,
            rule: d.rule,
            message: d.message,
        });
    CheckReport {
        accepted: failure.is_none(),
        lines,
        conclusion: proof.conclusion().map(print),
        failure,
    }
}
