//! The line-oriented proof file format.
//!
//! ```text
//! # comment
//! premise: A
//! premise: A -> B
//! 1: A ; premise
//! 2: A -> B ; premise
//! 3: B ; mp 1 2
//! ```
//!
//! Justifications: `ax<k> [A=...,B=...,C=...]` (the binding is optional;
//! quantificational schemas are `axq<k>` and also take `x=` and `t=`),
//! `premise`, `mp <i> <j>`, `qr1 <i> <x>`, `qr4 <i> <x>`, `reletter <i>`.

use thiserror::Error;

use crate::formula::{Term, Var};
use crate::proof::kernel::{Justification, Proof, ProofLine};
use crate::proof::schema::{SchemaBinding, SchemaId};
use crate::syntax::{parse, parse_term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("proof file line {line}: {message}")]
pub struct ProofFileError {
    pub line: usize,
    pub message: String,
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofFileError> {
    let mut proof = Proof::default();
    for (i, raw) in text.lines().enumerate() {
        let file_line = i + 1;
        let err = |message: String| ProofFileError {
            line: file_line,
            message,
        };
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("premise:") {
            let f = parse(rest).map_err(|e| err(e.to_string()))?;
            proof.premises.push(f);
            continue;
        }
        let (number, rest) = content
            .split_once(':')
            .ok_or_else(|| err("expected `<n>: <formula> ; <justification>`".into()))?;
        let number: usize = number
            .trim()
            .parse()
            .map_err(|_| err(format!("`{}` is not a line number", number.trim())))?;
        if number != proof.lines.len() + 1 {
            return Err(err(format!(
                "line number {number} out of sequence, expected {}",
                proof.lines.len() + 1
            )));
        }
        let (formula, justification) = rest
            .split_once(';')
            .ok_or_else(|| err("missing `; <justification>`".into()))?;
        let formula = parse(formula).map_err(|e| err(e.to_string()))?;
        let justification = parse_justification(justification.trim()).map_err(err)?;
        proof.lines.push(ProofLine {
            formula,
            justification,
        });
    }
    Ok(proof)
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let (head, rest) = match text.find(|c: char| c.is_whitespace() || c == '[') {
        Some(pos) => (&text[..pos], text[pos..].trim()),
        None => (text, ""),
    };
    let words: Vec<&str> = rest.split_whitespace().collect();
    let index = |s: &str| -> Result<usize, String> {
        s.parse()
            .map_err(|_| format!("`{s}` is not a line reference"))
    };
    let variable = |s: &str| Var::new(s).map_err(|e| e.to_string());
    let arity = |n: usize| {
        if words.len() == n {
            Ok(())
        } else {
            Err(format!("`{head}` takes {n} argument(s)"))
        }
    };
    match head {
        "premise" => {
            arity(0)?;
            Ok(Justification::Premise)
        }
        "mp" => {
            arity(2)?;
            Ok(Justification::Mp(index(words[0])?, index(words[1])?))
        }
        "qr1" => {
            arity(2)?;
            Ok(Justification::Qr1(index(words[0])?, variable(words[1])?))
        }
        "qr4" => {
            arity(2)?;
            Ok(Justification::Qr4(index(words[0])?, variable(words[1])?))
        }
        "reletter" => {
            arity(1)?;
            Ok(Justification::Reletter(index(words[0])?))
        }
        _ => {
            let id = head
                .strip_prefix("ax")
                .ok_or_else(|| format!("unknown justification `{head}`"))?;
            let id: SchemaId = id
                .parse()
                .map_err(|e: crate::proof::schema::UnknownSchema| e.to_string())?;
            if id.is_rule() {
                let rule = match id {
                    SchemaId::Prop(_) => "mp",
                    SchemaId::Quant(1) => "qr1",
                    _ => "qr4",
                };
                return Err(format!("postulate {id} is a rule; use `{rule}`"));
            }
            let binding = if rest.is_empty() {
                SchemaBinding::default()
            } else {
                parse_binding(rest)?
            };
            Ok(Justification::Axiom(id, binding))
        }
    }
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn parse_binding(text: &str) -> Result<SchemaBinding, String> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("expected `[KEY=value, ...]`, found `{text}`"))?;
    let mut binding = SchemaBinding::default();
    for part in split_top_level(inner) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("binding entry `{part}` has no `=`"))?;
        let key = key.trim();
        match key {
            "A" | "B" | "C" => {
                let f = parse(value).map_err(|e| format!("{key}: {e}"))?;
                if binding.formulas.insert(key.to_string(), f).is_some() {
                    return Err(format!("`{key}` bound twice"));
                }
            }
            "x" | "t" => {
                let t: Term = parse_term(value).map_err(|e| format!("{key}: {e}"))?;
                if key == "x" && t.as_var().is_none() {
                    return Err(format!("x must be bound to a variable, not `{t}`"));
                }
                if binding.terms.insert(key.to_string(), t).is_some() {
                    return Err(format!("`{key}` bound twice"));
                }
            }
            other => return Err(format!("unknown metavariable `{other}`")),
        }
    }
    Ok(binding)
}
