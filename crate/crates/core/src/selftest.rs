//! The six reference verdicts for weak and strong negation, as a table.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::semantics::{decide, verify_countermodel, DecideOptions, SemanticsError};
use crate::syntax::{parse, print_with, PrintOptions};

/// `(formula, expected to be valid)`.
pub const REFERENCE_VERDICTS: [(&str, bool); 6] = [
    ("A | ~A", true),
    ("~~A -> A", true),
    ("(A & ~*A) -> B", true),
    ("(A & ~A) -> B", false),
    ("A -> ~~A", false),
    ("~(A & ~A)", false),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestRow {
    pub formula: String,
    pub expected: &'static str,
    pub actual: &'static str,
    /// For Invalid verdicts, whether the countermodel passed the
    /// independent clause check.
    pub countermodel_verified: Option<bool>,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn run_selftest(opts: DecideOptions) -> Result<Vec<SelftestRow>, SemanticsError> {
    REFERENCE_VERDICTS
        .iter()
        .map(|&(text, valid)| {
            let f = parse(text).expect("reference formula parses");
            let start = Instant::now();
            let verdict = decide(&f, &[], opts)?;
            let elapsed = start.elapsed();
            let countermodel_verified = verdict
                .countermodel()
                .map(|cm| verify_countermodel(&f, &[], cm));
            let pass = verdict.is_valid() == valid && countermodel_verified != Some(false);
            Ok(SelftestRow {
                formula: print_with(&f, PrintOptions { resugar: true }),
                expected: if valid { "Valid" } else { "Invalid" },
                actual: verdict.name(),
                countermodel_verified,
                pass,
                elapsed,
            })
        })
        .collect()
}

pub fn render_table(rows: &[SelftestRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.formula.len())
        .max()
        .unwrap_or(7)
        .max(7);
    let mut out = format!(
        "{:<width$}  {:<8}  {:<8}  result\n",
        "formula", "expected", "actual"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:<8}  {:<8}  {}\n",
            r.formula,
            r.expected,
            r.actual,
            if r.pass { "pass" } else { "FAIL" }
        ));
    }
    out
}
