//! Concrete syntax: a hand-written lexer and recursive-descent parser, and a
//! precedence-aware printer.
//!
//! Binding strength, tightest first: `~`, `~*` and the postfix `^o`; `&`;
//! `|`; `->`; `<->`. `&` and `|` associate to the left, `->` and `<->` to
//! the right. A quantifier body extends as far to the right as possible.
//! UTF-8 aliases: `¬ ∧ ∨ → ↔ ∀ ∃ ∈ °`, and `¬*` for strong negation.

use thiserror::Error;

use crate::formula::{
    ball, is_variable_name, strong_neg, Formula, Term, Var, IDENTITY, MEMBERSHIP,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    StrongNot,
    Ball,
    And,
    Or,
    Implies,
    Iff,
    ForAll,
    Exists,
    In,
    Eq,
    LParen,
    RParen,
    Comma,
    Dot,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`~`".into(),
            Tok::StrongNot => "`~*`".into(),
            Tok::Ball => "`^o`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::ForAll => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::In => "`in`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut width = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
                continue;
            }
            '~' | '¬' => {
                if chars.get(i + 1) == Some(&'*') {
                    width = 2;
                    Tok::StrongNot
                } else {
                    Tok::Not
                }
            }
            '^' => {
                if chars.get(i + 1) == Some(&'o') {
                    width = 2;
                    Tok::Ball
                } else {
                    return Err(err(line, column, "expected `^o`".into()));
                }
            }
            '°' => Tok::Ball,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '∀' => Tok::ForAll,
            '∃' => Tok::Exists,
            '∈' => Tok::In,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '-' if chars.get(i + 1) == Some(&'>') => {
                width = 2;
                Tok::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                width = 3;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                width = j - i;
                let word: String = chars[i..j].iter().collect();
                match word.as_str() {
                    "forall" => Tok::ForAll,
                    "exists" => Tok::Exists,
                    "in" => Tok::In,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(err(line, column, format!("unexpected character `{other}`")));
            }
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += width;
        column += width;
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let at = &self.toks[self.pos];
        ParseError {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.formula()?;
            return Ok(lhs.iff(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::StrongNot => {
                self.bump();
                Ok(strong_neg(self.unary()?))
            }
            Tok::ForAll | Tok::Exists => {
                let universal = self.bump() == Tok::ForAll;
                let var = self.variable()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.primary()?;
        while *self.peek() == Tok::Ball {
            self.bump();
            f = ball(f);
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => match self.peek_at(1) {
                Tok::LParen => {
                    self.bump();
                    self.bump();
                    let mut args = vec![self.term()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Formula::atom(name, args))
                }
                Tok::In | Tok::Eq => {
                    let lhs = self.term()?;
                    let predicate = if self.bump() == Tok::In {
                        MEMBERSHIP
                    } else {
                        IDENTITY
                    };
                    let rhs = self.term()?;
                    Ok(Formula::atom(predicate, vec![lhs, rhs]))
                }
                _ if is_variable_name(&name) => {
                    Err(self.error(format!("variable `{name}` cannot stand alone as a formula")))
                }
                _ => {
                    self.bump();
                    Ok(Formula::prop(name))
                }
            },
            other => Err(self.error(format!("expected a formula, found {}", other.describe()))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let t = Term::from_identifier(&name).map_err(|e| self.error(e.to_string()))?;
                self.bump();
                Ok(t)
            }
            other => Err(self.error(format!("expected a term, found {}", other.describe()))),
        }
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let v = Var::new(name).map_err(|e| self.error(e.to_string()))?;
                self.bump();
                Ok(v)
            }
            other => Err(self.error(format!(
                "expected a bound variable, found {}",
                other.describe()
            ))),
        }
    }
}

/// Parses a formula, expanding `^o`, `~*` and `<->` into primitive
/// connectives.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = parser.formula()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(format!(
            "unexpected {} after formula",
            parser.peek().describe()
        )));
    }
    Ok(f)
}

/// Parses a single term (a variable or constant identifier).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let t = parser.term()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("unexpected input after term"));
    }
    Ok(t)
}

/// Printer configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct PrintOptions {
    /// Print `~(X & ~X)` as `X^o` and `~X & X^o` as `~*X`.
    pub resugar: bool,
}

const PREC_QUANT: u8 = 0;
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

/// Desugared ASCII rendering.
pub fn print(f: &Formula) -> String {
    print_with(f, PrintOptions::default())
}

pub fn print_with(f: &Formula, opts: PrintOptions) -> String {
    let mut out = String::new();
    write_formula(f, PREC_QUANT, opts, &mut out);
    out
}

fn write_formula(f: &Formula, ctx: u8, opts: PrintOptions, out: &mut String) {
    let wrap = |own: u8, out: &mut String, body: &dyn Fn(&mut String)| {
        if ctx > own {
            out.push('(');
            body(out);
            out.push(')');
        } else {
            body(out);
        }
    };
    if opts.resugar {
        if let Some(b) = f.as_strong_neg() {
            return wrap(PREC_UNARY, out, &|out| {
                out.push_str("~*");
                write_formula(b, PREC_UNARY, opts, out);
            });
        }
        if let Some(b) = f.as_ball() {
            return wrap(PREC_UNARY, out, &|out| {
                write_formula(b, PREC_ATOM, opts, out);
                out.push_str("^o");
            });
        }
    }
    match f {
        Formula::Atom { predicate, args } => write_atom(predicate, args, out),
        Formula::Not(a) => wrap(PREC_UNARY, out, &|out| {
            out.push('~');
            write_formula(a, PREC_UNARY, opts, out);
        }),
        Formula::And(a, b) => wrap(PREC_AND, out, &|out| {
            write_formula(a, PREC_AND, opts, out);
            out.push_str(" & ");
            write_formula(b, PREC_UNARY, opts, out);
        }),
        Formula::Or(a, b) => wrap(PREC_OR, out, &|out| {
            write_formula(a, PREC_OR, opts, out);
            out.push_str(" | ");
            write_formula(b, PREC_AND, opts, out);
        }),
        Formula::Implies(a, b) => wrap(PREC_IMP, out, &|out| {
            write_formula(a, PREC_OR, opts, out);
            out.push_str(" -> ");
            write_formula(b, PREC_IMP, opts, out);
        }),
        Formula::ForAll(x, a) | Formula::Exists(x, a) => {
            let keyword = if matches!(f, Formula::ForAll(..)) {
                "forall"
            } else {
                "exists"
            };
            // a quantifier used as an operand is always parenthesised, so its
            // body cannot swallow what follows
            wrap(PREC_QUANT, out, &|out| {
                out.push_str(keyword);
                out.push(' ');
                out.push_str(x.name());
                out.push_str(". ");
                write_formula(a, PREC_QUANT, opts, out);
            })
        }
    }
}

fn write_atom(predicate: &str, args: &[Term], out: &mut String) {
    match (predicate, args) {
        (MEMBERSHIP, [a, b]) => {
            out.push_str(&format!("{a} in {b}"));
        }
        (IDENTITY, [a, b]) => {
            out.push_str(&format!("{a} = {b}"));
        }
        (_, []) => out.push_str(predicate),
        _ => {
            out.push_str(predicate);
            out.push('(');
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(t.name());
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(name: &str) -> Formula {
        Formula::prop(name)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("A | ~A").unwrap(), a("A").or(a("A").not()));
        assert_eq!(parse("A^o").unwrap(), a("A").and(a("A").not()).not());
        assert_eq!(
            parse("~* A").unwrap(),
            a("A").not().and(a("A").and(a("A").not()).not())
        );
        assert_eq!(
            parse("A <-> B").unwrap(),
            a("A").implies(a("B")).and(a("B").implies(a("A")))
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("¬A ∨ B").unwrap(), parse("~A | B").unwrap());
        assert_eq!(parse("A° ∧ ¬*B").unwrap(), parse("A^o & ~*B").unwrap());
        assert_eq!(
            parse("∀x. x ∈ S → ∃y. y = x").unwrap(),
            parse("forall x. x in S -> exists y. y = x").unwrap()
        );
        assert_eq!(parse("A ↔ B").unwrap(), parse("A <-> B").unwrap());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("A & B | C -> D").unwrap(),
            a("A").and(a("B")).or(a("C")).implies(a("D"))
        );
        assert_eq!(
            parse("A -> B -> C").unwrap(),
            a("A").implies(a("B").implies(a("C")))
        );
        assert_eq!(parse("A & B & C").unwrap(), a("A").and(a("B")).and(a("C")));
        assert_eq!(parse("~A^o").unwrap(), ball(a("A")).not());
        assert_eq!(
            parse("forall x. P(x) -> Q").unwrap(),
            Formula::forall(
                Var::new("x").unwrap(),
                Formula::atom("P", vec![Term::from_identifier("x").unwrap()]).implies(a("Q"))
            )
        );
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&a("A").or(a("A").not())), "A | ~A");
        assert_eq!(print(&a("A").not().not()), "~~A");
        let f = Formula::forall(
            Var::new("x").unwrap(),
            Formula::member(
                Term::from_identifier("x").unwrap(),
                Term::from_identifier("S").unwrap(),
            ),
        );
        assert_eq!(print(&f), "forall x. x in S");
        assert_eq!(print(&parse("(A -> B) -> C").unwrap()), "(A -> B) -> C");
        assert_eq!(print(&parse("A & (B & C)").unwrap()), "A & (B & C)");
        assert_eq!(
            print(&parse("(forall x. P(x)) & Q").unwrap()),
            "(forall x. P(x)) & Q"
        );
        assert_eq!(print(&parse("K(S,s1)").unwrap()), "K(S, s1)");
    }

    #[test]
    fn resugar() {
        let opts = PrintOptions { resugar: true };
        assert_eq!(print_with(&parse("A^o").unwrap(), opts), "A^o");
        assert_eq!(print_with(&parse("(A & B)^o").unwrap(), opts), "(A & B)^o");
        assert_eq!(print_with(&parse("~*A -> B").unwrap(), opts), "~*A -> B");
        assert_eq!(print(&parse("A^o").unwrap()), "~(A & ~A)");
        for text in ["~(A^o)", "(~A)^o", "~*~*A", "(A^o)^o", "~*(A | B) & C^o"] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&print_with(&f, opts)).unwrap(), f, "{text}");
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse("A &\n  | B").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse("(A | B").unwrap_err();
        assert!(e.message.contains("`)`"), "{e}");
        assert!(parse("A ^ B").is_err());
        assert!(parse("forall S. P").is_err());
        assert!(parse("x").is_err());
        assert!(parse("A B").is_err());
        assert!(parse("").is_err());
        assert!(parse("A # B").is_err());
    }

    #[test]
    fn open_formulas_are_legal() {
        assert!(parse("x in S").is_ok());
        assert!(parse("P(x, y, c)").is_ok());
    }
}
