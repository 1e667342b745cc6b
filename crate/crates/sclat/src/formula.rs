//! Abstract syntax, parser and printer for the term/formula language:
//! lattice terms with difference and pure-component operators, atomic
//! predicates over them, boolean connectives, and an optional single leading
//! quantifier block.
//!
//! ASCII grammar (tightest first): `C<i>(t)` binds tightest, then `-`, `/\`,
//! `\/` in terms; `!`, `/\`, `\/` in formulas; atoms are `t = t`, `t <= t`,
//! `t != t`, `At<k>(t)`. Sentences start with `E x y .` or `A x y .`.
//! Unicode aliases (∧ ∨ ¬ ≤ ≠ ∃ ∀ −) are accepted on input, never printed.

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Diff(Box<Term>, Box<Term>),
    Comp(u32, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Le(Term, Term),
    AtK(u32, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A quantifier-free formula, or a single-block sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub quantifier: Option<Quantifier>,
    pub vars: Vec<String>,
    pub matrix: Formula,
}

impl Term {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Join(a, b) | Term::Meet(a, b) | Term::Diff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Comp(_, t) => t.collect_vars(out),
        }
    }
}

impl Formula {
    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::AtK(_, t) => t.collect_vars(out),
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn uses_at(&self) -> bool {
        match self {
            Formula::AtK(..) => true,
            Formula::Eq(..) | Formula::Le(..) => false,
            Formula::Not(f) => f.uses_at(),
            Formula::And(a, b) | Formula::Or(a, b) => a.uses_at() || b.uses_at(),
        }
    }

    /// Largest index occurring in an `At` atom.
    pub fn max_at_index(&self) -> u32 {
        match self {
            Formula::AtK(k, _) => *k,
            Formula::Eq(..) | Formula::Le(..) => 0,
            Formula::Not(f) => f.max_at_index(),
            Formula::And(a, b) | Formula::Or(a, b) => a.max_at_index().max(b.max_at_index()),
        }
    }
}

impl Sentence {
    pub fn quantifier_free(matrix: Formula) -> Sentence {
        Sentence {
            quantifier: None,
            vars: Vec::new(),
            matrix,
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    CIdx(u32),
    AtIdx(u32),
    Join,
    Meet,
    Minus,
    Not,
    Eq,
    Le,
    Ne,
    LPar,
    RPar,
    Exists,
    Forall,
    Dot,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let mut push = |t: Tok| out.push((pos, t));
        match c {
            c if c.is_whitespace() => {}
            '(' => push(Tok::LPar),
            ')' => push(Tok::RPar),
            '.' => push(Tok::Dot),
            '0' => push(Tok::Zero),
            '1' => push(Tok::One),
            '-' | '\u{2212}' => push(Tok::Minus),
            '=' => push(Tok::Eq),
            '!' => {
                if matches!(chars.get(i + 1), Some((_, '='))) {
                    push(Tok::Ne);
                    i += 1;
                } else {
                    push(Tok::Not);
                }
            }
            '<' => {
                if matches!(chars.get(i + 1), Some((_, '='))) {
                    push(Tok::Le);
                    i += 1;
                } else {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected <=".into(),
                    });
                }
            }
            '\\' => {
                if matches!(chars.get(i + 1), Some((_, '/'))) {
                    push(Tok::Join);
                    i += 1;
                } else {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected \\/".into(),
                    });
                }
            }
            '/' => {
                if matches!(chars.get(i + 1), Some((_, '\\'))) {
                    push(Tok::Meet);
                    i += 1;
                } else {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected /\\".into(),
                    });
                }
            }
            '\u{2227}' => push(Tok::Meet),   // ∧
            '\u{2228}' => push(Tok::Join),   // ∨
            '\u{00ac}' => push(Tok::Not),    // ¬
            '\u{2264}' => push(Tok::Le),     // ≤
            '\u{2260}' => push(Tok::Ne),     // ≠
            '\u{2203}' => push(Tok::Exists), // ∃
            '\u{2200}' => push(Tok::Forall), // ∀
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len()
                    && (chars[i + 1].1.is_ascii_alphanumeric() || chars[i + 1].1 == '_')
                {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().map(|&(_, c)| c).collect();
                let tok = classify_word(&word, pos)?;
                out.push((pos, tok));
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

fn classify_word(word: &str, pos: usize) -> Result<Tok> {
    if word == "E" {
        return Ok(Tok::Exists);
    }
    if word == "A" {
        return Ok(Tok::Forall);
    }
    if let Some(digits) = word.strip_prefix("At") {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let k: u32 = digits.parse().map_err(|_| Error::Syntax {
                pos,
                msg: "At index out of range".into(),
            })?;
            if k == 0 {
                return Err(Error::Semantic("At indices start at 1".into()));
            }
            return Ok(Tok::AtIdx(k));
        }
    }
    if let Some(digits) = word.strip_prefix('C') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let k: u32 = digits.parse().map_err(|_| Error::Syntax {
                pos,
                msg: "component index out of range".into(),
            })?;
            return Ok(Tok::CIdx(k));
        }
    }
    Ok(Tok::Ident(word.to_string()))
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        if self.peek() == Some(want) {
            self.at += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn sentence(&mut self) -> Result<Sentence> {
        let quantifier = match self.peek() {
            Some(Tok::Exists) => Some(Quantifier::Exists),
            Some(Tok::Forall) => Some(Quantifier::Forall),
            _ => None,
        };
        let mut vars = Vec::new();
        if let Some(q) = quantifier {
            loop {
                self.bump(); // the quantifier token
                loop {
                    match self.peek() {
                        Some(Tok::Ident(v)) => {
                            let v = v.clone();
                            if vars.contains(&v) {
                                return Err(Error::Semantic(format!(
                                    "variable {v} bound twice"
                                )));
                            }
                            vars.push(v);
                            self.at += 1;
                        }
                        _ => break,
                    }
                }
                if vars.is_empty() {
                    return Err(Error::Syntax {
                        pos: self.pos(),
                        msg: "expected variables after quantifier".into(),
                    });
                }
                self.expect(&Tok::Dot, "'.' after quantified variables")?;
                // Further blocks of the same kind fold into one.
                match (q, self.peek()) {
                    (Quantifier::Exists, Some(Tok::Exists)) => continue,
                    (Quantifier::Forall, Some(Tok::Forall)) => continue,
                    _ => break,
                }
            }
            if matches!(self.peek(), Some(Tok::Exists | Tok::Forall)) {
                return Err(Error::Semantic(
                    "only a single leading quantifier block is supported".into(),
                ));
            }
        }
        let matrix = self.formula()?;
        if self.at != self.toks.len() {
            return Err(Error::Syntax {
                pos: self.pos(),
                msg: "trailing input".into(),
            });
        }
        if quantifier.is_some() {
            let free = matrix.free_vars();
            for v in &free {
                if !vars.contains(v) {
                    return Err(Error::Semantic(format!(
                        "sentence leaves variable {v} unbound"
                    )));
                }
            }
        }
        Ok(Sentence {
            quantifier,
            vars,
            matrix,
        })
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.and_formula()?;
        while self.peek() == Some(&Tok::Join) {
            self.at += 1;
            let g = self.and_formula()?;
            f = Formula::Or(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn and_formula(&mut self) -> Result<Formula> {
        let mut f = self.unary_formula()?;
        while self.peek() == Some(&Tok::Meet) {
            self.at += 1;
            let g = self.unary_formula()?;
            f = Formula::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary_formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::Not(Box::new(self.unary_formula()?)))
            }
            Some(Tok::AtIdx(k)) => {
                let k = *k;
                self.at += 1;
                self.expect(&Tok::LPar, "'(' after At")?;
                let t = self.term()?;
                self.expect(&Tok::RPar, "')'")?;
                Ok(Formula::AtK(k, t))
            }
            _ => {
                // Try an atomic relation first; fall back to a parenthesized
                // formula.
                let save = self.at;
                match self.relation() {
                    Ok(f) => Ok(f),
                    Err(rel_err) => {
                        self.at = save;
                        if self.peek() == Some(&Tok::LPar) {
                            self.at += 1;
                            let f = self.formula()?;
                            self.expect(&Tok::RPar, "')'")?;
                            Ok(f)
                        } else {
                            Err(rel_err)
                        }
                    }
                }
            }
        }
    }

    // The right-hand side stops below /\ and \/ so those bind at the formula
    // level after an atom; parenthesize to join or meet on the right.
    fn relation(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.bump() {
            Some(Tok::Eq) => Ok(Formula::Eq(lhs, self.term_diff()?)),
            Some(Tok::Le) => Ok(Formula::Le(lhs, self.term_diff()?)),
            Some(Tok::Ne) => Ok(Formula::Not(Box::new(Formula::Eq(lhs, self.term_diff()?)))),
            _ => Err(Error::Syntax {
                pos: self.pos(),
                msg: "expected =, <= or != after term".into(),
            }),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.term_meet()?;
        while self.peek() == Some(&Tok::Join) {
            self.at += 1;
            let u = self.term_meet()?;
            t = Term::Join(Box::new(t), Box::new(u));
        }
        Ok(t)
    }

    fn term_meet(&mut self) -> Result<Term> {
        let mut t = self.term_diff()?;
        while self.peek() == Some(&Tok::Meet) {
            self.at += 1;
            let u = self.term_diff()?;
            t = Term::Meet(Box::new(t), Box::new(u));
        }
        Ok(t)
    }

    fn term_diff(&mut self) -> Result<Term> {
        let mut t = self.term_prim()?;
        while self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            let u = self.term_prim()?;
            t = Term::Diff(Box::new(t), Box::new(u));
        }
        Ok(t)
    }

    fn term_prim(&mut self) -> Result<Term> {
        match self.bump() {
            Some(Tok::Zero) => Ok(Term::Zero),
            Some(Tok::One) => Ok(Term::One),
            Some(Tok::Ident(v)) => Ok(Term::Var(v)),
            Some(Tok::CIdx(k)) => {
                self.expect(&Tok::LPar, "'(' after component operator")?;
                let t = self.term()?;
                self.expect(&Tok::RPar, "')'")?;
                Ok(Term::Comp(k, Box::new(t)))
            }
            Some(Tok::LPar) => {
                let t = self.term()?;
                self.expect(&Tok::RPar, "')'")?;
                Ok(t)
            }
            _ => Err(Error::Syntax {
                pos: self.pos(),
                msg: "expected a term".into(),
            }),
        }
    }
}

/// Parses a quantifier-free formula or single-block sentence.
pub fn parse_sentence(text: &str) -> Result<Sentence> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    p.sentence()
}

/// Parses text that must be quantifier-free.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let s = parse_sentence(text)?;
    if s.quantifier.is_some() {
        return Err(Error::Semantic("expected a quantifier-free formula".into()));
    }
    Ok(s.matrix)
}

// ---------------------------------------------------------------------------
// Rendering (normal form; parse . render = identity)

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Zero | Term::One | Term::Var(_) | Term::Comp(..) => 3,
        Term::Diff(..) => 2,
        Term::Meet(..) => 1,
        Term::Join(..) => 0,
    }
}

fn fmt_term(t: &Term, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = term_prec(t);
    if prec < min {
        write!(f, "(")?;
    }
    match t {
        Term::Zero => write!(f, "0")?,
        Term::One => write!(f, "1")?,
        Term::Var(v) => write!(f, "{v}")?,
        Term::Comp(k, t) => {
            write!(f, "C{k}(")?;
            fmt_term(t, 0, f)?;
            write!(f, ")")?;
        }
        Term::Diff(a, b) => {
            fmt_term(a, 2, f)?;
            write!(f, " - ")?;
            fmt_term(b, 3, f)?;
        }
        Term::Meet(a, b) => {
            fmt_term(a, 1, f)?;
            write!(f, " /\\ ")?;
            fmt_term(b, 2, f)?;
        }
        Term::Join(a, b) => {
            fmt_term(a, 0, f)?;
            write!(f, " \\/ ")?;
            fmt_term(b, 1, f)?;
        }
    }
    if prec < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}

fn formula_prec(x: &Formula) -> u8 {
    match x {
        Formula::Eq(..) | Formula::Le(..) | Formula::AtK(..) => 3,
        Formula::Not(inner) => {
            if matches!(**inner, Formula::Eq(..)) {
                3 // rendered as !=
            } else {
                2
            }
        }
        Formula::And(..) => 1,
        Formula::Or(..) => 0,
    }
}

fn fmt_formula(x: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = formula_prec(x);
    if prec < min {
        write!(f, "(")?;
    }
    match x {
        Formula::Eq(a, b) => {
            fmt_term(a, 0, f)?;
            write!(f, " = ")?;
            fmt_term(b, 2, f)?;
        }
        Formula::Le(a, b) => {
            fmt_term(a, 0, f)?;
            write!(f, " <= ")?;
            fmt_term(b, 2, f)?;
        }
        Formula::AtK(k, t) => {
            write!(f, "At{k}(")?;
            fmt_term(t, 0, f)?;
            write!(f, ")")?;
        }
        Formula::Not(inner) => {
            if let Formula::Eq(a, b) = &**inner {
                fmt_term(a, 0, f)?;
                write!(f, " != ")?;
                fmt_term(b, 2, f)?;
            } else {
                write!(f, "!")?;
                fmt_formula(inner, 2, f)?;
            }
        }
        Formula::And(a, b) => {
            fmt_formula(a, 1, f)?;
            write!(f, " /\\ ")?;
            fmt_formula(b, 2, f)?;
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 0, f)?;
            write!(f, " \\/ ")?;
            fmt_formula(b, 1, f)?;
        }
    }
    if prec < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.quantifier {
            write!(f, "{} ", if q == Quantifier::Exists { "E" } else { "A" })?;
            for v in &self.vars {
                write!(f, "{v} ")?;
            }
            write!(f, ". ")?;
        }
        write!(f, "{}", self.matrix)
    }
}

/// Variables actually used in a formula, plus declared-but-unused bound ones.
pub fn sentence_vars(s: &Sentence) -> Vec<String> {
    if s.quantifier.is_some() {
        s.vars.clone()
    } else {
        let mut vs = s.matrix.free_vars();
        let set: BTreeSet<String> = vs.iter().cloned().collect();
        debug_assert_eq!(set.len(), vs.len());
        vs.sort();
        vs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_meet_of_components_as_atom() {
        let f = parse_formula("C1(x) /\\ C0(x) != 0").unwrap();
        match &f {
            Formula::Not(inner) => match &**inner {
                Formula::Eq(lhs, Term::Zero) => {
                    assert_eq!(
                        *lhs,
                        Term::Meet(
                            Box::new(Term::Comp(1, Box::new(Term::Var("x".into())))),
                            Box::new(Term::Comp(0, Box::new(Term::Var("x".into())))),
                        )
                    );
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_existential_sentence() {
        let s = parse_sentence("E x . C1(x) = x /\\ x != 0").unwrap();
        assert_eq!(s.quantifier, Some(Quantifier::Exists));
        assert_eq!(s.vars, vec!["x"]);
        let s2 = parse_sentence("E x y . x = y").unwrap();
        assert_eq!(s2.vars, vec!["x", "y"]);
    }

    #[test]
    fn at_zero_is_a_semantic_error() {
        assert!(matches!(
            parse_sentence("At0(x)"),
            Err(Error::Semantic(_))
        ));
    }

    #[test]
    fn unbound_variable_in_sentence_is_rejected() {
        assert!(matches!(
            parse_sentence("E x . x = y"),
            Err(Error::Semantic(_))
        ));
    }

    #[test]
    fn unicode_aliases_accepted_never_emitted() {
        let f = parse_formula("¬(x ∧ y ≠ 0) ∨ x ≤ 1").unwrap();
        let printed = f.to_string();
        assert!(printed.is_ascii(), "{printed}");
        assert_eq!(parse_formula(&printed).unwrap(), f);
    }

    #[test]
    fn parenthesized_formulas_backtrack() {
        let f = parse_formula("(x = 0 \\/ y = 0) /\\ z = 1").unwrap();
        assert!(matches!(f, Formula::And(..)));
        let g = parse_formula("(x /\\ y) = 0").unwrap();
        assert!(matches!(g, Formula::Eq(Term::Meet(..), Term::Zero)));
    }

    #[test]
    fn render_parse_round_trip() {
        for text in [
            "C1(x) /\\ C0(x) != 0",
            "E x . C1(x) = x /\\ x != 0",
            "A x y . x - y <= x \\/ !(x = y /\\ y = 0)",
            "x - (y \\/ z) = x - y - z",
            "At3(x \\/ y)",
        ] {
            let s = parse_sentence(text).unwrap();
            let printed = s.to_string();
            let back = parse_sentence(&printed).unwrap();
            assert_eq!(back, s, "through {printed:?}");
        }
    }
}
