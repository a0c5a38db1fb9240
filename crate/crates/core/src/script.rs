//! Proof scripts: genus-parametric derivations checked step by step.
//!
//! ```text
//! script thm_main
//! min_genus 14
//! gen G1 := u{g-4} A2 C2^-1
//! G2 := conj(T^3, G1) => u{g-1} Gamma4 B4^-1 [rotation]
//! for i in 2..g-4 : Gamma{i}Gamma{i+1}inv := conj(T^{i-1}, X) => Gamma{i} Gamma{i+1}^-1 [rotation]
//! target u{g-1}
//! ```
//!
//! Full grammar in `docs/FORMATS.md`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::surface::Genus;
use crate::template::{self, Bindings, RangeHeader};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

impl ScriptError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ScriptError { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "reference")]
pub enum Justification {
    FreeReduction,
    RotationConjugation,
    ConjugationRewrite,
    Telescoping,
    AxiomFact(String),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::FreeReduction => f.write_str("free"),
            Justification::RotationConjugation => f.write_str("rotation"),
            Justification::ConjugationRewrite => f.write_str("conjugation"),
            Justification::Telescoping => f.write_str("telescoping"),
            Justification::AxiomFact(r) => write!(f, "axiom {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Literal(Word),
    Inverse(Box<Expr>),
    Power(Box<Expr>, i32),
    Conj(Box<Expr>, Box<Expr>),
    Product(Vec<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => f.write_str(n),
            Expr::Literal(w) => write!(f, "{w}"),
            Expr::Inverse(e) => write!(f, "inv({e})"),
            Expr::Power(e, n) => match **e {
                Expr::Name(_) => write!(f, "{e}^{n}"),
                _ => write!(f, "({e})^{n}"),
            },
            Expr::Conj(w, x) => write!(f, "conj({w}, {x})"),
            Expr::Product(fs) => {
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match e {
                        Expr::Literal(w) if w.len() > 1 => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    /// Step relies on closure of the subgroup under inverses.
    Inverse,
    /// Step is not displayed in the source derivation and was filled in.
    Reconstruction,
    /// The source prints this normal form, which may differ from the derived one.
    Printed(Word),
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::Inverse => f.write_str("inverse"),
            Flag::Reconstruction => f.write_str("reconstruction"),
            Flag::Printed(w) => write!(f, "printed({w})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub line: usize,
    pub name: String,
    pub expression: Expr,
    pub claimed: Word,
    pub justification: Justification,
    pub flags: Vec<Flag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub word: Word,
}

/// A script instantiated at one genus.
#[derive(Debug, Clone)]
pub struct ProofScript {
    pub name: String,
    pub genus: Genus,
    pub generators: Vec<Generator>,
    pub steps: Vec<Step>,
    pub targets: Vec<Word>,
}

#[derive(Debug, Clone)]
struct RawLine {
    number: usize,
    range: Option<RangeHeader>,
    body: String,
}

/// A parsed, genus-parametric script.
#[derive(Debug, Clone)]
pub struct Script {
    pub name: String,
    pub min_genus: u32,
    pub max_genus: Option<u32>,
    lines: Vec<RawLine>,
}

pub const THM_MAIN: &str = include_str!("../data/thm_main.proof");
pub const THM_MAIN2: &str = include_str!("../data/thm_main2.proof");

/// Names of the bundled scripts.
pub const BUNDLED: [&str; 2] = ["thm_main", "thm_main2"];

impl Script {
    pub fn bundled(name: &str) -> Option<Script> {
        let text = match name {
            "thm_main" => THM_MAIN,
            "thm_main2" => THM_MAIN2,
            _ => return None,
        };
        Some(Script::parse(text).expect("bundled script parses"))
    }

    pub fn parse(text: &str) -> Result<Script, ScriptError> {
        let mut name = None;
        let mut min_genus = None;
        let mut max_genus = None;
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let number = i + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let header = |prefix: &str| line.strip_prefix(prefix).map(str::trim);
            if let Some(v) = header("script ") {
                name = Some(v.to_string());
            } else if let Some(v) = header("min_genus ") {
                min_genus = Some(v.parse().map_err(|_| ScriptError::at(number, "bad min_genus"))?);
            } else if let Some(v) = header("max_genus ") {
                max_genus = Some(v.parse().map_err(|_| ScriptError::at(number, "bad max_genus"))?);
            } else {
                let (range, body) = template::split_range(line).map_err(|e| ScriptError::at(number, e.to_string()))?;
                lines.push(RawLine { number, range, body: body.trim().to_string() });
            }
        }
        Ok(Script {
            name: name.ok_or_else(|| ScriptError::at(1, "missing `script NAME` header"))?,
            min_genus: min_genus.ok_or_else(|| ScriptError::at(1, "missing `min_genus` header"))?,
            max_genus,
            lines,
        })
    }

    pub fn admits(&self, genus: Genus) -> bool {
        genus.get() >= self.min_genus && self.max_genus.is_none_or(|m| genus.get() <= m)
    }

    /// Expands templates and parses every line at `genus`.
    pub fn instantiate(&self, genus: Genus) -> Result<ProofScript, ScriptError> {
        let base = Bindings::genus(genus.get());
        let mut out = ProofScript { name: self.name.clone(), genus, generators: Vec::new(), steps: Vec::new(), targets: Vec::new() };
        let mut names: HashSet<String> = HashSet::new();
        for raw in &self.lines {
            let n = raw.number;
            for b in template::iterations(raw.range.as_ref(), &base).map_err(|e| ScriptError::at(n, e.to_string()))? {
                let body = template::fill(&raw.body, &b).map_err(|e| ScriptError::at(n, e.to_string()))?;
                if let Some(t) = body.strip_prefix("target ") {
                    out.targets.push(parse_word(t, n)?);
                } else if let Some(g) = body.strip_prefix("gen ") {
                    let (name, word) = g.split_once(":=").ok_or_else(|| ScriptError::at(n, "expected `gen NAME := WORD`"))?;
                    let name = declare(&mut names, name.trim(), n)?;
                    let word = parse_word(word, n)?;
                    if let Ok(w) = name.parse::<Word>() {
                        if w != word {
                            return Err(ScriptError::at(n, format!("generator name `{name}` reads as a different word")));
                        }
                    }
                    out.generators.push(Generator { name, word });
                } else {
                    let step = parse_step(&body, n, &names)?;
                    declare(&mut names, &step.name, n)?;
                    out.steps.push(step);
                }
            }
        }
        Ok(out)
    }
}

fn declare(names: &mut HashSet<String>, name: &str, line: usize) -> Result<String, ScriptError> {
    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !valid {
        return Err(ScriptError::at(line, format!("invalid name `{name}`")));
    }
    if name == "inv" || name == "conj" {
        return Err(ScriptError::at(line, format!("`{name}` is reserved")));
    }
    if !names.insert(name.to_string()) {
        return Err(ScriptError::at(line, format!("name `{name}` declared twice")));
    }
    Ok(name.to_string())
}

fn parse_word(text: &str, line: usize) -> Result<Word, ScriptError> {
    text.trim().parse().map_err(|e| ScriptError::at(line, format!("word `{}`: {e}", text.trim())))
}

fn parse_step(body: &str, line: usize, names: &HashSet<String>) -> Result<Step, ScriptError> {
    let (name, rest) = body.split_once(":=").ok_or_else(|| ScriptError::at(line, "expected `NAME := EXPR => WORD [justification]`"))?;
    let (expr, rest) = rest.split_once("=>").ok_or_else(|| ScriptError::at(line, "missing `=>` before the claimed normal form"))?;
    let open = rest.find('[').ok_or_else(|| ScriptError::at(line, "missing `[justification]`"))?;
    let close = rest[open..].find(']').ok_or_else(|| ScriptError::at(line, "unclosed `[`"))? + open;
    let claimed = parse_word(&rest[..open], line)?;
    let justification = match rest[open + 1..close].trim() {
        "free" => Justification::FreeReduction,
        "rotation" => Justification::RotationConjugation,
        "conjugation" => Justification::ConjugationRewrite,
        "telescoping" => Justification::Telescoping,
        other => match other.strip_prefix("axiom ") {
            Some(r) => Justification::AxiomFact(r.trim().to_string()),
            None => return Err(ScriptError::at(line, format!("unknown justification `{other}`"))),
        },
    };
    let flags = parse_flags(&rest[close + 1..], line)?;
    let expression = ExprParser::new(expr, line, names).parse()?;
    Ok(Step { line, name: name.trim().to_string(), expression, claimed, justification, flags })
}

fn parse_flags(text: &str, line: usize) -> Result<Vec<Flag>, ScriptError> {
    let mut flags = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(r) = rest.strip_prefix('@') else {
            return Err(ScriptError::at(line, format!("unexpected `{rest}` after justification")));
        };
        if let Some(r) = r.strip_prefix("printed(") {
            let close = r.find(')').ok_or_else(|| ScriptError::at(line, "unclosed `@printed(`"))?;
            flags.push(Flag::Printed(parse_word(&r[..close], line)?));
            rest = r[close + 1..].trim_start();
            continue;
        }
        let end = r.find(char::is_whitespace).unwrap_or(r.len());
        flags.push(match &r[..end] {
            "inverse" => Flag::Inverse,
            "reconstruction" => Flag::Reconstruction,
            other => return Err(ScriptError::at(line, format!("unknown flag `@{other}`"))),
        });
        rest = r[end..].trim_start();
    }
    Ok(flags)
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    names: &'a HashSet<String>,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str, line: usize, names: &'a HashSet<String>) -> Self {
        ExprParser { src, pos: 0, line, names }
    }

    fn err(&self, message: impl Into<String>) -> ScriptError {
        ScriptError::at(self.line, format!("expression column {}: {}", self.pos + 1, message.into()))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace() || c == '*') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ScriptError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn parse(mut self) -> Result<Expr, ScriptError> {
        let e = self.product()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, ScriptError> {
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            if c == ')' || c == ',' {
                break;
            }
            factors.push(self.factor()?);
        }
        match factors.len() {
            0 => Err(self.err("empty expression")),
            1 => Ok(factors.pop().expect("one factor")),
            _ => Ok(Expr::Product(factors)),
        }
    }

    fn exponent(&mut self) -> Result<Option<i32>, ScriptError> {
        if !self.src[self.pos..].starts_with('^') {
            return Ok(None);
        }
        self.pos += 1;
        let start = self.pos;
        if self.src[self.pos..].starts_with('-') {
            self.pos += 1;
        }
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let n: i32 = self.src[start..self.pos].parse().map_err(|_| self.err("bad exponent"))?;
        Ok(Some(n))
    }

    fn factor(&mut self) -> Result<Expr, ScriptError> {
        self.skip_ws();
        let base = if self.src[self.pos..].starts_with('(') {
            self.pos += 1;
            let e = self.product()?;
            self.expect(')')?;
            e
        } else {
            let start = self.pos;
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            let ident = &self.src[start..self.pos];
            if ident.is_empty() {
                return Err(self.err("expected a name, a generator or `(`"));
            }
            if (ident == "inv" || ident == "conj") && self.src[self.pos..].starts_with('(') {
                self.pos += 1;
                let first = self.product()?;
                let e = if ident == "inv" {
                    Expr::Inverse(Box::new(first))
                } else {
                    self.expect(',')?;
                    let second = self.product()?;
                    Expr::Conj(Box::new(first), Box::new(second))
                };
                self.expect(')')?;
                e
            } else if self.names.contains(ident) {
                Expr::Name(ident.to_string())
            } else {
                // literal: the exponent binds to the last letter
                self.exponent()?;
                let text = &self.src[start..self.pos];
                return text
                    .parse::<Word>()
                    .map(Expr::Literal)
                    .map_err(|e| self.err(format!("`{ident}` is neither a declared name nor a word: {e}")));
            }
        };
        Ok(match self.exponent()? {
            Some(-1) => Expr::Inverse(Box::new(base)),
            Some(n) => Expr::Power(Box::new(base), n),
            None => base,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(ns: &[&str]) -> HashSet<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn expression_forms() {
        let n = names(&["G1", "G2", "T"]);
        let e = ExprParser::new("conj(G2 G1, G2)", 1, &n).parse().unwrap();
        assert_eq!(e.to_string(), "conj(G2 G1, G2)");
        let e = ExprParser::new("G1 * G2^-1", 1, &n).parse().unwrap();
        assert_eq!(e, Expr::Product(vec![Expr::Name("G1".into()), Expr::Inverse(Box::new(Expr::Name("G2".into())))]));
        let e = ExprParser::new("conj(T^-3, A2 Gamma4^-1)", 1, &n).parse().unwrap();
        let Expr::Conj(w, _) = e else { panic!() };
        assert_eq!(*w, Expr::Power(Box::new(Expr::Name("T".into())), -3));
        assert!(ExprParser::new("G1 Q7", 1, &n).parse().is_err());
        assert!(ExprParser::new("conj(G1 G2)", 1, &n).parse().is_err());
        assert!(ExprParser::new("", 1, &n).parse().is_err());
    }

    #[test]
    fn step_line() {
        let n = names(&["G1", "T"]);
        let s = parse_step("G2 := conj(T^3, G1) => u13 Gamma4 B4^-1 [rotation]", 7, &n).unwrap();
        assert_eq!(s.name, "G2");
        assert_eq!(s.claimed.to_string(), "u13 Gamma4 B4^-1");
        assert_eq!(s.justification, Justification::RotationConjugation);
        let s = parse_step("X := G1^-1 => 1 [free] @inverse @printed(A2 Gamma2^-1) @reconstruction", 1, &n).unwrap();
        assert_eq!(s.flags.len(), 3);
        assert_eq!(s.flags[1], Flag::Printed("A2 Gamma2^-1".parse().unwrap()));
        assert!(parse_step("X := G1 => A2 [magic]", 1, &n).is_err());
        assert!(parse_step("X := G1 => A2", 1, &n).is_err());
        assert!(parse_step("X := G1 => A2 [free] @bogus", 1, &n).is_err());
    }

    #[test]
    fn bundled_scripts_instantiate() {
        let s = Script::bundled("thm_main").unwrap();
        assert_eq!(s.min_genus, 14);
        let p = s.instantiate(Genus::new(14).unwrap()).unwrap();
        assert_eq!(p.targets.len(), 4);
        assert!(p.steps.iter().any(|s| s.name == "Gamma10Gamma11inv"));
        assert!(!p.steps.iter().any(|s| s.name == "Gamma11Gamma12inv"));
        let s2 = Script::bundled("thm_main2").unwrap();
        assert!(s2.admits(Genus::new(13).unwrap()));
        assert!(!s2.admits(Genus::new(14).unwrap()));
    }

    #[test]
    fn duplicate_and_unknown_names() {
        let text = "script x\nmin_genus 3\ngen G := A1\nG := G => A1 [free]\n";
        let e = Script::parse(text).unwrap().instantiate(Genus::new(5).unwrap()).unwrap_err();
        assert_eq!(e.line, 4);
        let text = "script x\nmin_genus 3\nH := K => A1 [free]\n";
        assert!(Script::parse(text).unwrap().instantiate(Genus::new(5).unwrap()).is_err());
        assert!(Script::parse("min_genus 3\n").is_err());
    }
}
