//! Genus-parametric text templates shared by the table and script formats.
//!
//! A template line may start with a range header `for VAR in LO..HI :` and may
//! contain `{expr}` holes. Expressions are integer arithmetic over `g`, the
//! loop variable and literals, with `+ - * / %` (floor division) and parentheses.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// Variable bindings for template evaluation.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    vars: HashMap<String, i64>,
}

impl Bindings {
    pub fn genus(g: u32) -> Self {
        let mut b = Bindings::default();
        b.vars.insert("g".to_string(), i64::from(g));
        b
    }

    pub fn with(&self, name: &str, value: i64) -> Self {
        let mut b = self.clone();
        b.vars.insert(name.to_string(), value);
        b
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.vars.get(name).copied()
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    bindings: &'a Bindings,
}

impl<'a> ExprParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> TemplateError {
        TemplateError::Syntax { column: self.pos + 1, message: message.into() }
    }

    fn expr(&mut self) -> Result<i64, TemplateError> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<i64, TemplateError> {
        let mut acc = self.factor()?;
        while let Some(op) = self.peek() {
            match op {
                b'*' => {
                    self.pos += 1;
                    acc *= self.factor()?;
                }
                b'/' | b'%' => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    if rhs == 0 {
                        return Err(TemplateError::DivisionByZero);
                    }
                    acc = if op == b'/' { acc.div_euclid(rhs) } else { acc.rem_euclid(rhs) };
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<i64, TemplateError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                text.parse().map_err(|_| self.err("integer literal out of range"))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                self.bindings.get(name).ok_or_else(|| TemplateError::Unbound(name.to_string()))
            }
            Some(_) => Err(self.err("unexpected character in expression")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Evaluates an integer expression.
pub fn eval(expr: &str, bindings: &Bindings) -> Result<i64, TemplateError> {
    let mut p = ExprParser { src: expr.as_bytes(), pos: 0, bindings };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input in expression"));
    }
    Ok(v)
}

/// Replaces every `{expr}` hole with its decimal value.
pub fn fill(text: &str, bindings: &Bindings) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    let mut offset = 0;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').ok_or(TemplateError::Syntax {
            column: offset + open + 1,
            message: "unclosed `{`".to_string(),
        })? + open;
        let value = eval(&rest[open + 1..close], bindings).map_err(|e| match e {
            TemplateError::Syntax { column, message } => {
                TemplateError::Syntax { column: column + offset + open + 1, message }
            }
            other => other,
        })?;
        out.push_str(&value.to_string());
        offset += close + 1;
        rest = &rest[close + 1..];
    }
    if let Some(pos) = rest.find('}') {
        return Err(TemplateError::Syntax { column: offset + pos + 1, message: "stray `}`".to_string() });
    }
    out.push_str(rest);
    Ok(out)
}

/// A `for VAR in LO..HI :` range header, bounds inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeHeader {
    pub var: String,
    pub lo: String,
    pub hi: String,
}

/// Splits an optional range header off a template line. Returns the header
/// (if any) and the body that follows the `:`.
pub fn split_range(line: &str) -> Result<(Option<RangeHeader>, &str), TemplateError> {
    let trimmed = line.trim_start();
    let Some(after_for) = trimmed.strip_prefix("for ") else {
        return Ok((None, line));
    };
    let syntax = |message: &str| TemplateError::Syntax { column: 1, message: message.to_string() };
    let (var, rest) = after_for
        .trim_start()
        .split_once(char::is_whitespace)
        .ok_or_else(|| syntax("expected `for VAR in LO..HI :`"))?;
    let rest = rest.trim_start().strip_prefix("in ").ok_or_else(|| syntax("expected `in` after loop variable"))?;
    let (range, body) = rest.split_once(':').ok_or_else(|| syntax("expected `:` after range"))?;
    let (lo, hi) = range.split_once("..").ok_or_else(|| syntax("expected `LO..HI`"))?;
    if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphabetic()) || var == "g" {
        return Err(syntax("loop variable must be alphabetic and not `g`"));
    }
    Ok((
        Some(RangeHeader { var: var.to_string(), lo: lo.trim().to_string(), hi: hi.trim().to_string() }),
        body,
    ))
}

/// Expands a template line into one bindings set per loop iteration.
pub fn iterations(header: Option<&RangeHeader>, base: &Bindings) -> Result<Vec<Bindings>, TemplateError> {
    match header {
        None => Ok(vec![base.clone()]),
        Some(h) => {
            let lo = eval(&h.lo, base)?;
            let hi = eval(&h.hi, base)?;
            Ok((lo..=hi).map(|v| base.with(&h.var, v)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_floor_division() {
        let b = Bindings::genus(13);
        assert_eq!(eval("g-4", &b), Ok(9));
        assert_eq!(eval("(g-1)/2", &b), Ok(6));
        assert_eq!(eval("(g-2)/2", &b), Ok(5));
        assert_eq!(eval("-7/2", &b), Ok(-4));
        assert_eq!(eval("2*(g+1)%5", &b), Ok(3));
        assert_eq!(eval("i", &b), Err(TemplateError::Unbound("i".into())));
    }

    #[test]
    fn fill_holes() {
        let b = Bindings::genus(14).with("i", 3);
        assert_eq!(fill("Gamma{i}Gamma{i+1}inv := conj(T^{i-4}, X)", &b).unwrap(), "Gamma3Gamma4inv := conj(T^-1, X)");
        assert!(fill("u{g-1", &b).is_err());
        assert!(fill("u}", &b).is_err());
    }

    #[test]
    fn range_header() {
        let (h, body) = split_range("for k in 1..g : Gamma{k} : {k}").unwrap();
        let h = h.unwrap();
        assert_eq!(h.var, "k");
        assert_eq!(body.trim(), "Gamma{k} : {k}");
        let its = iterations(Some(&h), &Bindings::genus(5)).unwrap();
        assert_eq!(its.len(), 5);
        assert_eq!(its[4].get("k"), Some(5));
        assert!(split_range("for g in 1..3 : x").is_err());
        let (none, body) = split_range("A1 : 1 2").unwrap();
        assert!(none.is_none());
        assert_eq!(body, "A1 : 1 2");
    }
}
