//! Words over the generator alphabet: Dehn twists about named curves,
//! crosscap transpositions `u_i` and the rotation `T`.
//!
//! A [`Word`] is always freely reduced: adjacent letters with the same
//! target are merged by adding exponents and dropped when the sum is zero.
//! No other relation is applied here; in particular `T^g` stays symbolic.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::surface::{CurveId, Family};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct WordParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    Twist(CurveId),
    Transposition(u32),
    Rotation,
}

impl fmt::Display for LetterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LetterKind::Twist(c) => write!(f, "{c}"),
            LetterKind::Transposition(i) => write!(f, "u{i}"),
            LetterKind::Rotation => f.write_str("T"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: LetterKind,
    pub exponent: i32,
}

impl Letter {
    pub fn new(kind: LetterKind, exponent: i32) -> Self {
        assert!(exponent != 0, "letter exponent must be nonzero");
        Letter { kind, exponent }
    }

    pub fn twist(c: CurveId, exponent: i32) -> Self {
        Letter::new(LetterKind::Twist(c), exponent)
    }

    pub fn transposition(i: u32, exponent: i32) -> Self {
        Letter::new(LetterKind::Transposition(i), exponent)
    }

    pub fn rotation(exponent: i32) -> Self {
        Letter::new(LetterKind::Rotation, exponent)
    }

    pub fn inverse(&self) -> Letter {
        Letter { kind: self.kind.clone(), exponent: -self.exponent }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}^{}", self.kind, self.exponent)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Builds a word, freely reducing the input sequence.
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut stack, l);
        }
        Word { letters: stack }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, rhs: &Word) -> Word {
        let mut stack = self.letters.clone();
        for l in &rhs.letters {
            push_reduced(&mut stack, l.clone());
        }
        Word { letters: stack }
    }

    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.multiply(&base))
    }

    /// `w x w^-1`, freely reduced.
    pub fn conjugate(w: &Word, x: &Word) -> Word {
        w.multiply(x).multiply(&w.invert())
    }

    /// The sandwich `(uv) u (uv)^-1`.
    pub fn commutator_form(u: &Word, v: &Word) -> Word {
        Word::conjugate(&u.multiply(v), u)
    }

    /// Splits `self = p x p^-1` with `p` as long as possible and `x` nonempty.
    pub fn split_conjugate(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * (k + 1) < n && self.letters[n - 1 - k] == self.letters[k].inverse() {
            k += 1;
        }
        (Word { letters: self.letters[..k].to_vec() }, Word { letters: self.letters[k..n - k].to_vec() })
    }

    /// Applies `f` to every letter and reduces the result.
    pub fn map_letters<E>(&self, mut f: impl FnMut(&Letter) -> Result<Letter, E>) -> Result<Word, E> {
        let mut out = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            out.push(f(l)?);
        }
        Ok(Word::new(out))
    }

    pub fn is_rotation_power(&self) -> bool {
        self.letters.iter().all(|l| l.kind == LetterKind::Rotation)
    }
}

fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if l.exponent == 0 {
        return;
    }
    if let Some(top) = stack.last_mut() {
        if top.kind == l.kind {
            top.exponent += l.exponent;
            if top.exponent == 0 {
                stack.pop();
            }
            return;
        }
    }
    stack.push(l);
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

fn parse_word(s: &str) -> Result<Word, WordParseError> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    let err = |column: usize, message: &str| WordParseError { column: column + 1, message: message.to_string() };
    let digits = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            None
        } else {
            s[start..*pos].parse().ok()
        }
    };
    let trimmed = s.trim();
    if trimmed == "1" {
        return Ok(Word::identity());
    }
    if trimmed.is_empty() {
        return Err(err(0, "empty word (write `1` for the identity)"));
    }
    loop {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'*') {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let start = pos;
        let rest = &s[pos..];
        let kind = if rest.starts_with('T') {
            pos += 1;
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                return Err(err(start, "rotation `T` takes no index"));
            }
            LetterKind::Rotation
        } else if rest.starts_with('u') {
            pos += 1;
            let i = digits(&mut pos).ok_or_else(|| err(pos, "expected transposition index after `u`"))?;
            let i = u32::try_from(i).ok().filter(|&i| i >= 1).ok_or_else(|| err(start, "transposition index must be at least 1"))?;
            LetterKind::Transposition(i)
        } else {
            let (family, name_len) = Family::ALL
                .iter()
                .find(|f| rest.starts_with(f.name()))
                .map(|f| (*f, f.name().len()))
                .ok_or_else(|| err(start, "unknown generator"))?;
            pos += name_len;
            let i = digits(&mut pos).ok_or_else(|| err(pos, "expected curve index"))?;
            let i = u32::try_from(i).ok().filter(|&i| i >= 1).ok_or_else(|| err(start, "curve index must be at least 1"))?;
            LetterKind::Twist(CurveId::new(family, i))
        };
        let mut exponent: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let negative = pos < bytes.len() && bytes[pos] == b'-';
            if negative {
                pos += 1;
            }
            let e = digits(&mut pos).ok_or_else(|| err(pos, "expected exponent after `^`"))?;
            exponent = if negative { -(e as i64) } else { e as i64 };
        }
        let exponent = i32::try_from(exponent).map_err(|_| err(start, "exponent out of range"))?;
        if exponent == 0 {
            return Err(err(start, "exponent must be nonzero"));
        }
        letters.push(Letter::new(kind, exponent));
    }
    Ok(Word::new(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(w("B1 A2^-1").multiply(&w("A2 C2^-1")), w("B1 C2^-1"));
        assert_eq!(w("Gamma2 Gamma5^-1").multiply(&w("Gamma5 Gamma8^-1")), w("Gamma2 Gamma8^-1"));
        let x = w("u10 A2 C2^-1 T^3");
        assert!(x.multiply(&x.invert()).is_empty());
    }

    #[test]
    fn merging_same_target() {
        assert_eq!(w("A2 A2").to_string(), "A2^2");
        assert_eq!(w("T^3 T^-3"), Word::identity());
        assert_eq!(w("T^5 T^-2").to_string(), "T^3");
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("u10 A2 C2^-1").invert(), w("C2 A2^-1 u10^-1"));
        assert_eq!(Word::identity().invert(), Word::identity());
    }

    #[test]
    fn conjugation_forms() {
        let g1 = w("u10 A2 C2^-1");
        let t3 = w("T^3");
        assert_eq!(Word::conjugate(&t3, &g1).to_string(), "T^3 u10 A2 C2^-1 T^-3");
        assert_eq!(Word::conjugate(&Word::identity(), &g1), g1);
        let (u, v) = (w("A2 Gamma6^-1"), w("u10 A2 C2^-1"));
        let expected = u.multiply(&v).multiply(&u).multiply(&u.multiply(&v).invert());
        assert_eq!(Word::commutator_form(&u, &v), expected);
    }

    #[test]
    fn split_conjugate_peels_outer_layer() {
        let (p, x) = w("u13 A2 Gamma4^-1 u13^-1").split_conjugate();
        assert_eq!(p, w("u13"));
        assert_eq!(x, w("A2 Gamma4^-1"));
        let (p, x) = w("A2 C2^-1").split_conjugate();
        assert!(p.is_empty());
        assert_eq!(x, w("A2 C2^-1"));
    }

    #[test]
    fn parse_print_syntax() {
        assert_eq!(w("A2C2^-1").to_string(), "A2 C2^-1");
        assert_eq!(w("Alpha3 A3").letters().len(), 2);
        assert_eq!(w("1"), Word::identity());
        assert_eq!(Word::identity().to_string(), "1");
        let e = "A2 Q3".parse::<Word>().unwrap_err();
        assert_eq!(e.column, 4);
        assert!("T3".parse::<Word>().is_err());
        assert!("A0".parse::<Word>().is_err());
        assert!("A2^0".parse::<Word>().is_err());
        assert!("u".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert_eq!(w("T^-3 * u13"), Word::new([Letter::rotation(-3), Letter::transposition(13, 1)]));
    }

    #[test]
    fn pow() {
        assert_eq!(w("A2 B1").pow(2).to_string(), "A2 B1 A2 B1");
        assert_eq!(w("T").pow(-4), w("T^-4"));
        assert_eq!(w("A2").pow(0), Word::identity());
    }
}
