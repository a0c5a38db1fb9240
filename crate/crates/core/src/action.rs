//! Partial action of words on named curves, licensed by the fact database,
//! and the letterwise conjugation rewriter.
//!
//! Rules for a single letter acting on a curve `x`, in order:
//! 1. a twist about `a` fixes `x` when `i(a, x) = 0` is declared (and always
//!    fixes its own curve); a transposition `u_j` fixes `x` when
//!    `i(Alpha_j, x) = 0` is declared and `x` avoids crosscaps `j, j+1`;
//! 2. an explicit action fact for the letter on `x`;
//! 3. rotation letters follow the single-step rotation facts.
//!
//! Anything else is [`ActionResult::Unknown`]. On words, an unknown twist
//! step may still be resolved by a braid move `XY(x) = y` (from `i(x,y) = 1`)
//! across intermediate letters that fix both `x` and `y`.

use std::fmt;

use serde::Serialize;

use crate::surface::{Consumed, CurveId, SurfaceModel};
use crate::surface::Sign;
use crate::word::{Letter, LetterKind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ActionResult {
    Known { image: CurveId, sign: Sign },
    Unknown { missing: String },
}

impl ActionResult {
    fn fixed(x: &CurveId) -> Self {
        ActionResult::Known { image: x.clone(), sign: Sign::Plus }
    }

    pub fn known(&self) -> Option<(&CurveId, Sign)> {
        match self {
            ActionResult::Known { image, sign } => Some((image, *sign)),
            ActionResult::Unknown { .. } => None,
        }
    }
}

impl fmt::Display for ActionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionResult::Known { image, sign } => write!(f, "{image} ({sign})"),
            ActionResult::Unknown { missing } => write!(f, "unknown: missing {missing}"),
        }
    }
}

/// One twist letter carried through a conjugation: `w(from) = to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transport {
    pub from: CurveId,
    pub to: CurveId,
    pub sign: Sign,
}

/// Result of rewriting `w x w^-1` letter by letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub word: Word,
    pub transports: Vec<Transport>,
}

pub struct ActionEngine<'a> {
    model: &'a SurfaceModel,
}

impl<'a> ActionEngine<'a> {
    pub fn new(model: &'a SurfaceModel) -> Self {
        ActionEngine { model }
    }

    pub fn model(&self) -> &SurfaceModel {
        self.model
    }

    fn genus(&self) -> u32 {
        self.model.genus().get()
    }

    /// `u_j` fixes `x` (and commutes with its twist) when `x` lies outside
    /// the Klein bottle bounded by `Alpha_j`.
    fn outside_support(&self, j: u32, x: &CurveId, consumed: &mut Consumed) -> bool {
        if j < 1 || j >= self.genus() {
            return false;
        }
        let Ok(rec) = self.model.table.resolve_curve(x) else { return false };
        if rec.traversal.contains(&j) || rec.traversal.contains(&(j + 1)) {
            return false;
        }
        let Ok(alpha) = self.model.table.canonical(&CurveId::new(crate::surface::Family::Alpha, j)) else {
            return false;
        };
        match self.model.facts.intersection(&alpha, x) {
            Some((0, id)) => {
                consumed.insert(id);
                true
            }
            _ => false,
        }
    }

    pub fn act_letter(&self, l: &Letter, x: &CurveId, consumed: &mut Consumed) -> ActionResult {
        let table = &self.model.table;
        let facts = &self.model.facts;
        let x = match table.canonical(x) {
            Ok(x) => x,
            Err(e) => return ActionResult::Unknown { missing: e.to_string() },
        };
        let explicit = |consumed: &mut Consumed| {
            facts.action(l, &x).map(|(f, id)| {
                consumed.insert(id);
                ActionResult::Known { image: f.image.clone(), sign: f.sign }
            })
        };
        match &l.kind {
            LetterKind::Twist(a) => {
                let a = match table.canonical(a) {
                    Ok(a) => a,
                    Err(e) => return ActionResult::Unknown { missing: e.to_string() },
                };
                if a == x {
                    return ActionResult::fixed(&x);
                }
                if let Some((0, id)) = facts.intersection(&a, &x) {
                    consumed.insert(id);
                    return ActionResult::fixed(&x);
                }
                explicit(consumed).unwrap_or_else(|| ActionResult::Unknown {
                    missing: format!("i({a}, {x}) = 0 or an action fact for {l} on {x}"),
                })
            }
            LetterKind::Transposition(j) => {
                if self.outside_support(*j, &x, consumed) {
                    return ActionResult::fixed(&x);
                }
                explicit(consumed).unwrap_or_else(|| ActionResult::Unknown {
                    missing: format!("i(Alpha{j}, {x}) = 0 with {x} avoiding crosscaps {j}, {}, or an action fact for {l} on {x}", j + 1),
                })
            }
            LetterKind::Rotation => {
                if let Some(r) = explicit(consumed) {
                    return r;
                }
                match facts.rotate_curve(table, &x, i64::from(l.exponent), consumed) {
                    Ok((image, sign)) => ActionResult::Known { image, sign },
                    Err(e) => ActionResult::Unknown { missing: e.to_string() },
                }
            }
        }
    }

    /// Right-to-left fold of [`Self::act_letter`], with braid moves.
    pub fn act_word(&self, w: &Word, x: &CurveId, consumed: &mut Consumed) -> ActionResult {
        let mut cur = match self.model.table.canonical(x) {
            Ok(x) => x,
            Err(e) => return ActionResult::Unknown { missing: e.to_string() },
        };
        let letters = w.letters();
        let mut sign = Sign::Plus;
        let mut i = letters.len();
        while i > 0 {
            let mut local = Consumed::new();
            match self.act_letter(&letters[i - 1], &cur, &mut local) {
                ActionResult::Known { image, sign: s } => {
                    consumed.extend(local);
                    cur = image;
                    sign = sign * s;
                    i -= 1;
                }
                ActionResult::Unknown { missing } => match self.braid_move(letters, i - 1, &cur, consumed) {
                    Some((image, next)) => {
                        cur = image;
                        i = next;
                    }
                    None => return ActionResult::Unknown { missing },
                },
            }
        }
        ActionResult::Known { image: cur, sign }
    }

    /// Tries `X^e M.. Y^e (x) = y` where `letters[pos] = Y^e`, `e = +-1`.
    /// Returns the image and the index of the `X` letter.
    fn braid_move(&self, letters: &[Letter], pos: usize, x: &CurveId, consumed: &mut Consumed) -> Option<(CurveId, usize)> {
        let first = &letters[pos];
        let LetterKind::Twist(y) = &first.kind else { return None };
        let y = self.model.table.canonical(y).ok()?;
        let e = first.exponent;
        if y == *x || e.abs() != 1 {
            return None;
        }
        // XY(x) = y comes from i(x,y) = 1; X^-1 Y^-1 (x) = y inverts YX(y) = x
        let braid = if e == 1 { self.model.facts.braid(x, &y)? } else { self.model.facts.braid(&y, x)? };
        let mut local = Consumed::new();
        local.insert(braid.source);
        for k in (0..pos).rev() {
            let m = &letters[k];
            if m.exponent == e && matches!(&m.kind, LetterKind::Twist(c) if self.model.table.canonical(c).ok().as_ref() == Some(x)) {
                consumed.extend(local);
                return Some((y, k));
            }
            let fixes = |c: &CurveId, local: &mut Consumed| {
                matches!(self.act_letter(m, c, local), ActionResult::Known { ref image, sign: Sign::Plus } if image == c)
            };
            if !(fixes(x, &mut local) && fixes(&y, &mut local)) {
                return None;
            }
        }
        None
    }

    /// Rewrites `w x w^-1` into named-generator form.
    pub fn rewrite_conjugation(&self, w: &Word, x: &Word, consumed: &mut Consumed) -> Result<Rewrite, ActionResult> {
        let mut out = Vec::with_capacity(x.len());
        let mut transports = Vec::new();
        for l in x.letters() {
            match &l.kind {
                LetterKind::Twist(a) => match self.act_word(w, a, consumed) {
                    ActionResult::Known { image, sign } => {
                        out.push(Letter::twist(image.clone(), l.exponent * sign.value()));
                        let from = self.model.table.canonical(a).unwrap_or_else(|_| a.clone());
                        transports.push(Transport { from, to: image, sign });
                    }
                    ActionResult::Unknown { missing } => {
                        return Err(ActionResult::Unknown { missing: format!("image of {a} under {w}: {missing}") })
                    }
                },
                LetterKind::Transposition(j) => {
                    let j2 = self.transport_transposition(w, *j, consumed)?;
                    out.push(Letter::transposition(j2, l.exponent));
                }
                LetterKind::Rotation => {
                    if !w.is_rotation_power() {
                        return Err(ActionResult::Unknown { missing: format!("conjugate of T by {w}") });
                    }
                    out.push(l.clone());
                }
            }
        }
        Ok(Rewrite { word: Word::new(out), transports })
    }

    /// Carries the crosscap pair of `u_j` through `w` (right to left).
    fn transport_transposition(&self, w: &Word, j: u32, consumed: &mut Consumed) -> Result<u32, ActionResult> {
        let g = self.model.genus();
        let n = g.get();
        let unknown = |missing: String| ActionResult::Unknown { missing };
        if j < 1 || j >= n {
            return Err(unknown(format!("transposition u{j} at genus {n}")));
        }
        let standard = |p: (u32, u32)| -> Option<u32> {
            let (lo, hi) = if p.0 < p.1 { p } else { (p.1, p.0) };
            (hi == lo + 1).then_some(lo)
        };
        let mut pair = (j, j + 1);
        let mut local = Consumed::new();
        for l in w.letters().iter().rev() {
            match &l.kind {
                LetterKind::Rotation => {
                    let k = i64::from(l.exponent);
                    pair = (g.crosscap(i64::from(pair.0) + k), g.crosscap(i64::from(pair.1) + k));
                }
                LetterKind::Transposition(m) => {
                    let support = [*m, m + 1];
                    let touches = support.contains(&pair.0) || support.contains(&pair.1);
                    let same = standard(pair) == Some(*m);
                    if touches && !same {
                        return Err(unknown(format!(
                            "conjugate of a transposition on crosscaps {{{}, {}}} by {l}",
                            pair.0, pair.1
                        )));
                    }
                }
                LetterKind::Twist(a) => {
                    let Some(p) = standard(pair) else {
                        return Err(unknown(format!("transposition on crosscaps {{{}, {}}} crossing {l}", pair.0, pair.1)));
                    };
                    if !self.outside_support(p, a, &mut local) {
                        return Err(unknown(format!("i(Alpha{p}, {a}) = 0 with {a} avoiding crosscaps {p}, {}", p + 1)));
                    }
                }
            }
        }
        match standard(pair) {
            Some(p) => {
                consumed.extend(local);
                Ok(p)
            }
            None => Err(unknown(format!("standard name for the transposition on crosscaps {{{}, {}}}", pair.0, pair.1))),
        }
    }
}
