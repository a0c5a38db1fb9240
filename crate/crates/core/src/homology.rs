//! Mod-2 homology representation `H_1(N_g; Z/2) = (Z/2)^g`.
//!
//! The basis is the crosscap core classes `e_1..e_g` with the diagonal pairing
//! `e_i . e_j = delta_ij`. A Dehn twist acts as the transvection
//! `x -> x + <x, a> a`, a crosscap transposition `u_i` swaps `e_i` and
//! `e_{i+1}`, and the rotation `T` sends `e_j` to `e_{j+1}` (indices mod g).
//!
//! This module only needs curve classes; it never consults the fact database,
//! which keeps it usable as an independent refutation oracle.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::surface::{CurveId, Genus};
use crate::word::{LetterKind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no homology class known for curve {0}")]
    UnknownClass(CurveId),
    #[error("transposition u{position} is not defined at genus {genus}")]
    InvalidTransposition { position: u32, genus: u32 },
    #[error("malformed matrix dump: {0}")]
    Dump(String),
}

const BITS: usize = 64;

fn blocks(len: usize) -> usize {
    len.div_ceil(BITS)
}

/// A vector over Z/2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    bits: Vec<u64>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector { len, bits: vec![0; blocks(len)] }
    }

    /// The basis vector `e_index`, 1-based.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = F2Vector::zero(len);
        v.set(index, true);
        v
    }

    /// Indicator vector of a set of 1-based coordinates.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Self {
        let mut v = F2Vector::zero(len);
        for i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// 1-based read.
    pub fn get(&self, index: usize) -> bool {
        assert!((1..=self.len).contains(&index), "coordinate {index} out of range 1..={}", self.len);
        let i = index - 1;
        (self.bits[i / BITS] >> (i % BITS)) & 1 == 1
    }

    /// 1-based write.
    pub fn set(&mut self, index: usize, value: bool) {
        assert!((1..=self.len).contains(&index), "coordinate {index} out of range 1..={}", self.len);
        let i = index - 1;
        if value {
            self.bits[i / BITS] |= 1 << (i % BITS);
        } else {
            self.bits[i / BITS] &= !(1 << (i % BITS));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (1..=self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    fn and_parity(&self, other: &F2Vector) -> bool {
        self.bits.iter().zip(&other.bits).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

/// The mod-2 intersection pairing `sum x_i y_i`.
pub fn pairing(x: &F2Vector, y: &F2Vector) -> Result<bool, HomologyError> {
    if x.len != y.len {
        return Err(HomologyError::LengthMismatch(x.len, y.len));
    }
    Ok(x.and_parity(y))
}

/// Square bit matrix acting on column vectors; row `i` holds the
/// coefficients of the `i`-th output coordinate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: (1..=n).map(|i| F2Vector::basis(n, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row - 1].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.rows[row - 1].set(col, value);
    }

    /// `x -> x + <x, a> a`.
    pub fn transvection(class: &F2Vector) -> Self {
        let n = class.len();
        let mut m = F2Matrix::identity(n);
        for i in class.support() {
            m.rows[i - 1].add_assign(class);
        }
        m
    }

    /// Swap of coordinates `i` and `i + 1` (1-based).
    pub fn swap(n: usize, i: usize) -> Self {
        let mut m = F2Matrix::identity(n);
        m.rows.swap(i - 1, i);
        m
    }

    /// Cyclic shift `e_j -> e_{j+k}`, indices mod n.
    pub fn shift(n: usize, k: i64) -> Self {
        let mut m = F2Matrix { rows: vec![F2Vector::zero(n); n] };
        for j in 1..=n {
            let i = (j as i64 - 1 + k).rem_euclid(n as i64) as usize + 1;
            m.set(i, j, true);
        }
        m
    }

    pub fn apply(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(self.dim(), v.len());
        let mut out = F2Vector::zero(v.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.and_parity(v) {
                out.set(i + 1, true);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> F2Vector {
        F2Vector::from_support(self.dim(), (1..=self.dim()).filter(|&i| self.get(i, j)))
    }

    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.dim(), rhs.dim());
        let n = self.dim();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = F2Vector::zero(n);
                for k in row.support() {
                    acc.add_assign(&rhs.rows[k - 1]);
                }
                acc
            })
            .collect();
        F2Matrix { rows }
    }

    pub fn is_identity(&self) -> bool {
        *self == F2Matrix::identity(self.dim())
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<F2Matrix> {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut b = F2Matrix::identity(n).rows;
        for col in 1..=n {
            let pivot = (col - 1..n).find(|&r| a[r].get(col))?;
            a.swap(col - 1, pivot);
            b.swap(col - 1, pivot);
            for r in 0..n {
                if r != col - 1 && a[r].get(col) {
                    let (pa, pb) = (a[col - 1].clone(), b[col - 1].clone());
                    a[r].add_assign(&pa);
                    b[r].add_assign(&pb);
                }
            }
        }
        Some(F2Matrix { rows: b })
    }

    /// Rows as bit strings, one per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            s.push_str(&row.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<F2Matrix, HomologyError> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let n = lines.len();
        let mut rows = Vec::with_capacity(n);
        for (r, line) in lines.iter().enumerate() {
            if line.len() != n {
                return Err(HomologyError::Dump(format!("row {} has {} columns, expected {n}", r + 1, line.len())));
            }
            let mut v = F2Vector::zero(n);
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => v.set(c + 1, true),
                    other => return Err(HomologyError::Dump(format!("row {}: unexpected `{other}`", r + 1))),
                }
            }
            rows.push(v);
        }
        Ok(F2Matrix { rows })
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.dim(), self.dim())?;
        f.write_str(&self.dump())
    }
}

/// Source of mod-2 classes for twist curves.
pub trait ClassLookup {
    fn class_of(&self, id: &CurveId) -> Option<F2Vector>;
}

/// Matrix of a single letter (with its exponent) at genus `g`.
pub fn generator_matrix(
    kind: &LetterKind,
    exponent: i32,
    genus: Genus,
    classes: &dyn ClassLookup,
) -> Result<F2Matrix, HomologyError> {
    let n = genus.get() as usize;
    match kind {
        LetterKind::Rotation => Ok(F2Matrix::shift(n, i64::from(exponent))),
        LetterKind::Transposition(p) => {
            if *p < 1 || *p as usize >= n {
                return Err(HomologyError::InvalidTransposition { position: *p, genus: genus.get() });
            }
            Ok(if exponent % 2 == 0 { F2Matrix::identity(n) } else { F2Matrix::swap(n, *p as usize) })
        }
        LetterKind::Twist(c) => {
            let class = classes.class_of(c).ok_or_else(|| HomologyError::UnknownClass(c.clone()))?;
            if class.len() != n {
                return Err(HomologyError::LengthMismatch(class.len(), n));
            }
            // transvections are involutions mod 2
            Ok(if exponent % 2 == 0 { F2Matrix::identity(n) } else { F2Matrix::transvection(&class) })
        }
    }
}

/// Image of a word: the product of its letter matrices, left to right.
pub fn word_matrix(w: &Word, genus: Genus, classes: &dyn ClassLookup) -> Result<F2Matrix, HomologyError> {
    let mut m = F2Matrix::identity(genus.get() as usize);
    for l in w.letters() {
        m = m.mul(&generator_matrix(&l.kind, l.exponent, genus, classes)?);
    }
    Ok(m)
}

/// Verdict of the necessary-condition test for a claimed equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum OracleVerdict {
    ConsistentMod2,
    /// The matrices differ on the basis vector `e_witness`.
    RefutedMod2 { witness: usize },
}

impl OracleVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, OracleVerdict::RefutedMod2 { .. })
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::ConsistentMod2 => f.write_str("ConsistentMod2"),
            OracleVerdict::RefutedMod2 { witness } => write!(f, "RefutedMod2 (witness e_{witness})"),
        }
    }
}

/// Compares two matrices column by column.
pub fn compare(m1: &F2Matrix, m2: &F2Matrix) -> OracleVerdict {
    match (1..=m1.dim()).find(|&j| m1.column(j) != m2.column(j)) {
        Some(j) => OracleVerdict::RefutedMod2 { witness: j },
        None => OracleVerdict::ConsistentMod2,
    }
}

/// Refutes `w1 = w2` when their mod-2 images differ. Consistency is not a
/// proof of equality.
pub fn oracle_check(
    w1: &Word,
    w2: &Word,
    genus: Genus,
    classes: &dyn ClassLookup,
) -> Result<OracleVerdict, HomologyError> {
    Ok(compare(&word_matrix(w1, genus, classes)?, &word_matrix(w2, genus, classes)?))
}

/// True iff the images of the two words fail to commute.
pub fn noncommuting(
    w1: &Word,
    w2: &Word,
    genus: Genus,
    classes: &dyn ClassLookup,
) -> Result<bool, HomologyError> {
    let a = word_matrix(w1, genus, classes)?;
    let b = word_matrix(w2, genus, classes)?;
    Ok(a.mul(&b) != b.mul(&a))
}

/// Checks `<Mx, My> = <x, y>` on all basis pairs.
pub fn is_isometry(m: &F2Matrix) -> bool {
    let n = m.dim();
    let cols: Vec<F2Vector> = (1..=n).map(|j| m.column(j)).collect();
    (0..n).all(|i| (0..n).all(|j| cols[i].and_parity(&cols[j]) == (i == j)))
}
