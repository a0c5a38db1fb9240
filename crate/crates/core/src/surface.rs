//! The surface `N_g` in the circular crosscap model: named curve families,
//! the per-genus curve table and the fact database that licenses rewriting.
//!
//! Curve geometry is data. A table file (see `docs/FORMATS.md`) declares
//! each curve by the crosscaps it passes through; its mod-2 class is the
//! indicator vector of that set. Intersection numbers and actions are never
//! computed from traversals; they are declared facts, checked only for
//! parity and homological consistency by [`validate_table`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::homology::{ClassLookup, F2Vector};
use crate::template::{self, Bindings, TemplateError};
use crate::word::{Letter, LetterKind, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("genus must be at least 3, got {0}")]
    GenusTooSmall(u32),
    #[error("curve undefined at this genus: {0}")]
    UndefinedCurve(CurveId),
    #[error("rotation action unknown for curve {curve}: no fact {missing}")]
    RotationUnknown { curve: CurveId, missing: String },
    #[error("transposition u{position} is not defined at genus {genus}")]
    InvalidTransposition { position: u32, genus: u32 },
    #[error("braid move requires i({a},{b})=1")]
    BraidPrecondition { a: CurveId, b: CurveId },
}

/// Table file errors carry the 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("table line {line}: {message}")]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

impl TableError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        TableError { line, message: message.into() }
    }
}

/// Number of crosscaps, at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Genus(u32);

impl Genus {
    pub fn new(g: u32) -> Result<Self, SurfaceError> {
        if g < 3 {
            return Err(SurfaceError::GenusTooSmall(g));
        }
        Ok(Genus(g))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces a crosscap index into `1..=g`.
    pub fn crosscap(self, i: i64) -> u32 {
        ((i - 1).rem_euclid(i64::from(self.0)) + 1) as u32
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    Gamma,
    Alpha,
}

impl Family {
    /// Ordered so that longer names are tried before their prefixes.
    pub const ALL: [Family; 5] = [Family::Gamma, Family::Alpha, Family::A, Family::B, Family::C];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::Gamma => "Gamma",
            Family::Alpha => "Alpha",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveId {
    pub family: Family,
    pub index: u32,
}

impl CurveId {
    pub fn new(family: Family, index: u32) -> Self {
        CurveId { family, index }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.name(), self.index)
    }
}

impl Serialize for CurveId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for CurveId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let family = Family::ALL
            .iter()
            .find(|f| s.starts_with(f.name()) && s[f.name().len()..].chars().all(|c| c.is_ascii_digit()))
            .ok_or_else(|| format!("`{s}` is not a curve name"))?;
        let index: u32 = s[family.name().len()..].parse().map_err(|_| format!("`{s}` has no curve index"))?;
        if index == 0 {
            return Err(format!("`{s}`: curve indices start at 1"));
        }
        Ok(CurveId::new(*family, index))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Provenance {
    #[serde(rename = "PAPER")]
    Paper,
    #[serde(rename = "FIGURE-AXIOM")]
    FigureAxiom,
    #[serde(rename = "DERIVED-PATTERN")]
    DerivedPattern,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Paper => "PAPER",
            Provenance::FigureAxiom => "FIGURE-AXIOM",
            Provenance::DerivedPattern => "DERIVED-PATTERN",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PAPER" => Ok(Provenance::Paper),
            "FIGURE-AXIOM" => Ok(Provenance::FigureAxiom),
            "DERIVED-PATTERN" => Ok(Provenance::DerivedPattern),
            other => Err(format!("unknown provenance `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub id: CurveId,
    pub aliases: Vec<CurveId>,
    pub traversal: BTreeSet<u32>,
    pub h_class: F2Vector,
    pub two_sided: bool,
}

/// The curve records of one genus, keyed by display name.
#[derive(Debug, Clone)]
pub struct CurveTable {
    genus: Genus,
    records: BTreeMap<CurveId, CurveRecord>,
    aliases: HashMap<CurveId, CurveId>,
}

impl CurveTable {
    pub fn empty(genus: Genus) -> Self {
        CurveTable { genus, records: BTreeMap::new(), aliases: HashMap::new() }
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    /// Inserts a record whose class is the indicator of its traversal.
    pub fn insert(&mut self, id: CurveId, traversal: BTreeSet<u32>) {
        let n = self.genus.get() as usize;
        let h_class = F2Vector::from_support(n, traversal.iter().map(|&c| c as usize));
        self.records.insert(id.clone(), CurveRecord { id, aliases: Vec::new(), traversal, h_class, two_sided: true });
    }

    /// Makes `name` the display name of the record currently called `target`.
    pub fn alias(&mut self, name: CurveId, target: &CurveId) -> Result<(), SurfaceError> {
        let target = self.canonical(target)?;
        let mut rec = self.records.remove(&target).expect("canonical id is present");
        rec.aliases.push(target.clone());
        rec.id = name.clone();
        for (_, v) in self.aliases.iter_mut().filter(|(_, v)| **v == target) {
            *v = name.clone();
        }
        self.aliases.insert(target, name.clone());
        self.records.insert(name, rec);
        Ok(())
    }

    /// Display name of a curve: Gamma indices reduced mod g, aliases followed.
    pub fn canonical(&self, id: &CurveId) -> Result<CurveId, SurfaceError> {
        let mut id = id.clone();
        if id.family == Family::Gamma {
            id.index = self.genus.crosscap(i64::from(id.index));
        }
        if let Some(target) = self.aliases.get(&id) {
            id = target.clone();
        }
        if self.records.contains_key(&id) {
            Ok(id)
        } else {
            Err(SurfaceError::UndefinedCurve(id))
        }
    }

    pub fn resolve_curve(&self, id: &CurveId) -> Result<&CurveRecord, SurfaceError> {
        let c = self.canonical(id)?;
        Ok(&self.records[&c])
    }

    pub fn records(&self) -> impl Iterator<Item = &CurveRecord> {
        self.records.values()
    }

    /// Canonicalizes every twist letter and checks transposition positions.
    pub fn canonical_word(&self, w: &Word) -> Result<Word, SurfaceError> {
        let g = self.genus.get();
        w.map_letters(|l| match &l.kind {
            LetterKind::Twist(c) => Ok(Letter::twist(self.canonical(c)?, l.exponent)),
            LetterKind::Transposition(p) if *p >= g => Err(SurfaceError::InvalidTransposition { position: *p, genus: g }),
            _ => Ok(l.clone()),
        })
    }

    /// Traversal shifted by `k` crosscaps.
    pub fn shifted(&self, traversal: &BTreeSet<u32>, k: i64) -> BTreeSet<u32> {
        traversal.iter().map(|&c| self.genus.crosscap(i64::from(c) + k)).collect()
    }
}

impl ClassLookup for CurveTable {
    fn class_of(&self, id: &CurveId) -> Option<F2Vector> {
        self.resolve_curve(id).ok().map(|r| r.h_class.clone())
    }
}

/// Where a fact came from in the table file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FactOrigin {
    pub line: usize,
    pub template: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionFact {
    pub x: CurveId,
    pub y: CurveId,
    pub number: u32,
    pub provenance: Provenance,
    pub origin: FactOrigin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionFact {
    #[serde(serialize_with = "ser_display")]
    pub letter: Letter,
    pub curve: CurveId,
    pub image: CurveId,
    pub sign: Sign,
    pub provenance: Provenance,
    pub origin: FactOrigin,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FactId {
    Intersection(usize),
    Action(usize),
}

/// Set of facts a computation relied on.
pub type Consumed = BTreeSet<FactId>;

/// `Twist(a) Twist(b)` maps `a` to `b`, derived from `i(a,b) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidFact {
    pub a: CurveId,
    pub b: CurveId,
    pub source: FactId,
}

#[derive(Debug, Clone, Default)]
pub struct FactDb {
    intersections: Vec<IntersectionFact>,
    actions: Vec<ActionFact>,
    intersection_index: HashMap<(CurveId, CurveId), usize>,
    action_index: HashMap<(Letter, CurveId), usize>,
    rotation_preimage: HashMap<CurveId, usize>,
    braids: HashMap<(CurveId, CurveId), BraidFact>,
    removed: BTreeSet<FactId>,
}

impl FactDb {
    /// Builds the indexes and derives every braid fact licensed by an
    /// intersection number 1. The database is read-only afterwards.
    pub fn new(intersections: Vec<IntersectionFact>, actions: Vec<ActionFact>) -> Self {
        Self::build(intersections, actions, BTreeSet::new())
    }

    fn build(intersections: Vec<IntersectionFact>, actions: Vec<ActionFact>, removed: BTreeSet<FactId>) -> Self {
        let mut db = FactDb { intersections, actions, removed, ..FactDb::default() };
        for (i, f) in db.intersections.iter().enumerate() {
            if db.removed.contains(&FactId::Intersection(i)) {
                continue;
            }
            db.intersection_index.entry((f.x.clone(), f.y.clone())).or_insert(i);
        }
        for (i, f) in db.actions.iter().enumerate() {
            if db.removed.contains(&FactId::Action(i)) {
                continue;
            }
            db.action_index.entry((f.letter.clone(), f.curve.clone())).or_insert(i);
            if f.letter == Letter::rotation(1) {
                db.rotation_preimage.entry(f.image.clone()).or_insert(i);
            }
        }
        let ones: Vec<(CurveId, CurveId)> = db
            .intersection_index
            .iter()
            .filter(|(_, &i)| db.intersections[i].number == 1)
            .map(|(k, _)| k.clone())
            .collect();
        for (a, b) in ones {
            db.derive_braid_fact(&a, &b).expect("intersection number is 1");
        }
        db
    }

    /// Registers `AB(a) = b`; requires the fact `i(a,b) = 1`. Idempotent.
    pub fn derive_braid_fact(&mut self, a: &CurveId, b: &CurveId) -> Result<BraidFact, SurfaceError> {
        match self.intersection(a, b) {
            Some((1, source)) if a != b => {
                let fact = BraidFact { a: a.clone(), b: b.clone(), source };
                self.braids.entry((a.clone(), b.clone())).or_insert_with(|| fact.clone());
                Ok(fact)
            }
            _ => Err(SurfaceError::BraidPrecondition { a: a.clone(), b: b.clone() }),
        }
    }

    pub fn braid(&self, a: &CurveId, b: &CurveId) -> Option<&BraidFact> {
        self.braids.get(&(a.clone(), b.clone()))
    }

    pub fn intersection(&self, x: &CurveId, y: &CurveId) -> Option<(u32, FactId)> {
        self.intersection_index
            .get(&(x.clone(), y.clone()))
            .map(|&i| (self.intersections[i].number, FactId::Intersection(i)))
    }

    pub fn action(&self, letter: &Letter, x: &CurveId) -> Option<(&ActionFact, FactId)> {
        self.action_index.get(&(letter.clone(), x.clone())).map(|&i| (&self.actions[i], FactId::Action(i)))
    }

    pub fn intersection_facts(&self) -> impl Iterator<Item = (FactId, &IntersectionFact)> {
        self.intersections
            .iter()
            .enumerate()
            .map(|(i, f)| (FactId::Intersection(i), f))
            .filter(|(id, _)| !self.removed.contains(id))
    }

    pub fn action_facts(&self) -> impl Iterator<Item = (FactId, &ActionFact)> {
        self.actions
            .iter()
            .enumerate()
            .map(|(i, f)| (FactId::Action(i), f))
            .filter(|(id, _)| !self.removed.contains(id))
    }

    pub fn provenance(&self, id: FactId) -> Provenance {
        match id {
            FactId::Intersection(i) => self.intersections[i].provenance,
            FactId::Action(i) => self.actions[i].provenance,
        }
    }

    pub fn origin(&self, id: FactId) -> &FactOrigin {
        match id {
            FactId::Intersection(i) => &self.intersections[i].origin,
            FactId::Action(i) => &self.actions[i].origin,
        }
    }

    /// Human-readable rendering, e.g. `i(Gamma2, A2) = 1 [PAPER]`.
    pub fn describe(&self, id: FactId) -> String {
        match id {
            FactId::Intersection(i) => {
                let f = &self.intersections[i];
                format!("i({}, {}) = {} [{}]", f.x, f.y, f.number, f.provenance)
            }
            FactId::Action(i) => {
                let f = &self.actions[i];
                format!("{}({}) = {} ({}) [{}]", f.letter, f.curve, f.image, f.sign, f.provenance)
            }
        }
    }

    /// The bare statement of a fact, e.g. `T(A1) = B1`; a sign is shown only when negative.
    pub fn statement(&self, id: FactId) -> String {
        match id {
            FactId::Intersection(i) => {
                let f = &self.intersections[i];
                format!("i({}, {}) = {}", f.x, f.y, f.number)
            }
            FactId::Action(i) => {
                let f = &self.actions[i];
                match f.sign {
                    Sign::Plus => format!("{}({}) = {}", f.letter, f.curve, f.image),
                    Sign::Minus => format!("{}({}) = {} (-1)", f.letter, f.curve, f.image),
                }
            }
        }
    }

    /// Copy of the database with one fact deleted; braid facts re-derived.
    pub fn without(&self, id: FactId) -> FactDb {
        let mut removed = self.removed.clone();
        removed.insert(id);
        Self::build(self.intersections.clone(), self.actions.clone(), removed)
    }

    /// Follows single-step rotation facts `k` times (inverted when `k < 0`).
    pub fn rotate_curve(
        &self,
        table: &CurveTable,
        id: &CurveId,
        k: i64,
        consumed: &mut Consumed,
    ) -> Result<(CurveId, Sign), SurfaceError> {
        let mut cur = table.canonical(id)?;
        let mut sign = Sign::Plus;
        let step = Letter::rotation(1);
        for _ in 0..k.unsigned_abs() {
            let idx = if k > 0 {
                self.action_index.get(&(step.clone(), cur.clone())).copied()
            } else {
                self.rotation_preimage.get(&cur).copied()
            };
            let Some(idx) = idx else {
                let missing = if k > 0 { format!("T({cur}) = ?") } else { format!("T(?) = {cur}") };
                return Err(SurfaceError::RotationUnknown { curve: cur, missing });
            };
            let f = &self.actions[idx];
            consumed.insert(FactId::Action(idx));
            sign = sign * f.sign;
            cur = if k > 0 { f.image.clone() } else { f.curve.clone() };
        }
        Ok((cur, sign))
    }
}

/// A curve table together with its fact database at one genus.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    pub table: CurveTable,
    pub facts: FactDb,
}

impl SurfaceModel {
    pub fn genus(&self) -> Genus {
        self.table.genus()
    }

    /// Same table, different fact database.
    pub fn with_facts(&self, facts: FactDb) -> SurfaceModel {
        SurfaceModel { table: self.table.clone(), facts }
    }

    pub fn bundled(genus: Genus) -> Result<SurfaceModel, TableError> {
        TableSource::bundled().instantiate(genus)
    }
}

/// The bundled table file.
pub const BUNDLED_TABLE: &str = include_str!("../data/default.table");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Curves,
    Intersections,
    Actions,
}

#[derive(Debug, Clone)]
struct SourceLine {
    number: usize,
    section: Section,
    range: Option<template::RangeHeader>,
    body: String,
    raw: String,
}

/// A parsed, genus-parametric table file.
#[derive(Debug, Clone)]
pub struct TableSource {
    pub version: u32,
    pub min_genus: u32,
    lines: Vec<SourceLine>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn template_err(line: usize, e: TemplateError) -> TableError {
    TableError::at(line, e.to_string())
}

impl TableSource {
    pub fn bundled() -> TableSource {
        TableSource::parse(BUNDLED_TABLE).expect("bundled table parses")
    }

    pub fn parse(text: &str) -> Result<TableSource, TableError> {
        let mut version = None;
        let mut min_genus = 3;
        let mut section = None;
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let number = i + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(v) = line.strip_prefix("version ") {
                version = Some(v.trim().parse().map_err(|_| TableError::at(number, "bad version"))?);
                continue;
            }
            if let Some(v) = line.strip_prefix("min_genus ") {
                min_genus = v.trim().parse().map_err(|_| TableError::at(number, "bad min_genus"))?;
                continue;
            }
            match line {
                "[curves]" => section = Some(Section::Curves),
                "[intersections]" => section = Some(Section::Intersections),
                "[actions]" => section = Some(Section::Actions),
                _ => {
                    let section = section.ok_or_else(|| TableError::at(number, "record outside of a section"))?;
                    let (range, body) = template::split_range(line).map_err(|e| template_err(number, e))?;
                    lines.push(SourceLine { number, section, range, body: body.trim().to_string(), raw: line.to_string() });
                }
            }
        }
        let version = version.ok_or_else(|| TableError::at(1, "missing `version` header"))?;
        if version != 1 {
            return Err(TableError::at(1, format!("unsupported table version {version}")));
        }
        Ok(TableSource { version, min_genus, lines })
    }

    /// Template lines of the fact sections, for listing without a genus.
    pub fn fact_templates(&self) -> impl Iterator<Item = (usize, &str)> {
        self.lines.iter().filter(|l| l.section != Section::Curves).map(|l| (l.number, l.raw.as_str()))
    }

    pub fn instantiate(&self, genus: Genus) -> Result<SurfaceModel, TableError> {
        if genus.get() < self.min_genus {
            return Err(TableError::at(1, format!("table requires genus >= {}, got {genus}", self.min_genus)));
        }
        let base = Bindings::genus(genus.get());
        let mut table = CurveTable::empty(genus);
        let mut intersections = Vec::new();
        let mut actions = Vec::new();
        for line in &self.lines {
            let n = line.number;
            let origin = FactOrigin { line: n, template: line.raw.clone() };
            for b in template::iterations(line.range.as_ref(), &base).map_err(|e| template_err(n, e))? {
                let body = template::fill(&line.body, &b).map_err(|e| template_err(n, e))?;
                match line.section {
                    Section::Curves => parse_curve_line(&mut table, &body, n)?,
                    Section::Intersections => {
                        let toks: Vec<&str> = body.split_whitespace().collect();
                        let [x, y, num, prov] = toks[..] else {
                            return Err(TableError::at(n, "expected `CURVE CURVE N PROVENANCE`"));
                        };
                        let x = curve_ref(&table, x, n)?;
                        let y = curve_ref(&table, y, n)?;
                        let number: u32 = num.parse().map_err(|_| TableError::at(n, format!("bad intersection number `{num}`")))?;
                        let provenance: Provenance = prov.parse().map_err(|e: String| TableError::at(n, e))?;
                        intersections.push(IntersectionFact { x: x.clone(), y: y.clone(), number, provenance, origin: origin.clone() });
                        if x != y {
                            intersections.push(IntersectionFact { x: y, y: x, number, provenance, origin: origin.clone() });
                        }
                    }
                    Section::Actions => {
                        let toks: Vec<&str> = body.split_whitespace().collect();
                        let [letter, x, "->", y, sign, prov] = toks[..] else {
                            return Err(TableError::at(n, "expected `LETTER CURVE -> CURVE SIGN PROVENANCE`"));
                        };
                        let w: Word = letter.parse().map_err(|e| TableError::at(n, format!("bad letter `{letter}`: {e}")))?;
                        let [letter] = w.letters() else {
                            return Err(TableError::at(n, "action facts take a single letter"));
                        };
                        let letter = match &letter.kind {
                            LetterKind::Twist(c) => Letter::twist(curve_ref(&table, &c.to_string(), n)?, letter.exponent),
                            _ => letter.clone(),
                        };
                        let sign = match sign {
                            "+1" => Sign::Plus,
                            "-1" => Sign::Minus,
                            other => return Err(TableError::at(n, format!("bad sign `{other}`"))),
                        };
                        let provenance: Provenance = prov.parse().map_err(|e: String| TableError::at(n, e))?;
                        actions.push(ActionFact {
                            letter,
                            curve: curve_ref(&table, x, n)?,
                            image: curve_ref(&table, y, n)?,
                            sign,
                            provenance,
                            origin: origin.clone(),
                        });
                    }
                }
            }
        }
        Ok(SurfaceModel { table, facts: FactDb::new(intersections, actions) })
    }
}

fn curve_ref(table: &CurveTable, token: &str, line: usize) -> Result<CurveId, TableError> {
    let id: CurveId = token.parse().map_err(|e: String| TableError::at(line, e))?;
    table.canonical(&id).map_err(|e| TableError::at(line, e.to_string()))
}

fn parse_curve_line(table: &mut CurveTable, body: &str, line: usize) -> Result<(), TableError> {
    if let Some((name, target)) = body.split_once('=') {
        let name: CurveId = name.trim().parse().map_err(|e: String| TableError::at(line, e))?;
        let target: CurveId = target.trim().parse().map_err(|e: String| TableError::at(line, e))?;
        return table.alias(name, &target).map_err(|e| TableError::at(line, e.to_string()));
    }
    let (name, crosscaps) = body.split_once(':').ok_or_else(|| TableError::at(line, "expected `CURVE : crosscaps` or `CURVE = CURVE`"))?;
    let id: CurveId = name.trim().parse().map_err(|e: String| TableError::at(line, e))?;
    if table.canonical(&id).is_ok() {
        return Err(TableError::at(line, format!("curve {id} defined twice")));
    }
    let mut traversal = BTreeSet::new();
    let crosscaps = crosscaps.trim();
    if crosscaps != "boundary" {
        for tok in crosscaps.split_whitespace() {
            let c: i64 = tok.parse().map_err(|_| TableError::at(line, format!("bad crosscap `{tok}`")))?;
            if !traversal.insert(table.genus().crosscap(c)) {
                return Err(TableError::at(line, format!("curve {id} passes through crosscap {} twice", table.genus().crosscap(c))));
            }
        }
    }
    table.insert(id, traversal);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Record,
    Symmetry,
    Parity,
    Rotation,
    Conflict,
    MissingFact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub fact: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} violation: {}: {}", self.kind, self.fact, self.detail)
    }
}

/// Consistency gate for a loaded table: record invariants, symmetry and
/// parity of intersection facts, homological consistency of rotation facts.
pub fn validate_table(table: &CurveTable, db: &FactDb) -> Vec<Violation> {
    let mut out = Vec::new();
    let g = table.genus();
    for r in table.records() {
        let name = r.id.to_string();
        if !r.two_sided || r.traversal.len() % 2 != 0 {
            out.push(Violation { kind: ViolationKind::Record, fact: name.clone(), detail: "curve must be two-sided (even traversal)".into() });
        }
        let gamma_index = std::iter::once(&r.id).chain(&r.aliases).find(|c| c.family == Family::Gamma).map(|c| c.index);
        if let Some(k) = gamma_index {
            let expected: BTreeSet<u32> = (0..4).map(|d| g.crosscap(i64::from(k) + d)).collect();
            if r.traversal != expected {
                out.push(Violation { kind: ViolationKind::Record, fact: name.clone(), detail: format!("gamma{k} must pass through crosscaps {expected:?}") });
            }
        }
        if r.id.family == Family::Alpha && !r.h_class.is_zero() {
            out.push(Violation { kind: ViolationKind::Record, fact: name, detail: "Alpha curves bound a Klein bottle and have class 0".into() });
        }
    }
    for (id, f) in db.intersection_facts() {
        let desc = db.describe(id);
        match db.intersection(&f.y, &f.x) {
            None => out.push(Violation { kind: ViolationKind::Symmetry, fact: desc.clone(), detail: format!("no fact for i({}, {})", f.y, f.x) }),
            Some((n, _)) if n != f.number => out.push(Violation { kind: ViolationKind::Symmetry, fact: desc.clone(), detail: format!("i({}, {}) = {n}", f.y, f.x) }),
            _ => {}
        }
        if let Some((n, other)) = db.intersection(&f.x, &f.y) {
            if n != f.number && other != id {
                out.push(Violation { kind: ViolationKind::Conflict, fact: desc.clone(), detail: format!("conflicts with {}", db.describe(other)) });
            }
        }
        if let (Ok(a), Ok(b)) = (table.resolve_curve(&f.x), table.resolve_curve(&f.y)) {
            let overlap = a.traversal.intersection(&b.traversal).count();
            if overlap % 2 != (f.number % 2) as usize {
                out.push(Violation {
                    kind: ViolationKind::Parity,
                    fact: desc,
                    detail: format!("mod-2 pairing of classes is {}", overlap % 2),
                });
            }
        }
    }
    for (id, f) in db.action_facts() {
        let (Ok(x), Ok(y)) = (table.resolve_curve(&f.curve), table.resolve_curve(&f.image)) else { continue };
        if f.letter.kind == LetterKind::Rotation {
            let moved = table.shifted(&x.traversal, i64::from(f.letter.exponent));
            if moved != y.traversal {
                out.push(Violation {
                    kind: ViolationKind::Rotation,
                    fact: db.describe(id),
                    detail: format!("rotating {:?} gives {:?}, not {:?}", x.traversal, moved, y.traversal),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(g: u32) -> SurfaceModel {
        SurfaceModel::bundled(Genus::new(g).unwrap()).unwrap()
    }

    fn id(s: &str) -> CurveId {
        s.parse().unwrap()
    }

    #[test]
    fn genus_lower_bound() {
        assert_eq!(Genus::new(2), Err(SurfaceError::GenusTooSmall(2)));
        assert_eq!(Genus::new(3).unwrap().crosscap(0), 3);
        assert_eq!(Genus::new(13).unwrap().crosscap(-2), 11);
    }

    #[test]
    fn resolve_examples() {
        let m = model(14);
        let t = &m.table;
        assert_eq!(t.resolve_curve(&id("Gamma2")).unwrap().traversal, BTreeSet::from([2, 3, 4, 5]));
        assert_eq!(t.resolve_curve(&id("A2")).unwrap(), t.resolve_curve(&id("Gamma1")).unwrap());
        assert_eq!(t.resolve_curve(&id("Gamma16")).unwrap(), t.resolve_curve(&id("Gamma2")).unwrap());
        assert_eq!(t.canonical(&id("Gamma15")).unwrap(), id("A2"));
        assert_eq!(t.resolve_curve(&id("C7")), Err(SurfaceError::UndefinedCurve(id("C7"))));
        assert_eq!(t.resolve_curve(&id("Alpha3")).unwrap().h_class.weight(), 0);
    }

    #[test]
    fn odd_genus_drops_last_c_curve() {
        // g = 2r + 1: c_r disappears
        let m = model(13);
        assert!(m.table.resolve_curve(&id("B6")).is_ok());
        assert!(m.table.resolve_curve(&id("C6")).is_err());
        assert!(model(14).table.resolve_curve(&id("C6")).is_ok());
    }

    #[test]
    fn rotate_examples() {
        let m = model(14);
        let mut used = Consumed::new();
        let rot = |x: &str, k: i64, used: &mut Consumed| m.facts.rotate_curve(&m.table, &id(x), k, used);
        assert_eq!(rot("A2", 3, &mut used), Ok((id("Gamma4"), Sign::Plus)));
        assert_eq!(rot("B1", 3, &mut used), Ok((id("C2"), Sign::Plus)));
        assert_eq!(rot("C2", -3, &mut used), Ok((id("B1"), Sign::Plus)));
        assert_eq!(rot("C5", 0, &mut used), Ok((id("C5"), Sign::Plus)));
        for k in 1..=14 {
            assert_eq!(rot(&format!("Gamma{k}"), 14, &mut used).unwrap().0, m.table.canonical(&id(&format!("Gamma{k}"))).unwrap());
        }
        assert!(matches!(rot("C6", 1, &mut used), Err(SurfaceError::RotationUnknown { .. })));
        assert!(!used.is_empty());
    }

    #[test]
    fn bundled_table_is_consistent_across_genera() {
        for g in 13..=40 {
            let m = model(g);
            assert_eq!(validate_table(&m.table, &m.facts), vec![], "genus {g}");
        }
    }

    #[test]
    fn injected_parity_violation() {
        let m = model(14);
        let origin = FactOrigin { line: 0, template: "test".into() };
        let mut ints: Vec<IntersectionFact> = m.facts.intersection_facts().map(|(_, f)| f.clone()).collect();
        for (x, y) in [("Gamma2", "A2"), ("A2", "Gamma2")] {
            ints.retain(|f| !(f.x == id(x) && f.y == id(y)));
            ints.push(IntersectionFact { x: id(x), y: id(y), number: 0, provenance: Provenance::Paper, origin: origin.clone() });
        }
        let actions = m.facts.action_facts().map(|(_, f)| f.clone()).collect();
        let v = validate_table(&m.table, &FactDb::new(ints, actions));
        // one parity violation per stored orientation of the pair
        assert_eq!(v.iter().filter(|v| v.kind == ViolationKind::Parity).count(), 2);
        assert!(v.iter().all(|v| v.kind == ViolationKind::Parity));
    }

    #[test]
    fn injected_asymmetric_fact() {
        let m = model(14);
        let mut ints: Vec<IntersectionFact> = m.facts.intersection_facts().map(|(_, f)| f.clone()).collect();
        ints.push(IntersectionFact {
            x: id("B1"),
            y: id("C1"),
            number: 1,
            provenance: Provenance::DerivedPattern,
            origin: FactOrigin { line: 0, template: "test".into() },
        });
        let actions = m.facts.action_facts().map(|(_, f)| f.clone()).collect();
        let v = validate_table(&m.table, &FactDb::new(ints, actions));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Symmetry);
    }

    #[test]
    fn braid_fact_derivation() {
        let mut db = model(14).facts;
        let f = db.derive_braid_fact(&id("A2"), &id("Gamma2")).unwrap();
        assert_eq!((f.a, f.b), (id("A2"), id("Gamma2")));
        assert!(db.derive_braid_fact(&id("A2"), &id("Gamma2")).is_ok());
        assert_eq!(
            db.derive_braid_fact(&id("A2"), &id("A2")),
            Err(SurfaceError::BraidPrecondition { a: id("A2"), b: id("A2") })
        );
        assert!(db.derive_braid_fact(&id("Gamma2"), &id("Gamma8")).is_err());
    }

    #[test]
    fn table_syntax_errors_carry_lines() {
        let e = TableSource::parse("version 1\n[curves]\nA1 : 1 2\nQ4 : 1 2\n").unwrap().instantiate(Genus::new(5).unwrap()).unwrap_err();
        assert_eq!(e.line, 4);
        let e = TableSource::parse("version 1\nA1 : 1 2\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = TableSource::parse("version 1\n[intersections]\nA1 A1 0 MAYBE\n").unwrap().instantiate(Genus::new(5).unwrap()).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(TableSource::parse("[curves]\n").is_err());
        let src = TableSource::parse("version 1\n[curves]\nA1 : 1 2 6\n").unwrap();
        assert!(src.instantiate(Genus::new(5).unwrap()).unwrap_err().message.contains("twice"));
    }
}
