//! Step-by-step verification of proof scripts.
//!
//! Each step is recomputed by the rewriting engine and compared letter for
//! letter with its claimed normal form. Independently, the literal word and
//! the claim are compared in mod-2 homology; a disagreement there is a
//! refutation regardless of what the rewriter concluded.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::action::{ActionEngine, Transport};
use crate::homology::{self, HomologyError, OracleVerdict};
use crate::script::{Expr, Flag, Justification, ProofScript, Script, ScriptError, Step};
use crate::surface::{Consumed, FactDb, FactId, Genus, Provenance, SurfaceError, SurfaceModel, Violation, ViolationKind};
use crate::word::{LetterKind, Word};

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error("min_genus violated: script {script} requires genus {range}, got {genus}")]
    GenusOutOfRange { script: String, range: String, genus: u32 },
    #[error("step {step}: {source}")]
    Surface { step: String, source: SurfaceError },
    #[error("step {step}: {source}")]
    Homology { step: String, source: HomologyError },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum RewriteVerdict {
    Verified,
    Failed { reason: String },
    UsesAxiom { axioms: Vec<String> },
}

impl RewriteVerdict {
    pub fn is_ok(&self) -> bool {
        !matches!(self, RewriteVerdict::Failed { .. })
    }
}

impl fmt::Display for RewriteVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteVerdict::Verified => f.write_str("Verified"),
            RewriteVerdict::Failed { reason } => write!(f, "Failed({reason})"),
            RewriteVerdict::UsesAxiom { axioms } => write!(f, "UsesAxiom({})", axioms.join("; ")),
        }
    }
}

/// Comparison of a derived normal form with the form printed in the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedCheck {
    pub printed: Word,
    pub differs: bool,
    pub oracle: OracleVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub step: String,
    pub line: usize,
    pub justification: Justification,
    pub verdict: RewriteVerdict,
    pub oracle: OracleVerdict,
    pub axioms: Vec<String>,
    pub facts: Vec<String>,
    pub claimed: Word,
    pub computed: Option<Word>,
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<PrintedCheck>,
    #[serde(skip)]
    pub consumed: Consumed,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_ok() && !self.oracle.is_refuted()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetReport {
    pub target: Word,
    pub met: bool,
    pub via: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScriptReport {
    pub script: String,
    pub genus: u32,
    pub passed: bool,
    pub failures: usize,
    pub refutations: usize,
    pub steps: Vec<StepReport>,
    pub targets: Vec<TargetReport>,
    pub axioms: Vec<String>,
    pub fingerprint: Vec<String>,
}

impl ScriptReport {
    /// Every fact consumed by any step.
    pub fn consumed(&self) -> Consumed {
        self.steps.iter().flat_map(|s| s.consumed.iter().copied()).collect()
    }

    pub fn targets_met(&self) -> bool {
        self.targets.iter().all(|t| t.met)
    }
}

pub mod exit {
    pub const PASS: i32 = 0;
    pub const STEP_FAILURE: i32 = 1;
    pub const REFUTED: i32 = 2;
    pub const DATA_ERROR: i32 = 3;
    pub const AXIOMS_CONSUMED: i32 = 4;
}

/// Exit status as a function of the report alone.
pub fn exit_code(report: &ScriptReport, strict_axioms: bool) -> i32 {
    if report.refutations > 0 {
        exit::REFUTED
    } else if !report.passed {
        exit::STEP_FAILURE
    } else if strict_axioms && !report.axioms.is_empty() {
        exit::AXIOMS_CONSUMED
    } else {
        exit::PASS
    }
}

type Env = HashMap<String, Word>;

fn eval(e: &Expr, env: &Env) -> Result<Word, CheckError> {
    Ok(match e {
        Expr::Name(n) => env.get(n).cloned().ok_or_else(|| CheckError::UnknownName(n.clone()))?,
        Expr::Literal(w) => w.clone(),
        Expr::Inverse(x) => eval(x, env)?.invert(),
        Expr::Power(x, n) => eval(x, env)?.pow(*n),
        Expr::Conj(w, x) => Word::conjugate(&eval(w, env)?, &eval(x, env)?),
        Expr::Product(fs) => {
            let mut acc = Word::identity();
            for f in fs {
                acc = acc.multiply(&eval(f, env)?);
            }
            acc
        }
    })
}

struct Outcome {
    computed: Option<Word>,
    failure: Option<String>,
    transports: Vec<(Word, Transport)>,
}

fn check_transports(model: &SurfaceModel, transports: &[(Word, Transport)]) -> Result<Option<String>, HomologyError> {
    let n = model.genus().get() as usize;
    for (w, t) in transports {
        let m = homology::word_matrix(w, model.genus(), &model.table)?;
        let class = |c| homology::ClassLookup::class_of(&model.table, c).ok_or_else(|| HomologyError::UnknownClass(c.clone()));
        let (from, to) = (class(&t.from)?, class(&t.to)?);
        if from.len() != n || m.apply(&from) != to {
            return Ok(Some(format!("transport {} -> {} under {} contradicts mod-2 homology", t.from, t.to, w)));
        }
    }
    Ok(None)
}

/// Checks one step against the environment of previously derived words.
pub fn check_step(step: &Step, env: &Env, model: &SurfaceModel) -> Result<StepReport, CheckError> {
    let table = &model.table;
    let surface_err = |source| CheckError::Surface { step: step.name.clone(), source };
    let homology_err = |source| CheckError::Homology { step: step.name.clone(), source };
    let literal = table.canonical_word(&eval(&step.expression, env)?).map_err(surface_err)?;
    let claimed = table.canonical_word(&step.claimed).map_err(surface_err)?;
    let engine = ActionEngine::new(model);
    let mut consumed = Consumed::new();

    let conjugation = |w: Word, x: Word, rotation_only: bool, consumed: &mut Consumed| -> Outcome {
        if rotation_only && !w.is_rotation_power() {
            return Outcome { computed: None, failure: Some(format!("rotation step conjugates by {w}, not a power of T")), transports: vec![] };
        }
        match engine.rewrite_conjugation(&w, &x, consumed) {
            Ok(r) => Outcome { computed: Some(r.word), failure: None, transports: r.transports.into_iter().map(|t| (w.clone(), t)).collect() },
            Err(u) => Outcome { computed: None, failure: Some(u.to_string()), transports: vec![] },
        }
    };
    let conjugation_form = |consumed: &mut Consumed, rotation_only: bool| -> Result<Outcome, CheckError> {
        if let Expr::Conj(w, x) = &step.expression {
            let w = table.canonical_word(&eval(w, env)?).map_err(surface_err)?;
            let x = table.canonical_word(&eval(x, env)?).map_err(surface_err)?;
            return Ok(conjugation(w, x, rotation_only, consumed));
        }
        let (p, x) = literal.split_conjugate();
        if p.is_empty() {
            if rotation_only {
                return Ok(Outcome { computed: None, failure: Some("rotation step is not a conjugation".into()), transports: vec![] });
            }
            return Ok(Outcome { computed: Some(literal.clone()), failure: None, transports: vec![] });
        }
        Ok(conjugation(p, x, rotation_only, consumed))
    };

    let outcome = match &step.justification {
        Justification::FreeReduction => Outcome { computed: Some(literal.clone()), failure: None, transports: vec![] },
        Justification::Telescoping => match &step.expression {
            Expr::Product(fs) if fs.len() >= 2 => Outcome { computed: Some(literal.clone()), failure: None, transports: vec![] },
            _ => Outcome { computed: None, failure: Some("telescoping needs a product of at least two factors".into()), transports: vec![] },
        },
        Justification::RotationConjugation => conjugation_form(&mut consumed, true)?,
        Justification::ConjugationRewrite => conjugation_form(&mut consumed, false)?,
        Justification::AxiomFact(reference) => {
            let found = model
                .facts
                .intersection_facts()
                .map(|(id, _)| id)
                .chain(model.facts.action_facts().map(|(id, _)| id))
                .find(|&id| model.facts.statement(id) == *reference);
            match found {
                Some(id) => {
                    consumed.insert(id);
                    conjugation_form(&mut consumed, false)?
                }
                None => Outcome { computed: None, failure: Some(format!("no fact `{reference}` in the database")), transports: vec![] },
            }
        }
    };

    let soundness = check_transports(model, &outcome.transports).map_err(homology_err)?;
    let axioms: Vec<String> = consumed
        .iter()
        .filter(|&&id| model.facts.provenance(id) == Provenance::FigureAxiom)
        .map(|&id| model.facts.statement(id))
        .collect();
    let verdict = match (&outcome.computed, outcome.failure, soundness) {
        (_, Some(reason), _) | (_, None, Some(reason)) => RewriteVerdict::Failed { reason },
        (Some(c), None, None) if *c != claimed => RewriteVerdict::Failed { reason: format!("computed {c}, claimed {claimed}") },
        (None, None, None) => RewriteVerdict::Failed { reason: "no normal form".into() },
        _ if axioms.is_empty() => RewriteVerdict::Verified,
        _ => RewriteVerdict::UsesAxiom { axioms: axioms.clone() },
    };
    let oracle = homology::oracle_check(&literal, &claimed, model.genus(), table).map_err(homology_err)?;
    let mut printed = None;
    for f in &step.flags {
        if let Flag::Printed(p) = f {
            let p = table.canonical_word(p).map_err(surface_err)?;
            let oracle = homology::oracle_check(&literal, &p, model.genus(), table).map_err(homology_err)?;
            printed = Some(PrintedCheck { differs: p != claimed, printed: p, oracle });
        }
    }
    Ok(StepReport {
        step: step.name.clone(),
        line: step.line,
        justification: step.justification.clone(),
        verdict,
        oracle,
        axioms,
        facts: consumed.iter().map(|&id| model.facts.describe(id)).collect(),
        claimed,
        computed: outcome.computed,
        flags: step.flags.iter().map(Flag::to_string).collect(),
        printed,
        consumed,
    })
}

fn genus_range(script: &Script) -> String {
    match script.max_genus {
        Some(m) if m == script.min_genus => format!("= {m}"),
        Some(m) => format!("in {}..{m}", script.min_genus),
        None => format!(">= {}", script.min_genus),
    }
}

/// Instantiates `script` at the model's genus and checks every step.
pub fn check_script(script: &Script, model: &SurfaceModel) -> Result<ScriptReport, CheckError> {
    let genus = model.genus();
    if !script.admits(genus) {
        return Err(CheckError::GenusOutOfRange { script: script.name.clone(), range: genus_range(script), genus: genus.get() });
    }
    let proof = script.instantiate(genus)?;
    check_proof(&proof, model)
}

pub fn check_proof(proof: &ProofScript, model: &SurfaceModel) -> Result<ScriptReport, CheckError> {
    let mut env = Env::new();
    let mut derived: Vec<(String, Word)> = Vec::new();
    for g in &proof.generators {
        let w = model.table.canonical_word(&g.word).map_err(|source| CheckError::Surface { step: g.name.clone(), source })?;
        env.insert(g.name.clone(), w.clone());
        derived.push((g.name.clone(), w));
    }
    let mut steps = Vec::with_capacity(proof.steps.len());
    for s in &proof.steps {
        let r = check_step(s, &env, model)?;
        env.insert(s.name.clone(), r.claimed.clone());
        if r.passed() {
            derived.push((s.name.clone(), r.claimed.clone()));
        }
        steps.push(r);
    }
    let targets = proof
        .targets
        .iter()
        .map(|t| {
            let t = model.table.canonical_word(t).unwrap_or_else(|_| t.clone());
            let via = find_target(&t, &derived, proof.genus);
            TargetReport { target: t, met: via.is_some(), via }
        })
        .collect::<Vec<_>>();
    let failures = steps.iter().filter(|s| !s.verdict.is_ok()).count();
    let refutations = steps.iter().filter(|s| s.oracle.is_refuted()).count();
    let consumed: Consumed = steps.iter().flat_map(|s| s.consumed.iter().copied()).collect();
    let axioms: BTreeSet<String> = steps.iter().flat_map(|s| s.axioms.iter().cloned()).collect();
    let fingerprint = fingerprint(&model.facts, &consumed);
    let passed = failures == 0 && refutations == 0 && targets.iter().all(|t| t.met);
    Ok(ScriptReport {
        script: proof.name.clone(),
        genus: proof.genus.get(),
        passed,
        failures,
        refutations,
        steps,
        targets,
        axioms: axioms.into_iter().collect(),
        fingerprint,
    })
}

/// A target is met by a derived word equal to it; a single transposition
/// is also met by any derived transposition when `T` is available, since
/// conjugating by powers of `T` reaches every standard transposition.
fn find_target(t: &Word, derived: &[(String, Word)], genus: Genus) -> Option<String> {
    if let Some((n, _)) = derived.iter().find(|(_, w)| w == t) {
        return Some(n.clone());
    }
    let single_transposition = |w: &Word| match w.letters() {
        [l] if l.exponent == 1 => match l.kind {
            LetterKind::Transposition(j) if j < genus.get() => Some(j),
            _ => None,
        },
        _ => None,
    };
    single_transposition(t)?;
    let rotation = derived.iter().find(|(_, w)| *w == Word::letter(crate::word::Letter::rotation(1)))?;
    let base = derived.iter().find(|(_, w)| single_transposition(w).is_some())?;
    Some(format!("{} conjugated by powers of {}", base.0, rotation.0))
}

/// Template lines of the table behind the consumed facts; equal across
/// genera when a derivation uses the same facts up to index shifts.
pub fn fingerprint(db: &FactDb, consumed: &Consumed) -> Vec<String> {
    let lines: BTreeSet<String> = consumed
        .iter()
        .map(|&id| {
            let o = db.origin(id);
            format!("line {}: {}", o.line, o.template)
        })
        .collect();
    lines.into_iter().collect()
}

/// Outcome of deleting one consumed fact and re-running the script.
#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub fact: String,
    pub necessary: bool,
    pub failing_steps: Vec<String>,
}

/// Deletes each consumed fact in turn and records which steps then fail.
pub fn deletion_sweep(script: &Script, model: &SurfaceModel) -> Result<Vec<SweepEntry>, CheckError> {
    let base = check_script(script, model)?;
    let mut out = Vec::new();
    for id in base.consumed() {
        let reduced = model.with_facts(model.facts.without(id));
        let report = check_script(script, &reduced)?;
        let failing_steps: Vec<String> = report.steps.iter().filter(|s| !s.verdict.is_ok()).map(|s| s.step.clone()).collect();
        out.push(SweepEntry { fact: model.facts.describe(id), necessary: !failing_steps.is_empty(), failing_steps });
    }
    Ok(out)
}

/// FIGURE-AXIOM facts consumed by a report, as fact identifiers.
pub fn axiom_facts(report: &ScriptReport, db: &FactDb) -> Vec<FactId> {
    report.consumed().into_iter().filter(|&id| db.provenance(id) == Provenance::FigureAxiom).collect()
}

/// True iff the homology matrices of the two words do not commute.
pub fn check_nonabelian(gen1: &Word, gen2: &Word, model: &SurfaceModel) -> Result<bool, HomologyError> {
    homology::noncommuting(gen1, gen2, model.genus(), &model.table)
}

/// Table validation plus a `MissingFact` entry for every step of the given
/// scripts that fails for lack of a fact.
pub fn validate_with_scripts(model: &SurfaceModel, scripts: &[Script]) -> Vec<Violation> {
    let mut out = crate::surface::validate_table(&model.table, &model.facts);
    for s in scripts.iter().filter(|s| s.admits(model.genus())) {
        match check_script(s, model) {
            Ok(r) => {
                for st in &r.steps {
                    if let RewriteVerdict::Failed { reason } = &st.verdict {
                        out.push(Violation { kind: ViolationKind::MissingFact, fact: format!("{} step {}", s.name, st.step), detail: reason.clone() });
                    }
                }
            }
            Err(e) => out.push(Violation { kind: ViolationKind::MissingFact, fact: s.name.clone(), detail: e.to_string() }),
        }
    }
    out
}

/// Plain-text rendering of a report.
pub fn render_text(report: &ScriptReport, verbose: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "script {} at genus {}", report.script, report.genus);
    let width = report.steps.iter().map(|st| st.step.len()).max().unwrap_or(4).max(4);
    for st in &report.steps {
        let verdict = match &st.verdict {
            RewriteVerdict::Verified => "Verified".to_string(),
            RewriteVerdict::UsesAxiom { .. } => "UsesAxiom".to_string(),
            RewriteVerdict::Failed { .. } => "Failed".to_string(),
        };
        let _ = write!(s, "  {:width$}  {:9}  {:14}  {}", st.step, verdict, st.oracle.to_string(), st.claimed);
        if !st.flags.is_empty() {
            let _ = write!(s, "  @{}", st.flags.join(" @"));
        }
        s.push('\n');
        match &st.verdict {
            RewriteVerdict::Failed { reason } => {
                let _ = writeln!(s, "  {:width$}    reason: {reason}", "");
            }
            RewriteVerdict::UsesAxiom { axioms } => {
                let _ = writeln!(s, "  {:width$}    axioms: {}", "", axioms.join("; "));
            }
            RewriteVerdict::Verified => {}
        }
        if let Some(p) = &st.printed {
            if p.differs {
                let _ = writeln!(s, "  {:width$}    printed form {} differs from the derived form ({})", "", p.printed, p.oracle);
            }
        }
        if verbose {
            for f in &st.facts {
                let _ = writeln!(s, "  {:width$}    uses {f}", "");
            }
        }
    }
    for t in &report.targets {
        match &t.via {
            Some(v) => {
                let _ = writeln!(s, "target {}: met by {v}", t.target);
            }
            None => {
                let _ = writeln!(s, "target {}: NOT derived", t.target);
            }
        }
    }
    if report.axioms.is_empty() {
        s.push_str("figure axioms consumed: none\n");
    } else {
        let _ = writeln!(s, "figure axioms consumed: {}", report.axioms.join("; "));
    }
    let _ = writeln!(
        s,
        "{}: {} steps, {} failed, {} refuted",
        if report.passed { "PASS" } else { "FAIL" },
        report.steps.len(),
        report.failures,
        report.refutations
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(g: u32) -> SurfaceModel {
        SurfaceModel::bundled(Genus::new(g).unwrap()).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn script(body: &str) -> Script {
        Script::parse(&format!("script t\nmin_genus 13\n{body}")).unwrap()
    }

    #[test]
    fn thm_main_passes_at_14() {
        let r = check_script(&Script::bundled("thm_main").unwrap(), &model(14)).unwrap();
        for st in &r.steps {
            assert!(st.passed(), "{}: {} {}", st.step, st.verdict, st.oracle);
        }
        assert!(r.targets_met(), "{:?}", r.targets);
        assert!(r.passed);
        assert_eq!(r.axioms, vec!["T(A1) = B1".to_string()]);
    }

    #[test]
    fn thm_main2_passes_at_13() {
        let r = check_script(&Script::bundled("thm_main2").unwrap(), &model(13)).unwrap();
        for st in &r.steps {
            assert!(st.passed(), "{}: {} {}", st.step, st.verdict, st.oracle);
        }
        assert!(r.passed, "{}", render_text(&r, false));
    }

    #[test]
    fn genus_gate() {
        let e = check_script(&Script::bundled("thm_main").unwrap(), &model(13)).unwrap_err();
        assert!(e.to_string().contains("min_genus violated"));
    }

    #[test]
    fn free_step_examples() {
        let s = script("gen G4 := Gamma2 Gamma8^-1\ngen G5 := A2 Gamma8^-1\nX := G4 G5^-1 => Gamma2 A2^-1 [free]\n");
        let r = check_script(&s, &model(14)).unwrap();
        assert_eq!(r.steps[0].verdict, RewriteVerdict::Verified);
        let s = script("gen G4 := Gamma2 Gamma8^-1\ngen G5 := A2 Gamma8^-1\nX := G4 G5^-1 => A2 Gamma2^-1 [free]\n");
        let r = check_script(&s, &model(14)).unwrap();
        assert!(!r.steps[0].verdict.is_ok());
        assert!(r.steps[0].oracle.is_refuted());
        assert_eq!(exit_code(&r, false), exit::REFUTED);
    }

    #[test]
    fn reflexive_step() {
        let s = script("gen X := u9 A2 B1^-1\nY := u9 A2 B1^-1 => u9 A2 B1^-1 [free]\n");
        let r = check_script(&s, &model(13)).unwrap();
        assert_eq!(r.steps[0].verdict, RewriteVerdict::Verified);
        assert_eq!(r.steps[0].oracle, OracleVerdict::ConsistentMod2);
    }

    #[test]
    fn h5_at_13() {
        let s = script("gen P := Gamma2 Gamma11^-1\ngen Q := Gamma11 A2^-1\nH5 := P Q => Gamma2 A2^-1 [free]\n");
        let r = check_script(&s, &model(13)).unwrap();
        assert_eq!(r.steps[0].verdict, RewriteVerdict::Verified);
    }

    #[test]
    fn missing_fact_is_named() {
        let s = script("gen G1 := u10 A2 C2^-1\nX := conj(A1, G1) => u10 A2 C2^-1 [conjugation]\n");
        let r = check_script(&s, &model(14)).unwrap();
        let RewriteVerdict::Failed { reason } = &r.steps[0].verdict else { panic!() };
        assert!(reason.contains("missing"), "{reason}");
        assert_eq!(exit_code(&r, false), exit::STEP_FAILURE);
    }

    #[test]
    fn rotation_requires_rotation_power() {
        let s = script("gen G1 := u10 A2 C2^-1\nX := conj(Gamma8, G1) => u10 A2 C2^-1 [rotation]\n");
        let r = check_script(&s, &model(14)).unwrap();
        assert!(!r.steps[0].verdict.is_ok());
    }

    #[test]
    fn telescoping_needs_product() {
        let s = script("gen A := A2 Gamma6^-1\nX := A => A2 Gamma6^-1 [telescoping]\n");
        assert!(!check_script(&s, &model(14)).unwrap().steps[0].verdict.is_ok());
    }

    #[test]
    fn axiom_reference() {
        let s = script("gen X := B1 B2^-1\nY := conj(T^-1, X) => A1 C1^-1 [axiom T(A1) = B1]\n");
        let r = check_script(&s, &model(14)).unwrap();
        assert!(matches!(r.steps[0].verdict, RewriteVerdict::UsesAxiom { .. }));
        assert_eq!(exit_code(&r, true), exit::AXIOMS_CONSUMED);
        let s = script("gen X := B1 B2^-1\nY := conj(T^-1, X) => A1 C1^-1 [axiom T(A1) = C1]\n");
        assert!(!check_script(&s, &model(14)).unwrap().steps[0].verdict.is_ok());
    }

    #[test]
    fn printed_form_discrepancy_is_reported() {
        let r = check_script(&Script::bundled("thm_main").unwrap(), &model(14)).unwrap();
        let st = r.steps.iter().find(|s| s.printed.is_some()).unwrap();
        let p = st.printed.as_ref().unwrap();
        assert!(p.differs);
        assert!(p.oracle.is_refuted());
        assert!(render_text(&r, false).contains("differs"));
    }

    #[test]
    fn nonabelian() {
        let m = model(14);
        assert!(check_nonabelian(&w("T"), &w("u10 A2 C2^-1"), &m).unwrap());
        assert!(!check_nonabelian(&w("u10 A2 C2^-1"), &w("u10 A2 C2^-1"), &m).unwrap());
        assert!(!check_nonabelian(&w("T"), &w("T^5"), &m).unwrap());
    }

    #[test]
    fn bundled_table_has_no_missing_facts() {
        let scripts: Vec<Script> = crate::script::BUNDLED.iter().map(|n| Script::bundled(n).unwrap()).collect();
        for g in [13, 14, 17, 22] {
            let v = validate_with_scripts(&model(g), &scripts);
            assert!(v.is_empty(), "g={g}: {v:?}");
        }
    }
}
