//! Verification toolkit for generating sets of the mapping class group of a
//! closed nonorientable surface `N_g`, in the circular crosscap model.
//!
//! - [`surface`]: curve table, fact database and its consistency gate;
//! - [`word`]: freely reduced words over twists, transpositions and `T`;
//! - [`action`]: fact-licensed action on curves and conjugation rewriting;
//! - [`homology`]: the mod-2 homology representation used as a refutation oracle;
//! - [`checker`]: proof scripts, step checking and reports.

pub mod action;
pub mod checker;
pub mod homology;
pub mod script;
pub mod surface;
pub mod template;
pub mod word;

pub use action::{ActionEngine, ActionResult};
pub use checker::{check_nonabelian, check_script, exit_code, render_text, CheckError, RewriteVerdict, ScriptReport, StepReport};
pub use homology::{F2Matrix, F2Vector, OracleVerdict};
pub use script::Script;
pub use surface::{CurveId, FactDb, Genus, SurfaceModel};
pub use word::{Letter, LetterKind, Word};
