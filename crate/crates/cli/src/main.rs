use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use crosscap::checker::{self, exit, ScriptReport};
use crosscap::homology;
use crosscap::script::{self, Script};
use crosscap::surface::{CurveTable, TableSource};
use crosscap::{ActionEngine, ActionResult, CurveId, Genus, LetterKind, SurfaceModel, Word};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "crosscap", version, about = "Checks two-generator derivations for mapping class groups of nonorientable surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof script at one genus or an inclusive range `A..B`.
    Verify {
        #[arg(long)]
        script: String,
        #[arg(long)]
        genus: String,
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Fail when any FIGURE-AXIOM fact is consumed.
        #[arg(long)]
        strict_axioms: bool,
        #[arg(short, long)]
        verbose: bool,
    },
    /// Delete each consumed fact in turn and report which steps break.
    Sweep {
        #[arg(long)]
        script: String,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        table: Option<String>,
    },
    /// Image of a curve under a word.
    Act {
        word: String,
        curve: String,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        table: Option<String>,
    },
    /// Mod-2 homology matrix of a word, one row per line.
    Matrix {
        word: String,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        table: Option<String>,
    },
    /// List facts, optionally by provenance (PAPER, FIGURE-AXIOM, DERIVED-PATTERN).
    Facts {
        #[arg(long)]
        provenance: Option<String>,
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long)]
        table: Option<String>,
    },
    /// Print the curve table at a genus and run the consistency gate.
    Table {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        table: Option<String>,
    },
}

struct DataError(String);

impl<E: std::fmt::Display> From<E> for DataError {
    fn from(e: E) -> Self {
        DataError(e.to_string())
    }
}

type Run = Result<i32, DataError>;

fn load_table(path: Option<&str>) -> Result<TableSource, DataError> {
    match path {
        None => Ok(TableSource::bundled()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| DataError(format!("{p}: {e}")))?;
            TableSource::parse(&text).map_err(|e| DataError(format!("{p}: {e}")))
        }
    }
}

fn load_model(path: Option<&str>, genus: u32) -> Result<SurfaceModel, DataError> {
    let source = load_table(path)?;
    Ok(source.instantiate(Genus::new(genus)?)?)
}

fn load_script(name: &str) -> Result<Script, DataError> {
    if let Some(s) = Script::bundled(name) {
        return Ok(s);
    }
    if !Path::new(name).exists() {
        return Err(DataError(format!("no bundled script `{name}` (known: {}) and no such file", script::BUNDLED.join(", "))));
    }
    let text = fs::read_to_string(name).map_err(|e| DataError(format!("{name}: {e}")))?;
    Script::parse(&text).map_err(|e| DataError(format!("{name}: {e}")))
}

fn parse_genera(text: &str) -> Result<Vec<u32>, DataError> {
    let bad = || DataError(format!("bad genus `{text}` (expected N or A..B)"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn parse_word(text: &str) -> Result<Word, DataError> {
    text.parse().map_err(|e| DataError(format!("word `{text}`: {e}")))
}

fn verify(script: &str, genus: &str, table: Option<&str>, format: Format, strict: bool, verbose: bool) -> Run {
    let script = load_script(script)?;
    let source = load_table(table)?;
    let genera = parse_genera(genus)?;
    let results: Vec<Result<ScriptReport, DataError>> = genera
        .par_iter()
        .map(|&g| {
            let model = source.instantiate(Genus::new(g)?)?;
            Ok(checker::check_script(&script, &model)?)
        })
        .collect();
    let mut code = exit::PASS;
    let mut structured = Vec::new();
    for (g, r) in genera.iter().zip(results) {
        match r {
            Ok(report) => {
                let c = checker::exit_code(&report, strict);
                code = worse(code, c);
                match format {
                    Format::Text => {
                        print!("{}", checker::render_text(&report, verbose));
                        if c == exit::AXIOMS_CONSUMED {
                            println!("strict-axioms: rejected, consumed {}", report.axioms.join("; "));
                        }
                    }
                    Format::Structured => structured.push(serde_json::to_value(&report)?),
                }
            }
            Err(DataError(e)) => {
                code = worse(code, exit::DATA_ERROR);
                match format {
                    Format::Text => println!("genus {g}: error: {e}"),
                    Format::Structured => structured.push(serde_json::json!({ "genus": g, "error": e })),
                }
            }
        }
    }
    if format == Format::Structured {
        let doc = if structured.len() == 1 { structured.pop().expect("one report") } else { serde_json::Value::Array(structured) };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    }
    Ok(code)
}

fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        exit::DATA_ERROR => 4,
        exit::REFUTED => 3,
        exit::STEP_FAILURE => 2,
        exit::AXIOMS_CONSUMED => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn sweep(script: &str, genus: u32, table: Option<&str>) -> Run {
    let script = load_script(script)?;
    let model = load_model(table, genus)?;
    let entries = checker::deletion_sweep(&script, &model)?;
    let mut code = exit::PASS;
    for e in &entries {
        if e.necessary {
            println!("necessary  {}  (breaks {})", e.fact, e.failing_steps.join(", "));
        } else {
            println!("redundant  {}", e.fact);
            code = exit::STEP_FAILURE;
        }
    }
    println!("{} facts consumed, {} redundant", entries.len(), entries.iter().filter(|e| !e.necessary).count());
    Ok(code)
}

fn act(word: &str, curve: &str, genus: u32, table: Option<&str>) -> Run {
    let w = parse_word(word)?;
    let c: CurveId = curve.parse()?;
    let model = load_model(table, genus)?;
    let w = model.table.canonical_word(&w)?;
    let r = ActionEngine::new(&model).act_word(&w, &c, &mut Default::default());
    println!("{r}");
    Ok(match r {
        ActionResult::Known { .. } => exit::PASS,
        ActionResult::Unknown { .. } => exit::STEP_FAILURE,
    })
}

fn matrix(word: &str, genus: u32, table: Option<&str>) -> Run {
    let w = parse_word(word)?;
    let g = Genus::new(genus)?;
    let twists = w.letters().iter().any(|l| matches!(l.kind, LetterKind::Twist(_)));
    let m = if twists {
        let model = load_model(table, genus)?;
        let w = model.table.canonical_word(&w)?;
        homology::word_matrix(&w, g, &model.table)?
    } else {
        homology::word_matrix(&w, g, &CurveTable::empty(g))?
    };
    print!("{}", m.dump());
    Ok(exit::PASS)
}

fn facts(provenance: Option<&str>, genus: Option<u32>, table: Option<&str>) -> Run {
    let wanted = provenance.map(|p| p.parse::<crosscap::surface::Provenance>()).transpose()?;
    match genus {
        Some(g) => {
            let model = load_model(table, g)?;
            let db = &model.facts;
            let ids = db.intersection_facts().map(|(id, _)| id).chain(db.action_facts().map(|(id, _)| id));
            for id in ids.filter(|&id| wanted.is_none_or(|p| db.provenance(id) == p)) {
                println!("{}", db.describe(id));
            }
        }
        None => {
            let source = load_table(table)?;
            for (line, text) in source.fact_templates() {
                let tag = text.split_whitespace().last().unwrap_or("");
                if wanted.is_none_or(|p| p.tag() == tag) {
                    println!("line {line}: {text}");
                }
            }
        }
    }
    Ok(exit::PASS)
}

fn table(genus: u32, table: Option<&str>) -> Run {
    let model = load_model(table, genus)?;
    for r in model.table.records() {
        let crosscaps: Vec<String> = r.traversal.iter().map(u32::to_string).collect();
        let crosscaps = if crosscaps.is_empty() { "boundary".to_string() } else { crosscaps.join(" ") };
        let mut line = format!("{:8} {:16} {}", r.id.to_string(), crosscaps, r.h_class);
        if !r.aliases.is_empty() {
            let aliases: Vec<String> = r.aliases.iter().map(ToString::to_string).collect();
            line.push_str(&format!("  alias {}", aliases.join(", ")));
        }
        println!("{line}");
    }
    let scripts: Vec<Script> = script::BUNDLED.iter().filter_map(|n| Script::bundled(n)).collect();
    let violations = checker::validate_with_scripts(&model, &scripts);
    for v in &violations {
        println!("{v}");
    }
    println!("{} violations", violations.len());
    Ok(if violations.is_empty() { exit::PASS } else { exit::DATA_ERROR })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { script, genus, table, format, strict_axioms, verbose } => {
            verify(script, genus, table.as_deref(), *format, *strict_axioms, *verbose)
        }
        Command::Sweep { script, genus, table } => sweep(script, *genus, table.as_deref()),
        Command::Act { word, curve, genus, table } => act(word, curve, *genus, table.as_deref()),
        Command::Matrix { word, genus, table } => matrix(word, *genus, table.as_deref()),
        Command::Facts { provenance, genus, table } => facts(provenance.as_deref(), *genus, table.as_deref()),
        Command::Table { genus, table } => self::table(*genus, table.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(DataError(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::DATA_ERROR as u8)
        }
    }
}
