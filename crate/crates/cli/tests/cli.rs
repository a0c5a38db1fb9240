use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosscap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_at_minimal_genus() {
    let o = run(&["verify", "--script", "thm_main", "--genus", "14"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn verify_passes_at_25() {
    assert_eq!(run(&["verify", "--script", "thm_main", "--genus", "25"]).status.code(), Some(0));
}

#[test]
fn verify_rejects_genus_below_minimum() {
    let o = run(&["verify", "--script", "thm_main", "--genus", "13"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("min_genus violated"));
}

#[test]
fn verify_genus_range_and_genus_13() {
    assert_eq!(run(&["verify", "--script", "thm_main", "--genus", "14..18"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--script", "thm_main2", "--genus", "13"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--script", "thm_main2", "--genus", "14"]).status.code(), Some(3));
}

#[test]
fn strict_axioms_reports_the_figure_axiom() {
    let o = run(&["verify", "--script", "thm_main", "--genus", "14", "--strict-axioms"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("consumed T(A1) = B1"));
}

#[test]
fn text_and_structured_reports_agree() {
    let text = stdout(&run(&["verify", "--script", "thm_main2", "--genus", "13"]));
    let o = run(&["verify", "--script", "thm_main2", "--genus", "13", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for step in v["steps"].as_array().unwrap() {
        let name = step["step"].as_str().unwrap();
        let status = step["verdict"]["status"].as_str().unwrap();
        let oracle = step["oracle"]["verdict"].as_str().unwrap();
        let line = text.lines().find(|l| l.split_whitespace().next() == Some(name)).unwrap();
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[1], status, "{name}");
        assert_eq!(cols[2], oracle, "{name}");
    }
    assert_eq!(v["passed"], true);
}

#[test]
fn refuted_script_exits_with_refutation_code() {
    let dir = std::env::temp_dir().join(format!("crosscap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.proof");
    std::fs::write(&path, "script bad\nmin_genus 14\ngen G4 := Gamma2 Gamma8^-1\ngen G5 := A2 Gamma8^-1\nX := G4 G5^-1 => A2 Gamma2^-1 [free]\n").unwrap();
    let o = run(&["verify", "--script", path.to_str().unwrap(), "--genus", "14"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&path, "script bad\nmin_genus 14\ngen G1 := u10 A2 C2^-1\nX := conj(A1, G1) => u10 A2 C2^-1 [conjugation]\n").unwrap();
    assert_eq!(run(&["verify", "--script", path.to_str().unwrap(), "--genus", "14"]).status.code(), Some(1));
    std::fs::write(&path, "script bad\nmin_genus 14\nX := := [free]\n").unwrap();
    let o = run(&["verify", "--script", path.to_str().unwrap(), "--genus", "14"]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unreadable_inputs_are_data_errors() {
    assert_eq!(run(&["verify", "--script", "/nonexistent.proof", "--genus", "14"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "--script", "thm_main", "--genus", "14", "--table", "/nonexistent.table"]).status.code(), Some(3));
}

#[test]
fn act_query() {
    let o = run(&["act", "T^3", "A2", "--genus", "14"]);
    assert_eq!(stdout(&o).trim(), "Gamma4 (+1)");
    let o = run(&["act", "A2", "Gamma2", "--genus", "14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("unknown"));
    let o = run(&["act", "A2 Q", "Gamma2", "--genus", "14"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 4"));
}

#[test]
fn matrix_of_rotation_at_genus_4() {
    let o = run(&["matrix", "T", "--genus", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0001\n1000\n0100\n0010\n");
}

#[test]
fn facts_figure_axioms() {
    let o = run(&["facts", "--provenance", "FIGURE-AXIOM", "--genus", "14"]);
    assert_eq!(stdout(&o).trim(), "T(A1) = B1 (+1) [FIGURE-AXIOM]");
    let o = run(&["facts", "--provenance", "FIGURE-AXIOM"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert_eq!(run(&["facts", "--provenance", "BOGUS"]).status.code(), Some(3));
}

#[test]
fn table_gate_is_clean() {
    let o = run(&["table", "--genus", "14"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 violations"));
}

#[test]
fn sweep_finds_no_redundant_fact() {
    let o = run(&["sweep", "--script", "thm_main", "--genus", "14"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(" 0 redundant"));
}
