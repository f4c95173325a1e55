use std::path::PathBuf;
use std::process::{Command, Output};

fn alfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alfa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn corpus_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("alfa-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn checks_the_bundled_corpus_in_order() {
    let files: Vec<String> = ["alfao.gpf", "alfa_i.gpf", "alfa_io.gpf", "alfa_io_classic.gpf"]
        .iter()
        .map(|f| corpus_file(f))
        .collect();
    let mut args = vec!["check", "--semantic"];
    args.extend(files.iter().map(String::as_str));
    let o = alfa(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("26 theorem(s), 0 rejected"));
}

#[test]
fn illegal_rule_is_a_verification_failure() {
    let path = scratch("bad.gpf", "system ALFA_IO theorem t from: ((p)) step R6 => p qed");
    let o = alfa(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not in"), "{}", stdout(&o));
}

#[test]
fn empty_script_has_no_theorems() {
    let path = scratch("empty.gpf", "");
    let o = alfa(&["check", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 theorem(s)"));
}

#[test]
fn parse_errors_are_usage_errors() {
    assert_eq!(alfa(&["translate", "(p"]).status.code(), Some(2));
    assert_eq!(alfa(&["oracle", "ipc", "p ->"]).status.code(), Some(2));
    assert_eq!(alfa(&["check", "/nonexistent/x.gpf"]).status.code(), Some(2));
}

#[test]
fn translation_and_embedding() {
    assert_eq!(stdout(&alfa(&["translate", "{p => q}"])).trim(), "p -> q");
    assert_eq!(stdout(&alfa(&["translate", ""])).trim(), "T");
    assert_eq!(stdout(&alfa(&["embed", "p v q"])).trim(), "{p | q}");
}

#[test]
fn oracles() {
    let o = stdout(&alfa(&["oracle", "ipc", "~~p -> p"]));
    assert!(o.starts_with("INVALID"));
    assert!(o.contains("w0 w1") && !o.contains("w2"), "{o}");
    assert_eq!(stdout(&alfa(&["oracle", "cpc", "~~p -> p"])).trim(), "VALID");
    assert_eq!(stdout(&alfa(&["oracle", "ipc", "~(p & q) -> (p -> ~q)"])).trim(), "VALID");
    let json: serde_json::Value = serde_json::from_str(&stdout(&alfa(&["oracle", "ipc", "p v ~p", "--json"]))).unwrap();
    assert_eq!(json["valid"], false);
}

#[test]
fn search_prints_a_checkable_script() {
    let o = alfa(&["search", "alfao", "p (p (q))", "q", "--steps", "4", "--no-lemmas"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("found.gpf", &stdout(&o));
    assert_eq!(alfa(&["check", &path]).status.code(), Some(0));

    let o = alfa(&["search", "alfa_io_classic", "((p))", "p", "--steps", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("classic.gpf", &stdout(&o));
    assert_eq!(alfa(&["check", "--corpus", &path]).status.code(), Some(0));
}

#[test]
fn search_reports_certified_absence() {
    let o = alfa(&["search", "alfa_io", "((p))", "p", "--steps", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("NOT FOUND"));
    assert!(text.contains("semantically invalid in IPC"));
}

#[test]
fn fuzzing() {
    let o = alfa(&["fuzz", "ALFA_IO", "--iterations", "1000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failure(s)"));

    let o = alfa(&["fuzz", "ALFA_IO", "--iterations", "100", "--add-rule", "R6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("~~p -> p"), "{}", stdout(&o));

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&alfa(&["fuzz", "alfao", "--iterations", "1", "--json"]))).unwrap();
    assert!(json["soundness"].as_array().unwrap().iter().all(|t| t[1] == 1));
}

#[test]
fn corpus_table() {
    let o = alfa(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.contains(" accept ")).count(), 26);
    let json: serde_json::Value = serde_json::from_str(&stdout(&alfa(&["corpus", "--system", "alfa_i", "--json"]))).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 6);
}
