use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartensor"))
        .args(args)
        .env_remove("CARTENSOR_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

const A4: &str = "[[Y[1](a) x Y[1](b)][2] x [Y[1](c) x Y[1](d)][2]][0]";

#[test]
fn reduce_prints_text() {
    let o = run(&["reduce", "[Y[1](a) x Y[1](b)][0]", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sqrt(3)/(4*pi) * (a.b)");
}

#[test]
fn reduce_json_and_latex() {
    let o = run(&["reduce", A4, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rank"], 0);
    let o = run(&["reduce", A4, "--format", "latex"]);
    assert!(stdout(&o).contains("\\pi"));
}

#[test]
fn triangle_failure_exits_two() {
    let o = run(&["reduce", "[Y[1](a) x Y[1](b)][3]"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("triangle"), "{err}");
    assert!(err.contains('^'), "{err}");
}

#[test]
fn syntax_error_exits_two() {
    let o = run(&["reduce", "[Y[1](a) + Y[1](b)][0]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expected 'x'"));
    assert_eq!(run(&["reduce"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_and_fails() {
    let o = run(&["verify", A4, "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["samples"], 200);

    let o = run(&["verify", A4, "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["verify", "[Y[2](a) x [Y[1](c) x Y[1](d)][2]][0]", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"seed\":3"));
}

#[test]
fn corpus_check_passes() {
    let o = run(&["corpus", "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "26/26 pass");
}

#[test]
fn edited_corpus_entry_is_reported() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus.jsonl")).unwrap();
    let edited: Vec<String> = src
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            if v["id"] == "A7" {
                v["expected"]["rank"] = 9.into();
            }
            v.to_string()
        })
        .collect();
    let path: PathBuf = std::env::temp_dir().join(format!("cartensor-corpus-{}.jsonl", std::process::id()));
    std::fs::write(&path, edited.join("\n")).unwrap();
    let o = run(&["corpus", "--check", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "25/26 pass, A7 mismatch");
}

#[test]
fn stored_corpus_text_matches_reduction() {
    let o = run(&["reduce", "[Y[1](a) x [Y[1](b) x Y[2](c)][1]][0]"]);
    assert_eq!(stdout(&o), "sqrt(3)/(8*sqrt(2)*pi^(3/2)) * (3*(a.c)*(b.c) - (a.b))");
}

#[test]
fn fivefold_coupling_has_42_terms() {
    let o = run(&["reduce", "[[[Y[2](a) x Y[2](b)][2] x Y[2](c)][2] x [Y[2](d) x Y[2](e)][2]][0]", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 42);
}
