//! The regression corpus: one JSON object per line,
//! `{"id", "expr", "expected", "note"}`, where `expected` is the canonical
//! JSON rendering of the reduction.

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::oracle::{verify_result, DEFAULT_SEED};
use crate::parser::{parse, ParseError};
use crate::reduce::{reduce, ReduceError};
use crate::render::result_json;

pub const CHECK_SAMPLES: usize = 200;
pub const CHECK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub expr: String,
    #[serde(default)]
    pub expected: Value,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("duplicate id {0}")]
    Duplicate(String),
    #[error("{id}: {source}")]
    Parse { id: String, source: ParseError },
    #[error("{id}: {source}")]
    Reduce { id: String, source: ReduceError },
}

/// The corpus shipped with the crate.
pub fn default_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus.jsonl")
}

pub fn from_jsonl(src: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out: Vec<CorpusEntry> = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let e: CorpusEntry = serde_json::from_str(line).map_err(|source| CorpusError::Json { line: i + 1, source })?;
        if out.iter().any(|o| o.id == e.id) {
            return Err(CorpusError::Duplicate(e.id));
        }
        out.push(e);
    }
    Ok(out)
}

pub fn to_jsonl(entries: &[CorpusEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        s.push_str(&serde_json::to_string(e).expect("corpus entries serialize"));
        s.push('\n');
    }
    s
}

pub fn load(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let src = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.into(),
        source,
    })?;
    from_jsonl(&src)
}

pub fn save(path: &Path, entries: &[CorpusEntry]) -> Result<(), CorpusError> {
    std::fs::write(path, to_jsonl(entries)).map_err(|source| CorpusError::Io {
        path: path.into(),
        source,
    })
}

/// Recomputes every `expected` field from the engine.
pub fn regen(entries: &[CorpusEntry]) -> Result<Vec<CorpusEntry>, CorpusError> {
    entries
        .par_iter()
        .map(|e| {
            let expr = parse(&e.expr).map_err(|source| CorpusError::Parse {
                id: e.id.clone(),
                source,
            })?;
            let r = reduce(&expr).map_err(|source| CorpusError::Reduce {
                id: e.id.clone(),
                source,
            })?;
            Ok(CorpusEntry {
                expected: result_json(&r),
                ..e.clone()
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    /// Engine output differs from the stored result.
    Mismatch,
    /// The oracle disagrees with the engine; carries the largest error.
    Oracle(f64),
    Error(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryOutcome {
    pub id: String,
    pub failure: Option<Failure>,
    pub max_abs_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub outcomes: Vec<EntryOutcome>,
}

impl CheckReport {
    pub fn total(&self) -> usize {
        self.outcomes.len()
    }

    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.failure.is_none()).count()
    }

    pub fn failing(&self) -> impl Iterator<Item = &EntryOutcome> {
        self.outcomes.iter().filter(|o| o.failure.is_some())
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} pass", self.passed(), self.total())?;
        for o in self.failing() {
            match o.failure.as_ref().unwrap() {
                Failure::Mismatch => write!(f, ", {} mismatch", o.id)?,
                Failure::Oracle(err) => write!(f, ", {} oracle error {err:.3e}", o.id)?,
                Failure::Error(msg) => write!(f, ", {} error: {msg}", o.id)?,
            }
        }
        Ok(())
    }
}

fn check_entry(e: &CorpusEntry, samples: usize, tol: f64, seed: u64) -> EntryOutcome {
    let outcome = |failure, max_abs_err| EntryOutcome {
        id: e.id.clone(),
        failure,
        max_abs_err,
    };
    let expr = match parse(&e.expr) {
        Ok(x) => x,
        Err(err) => return outcome(Some(Failure::Error(err.to_string())), f64::NAN),
    };
    let r = match reduce(&expr) {
        Ok(r) => r,
        Err(err) => return outcome(Some(Failure::Error(err.to_string())), f64::NAN),
    };
    let rep = verify_result(&r, samples, tol, seed);
    if result_json(&r) != e.expected {
        outcome(Some(Failure::Mismatch), rep.max_abs_err)
    } else if !rep.pass {
        outcome(
            Some(Failure::Oracle(rep.max_abs_err.max(rep.max_imag_leak))),
            rep.max_abs_err,
        )
    } else {
        outcome(None, rep.max_abs_err)
    }
}

/// Reduces each entry, compares with the stored result and verifies it
/// against the oracle. Entries run concurrently.
pub fn check_with(entries: &[CorpusEntry], samples: usize, tol: f64, seed: u64) -> CheckReport {
    CheckReport {
        outcomes: entries.par_iter().map(|e| check_entry(e, samples, tol, seed)).collect(),
    }
}

pub fn check(entries: &[CorpusEntry]) -> CheckReport {
    check_with(entries, CHECK_SAMPLES, CHECK_TOL, DEFAULT_SEED)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, expr: &str) -> CorpusEntry {
        CorpusEntry {
            id: id.into(),
            expr: expr.into(),
            expected: Value::Null,
            note: String::new(),
        }
    }

    #[test]
    fn regen_then_check_passes_and_edits_are_caught() {
        let seed = vec![
            entry("X1", "[Y[1](a) x Y[1](b)][0]"),
            entry("X2", "[Y[2](a) x Y[2](b)][1]"),
        ];
        let mut entries = regen(&seed).unwrap();
        let rep = check_with(&entries, 10, 1e-10, 1);
        assert_eq!(rep.to_string(), "2/2 pass");
        entries[1].expected["rank"] = 7.into();
        assert_eq!(check_with(&entries, 10, 1e-10, 1).to_string(), "1/2 pass, X2 mismatch");
    }

    #[test]
    fn jsonl_round_trip() {
        let entries = regen(&[entry("X1", "Y[2](a)")]).unwrap();
        let text = to_jsonl(&entries);
        assert_eq!(from_jsonl(&text).unwrap(), entries);
        assert!(matches!(
            from_jsonl(&(text.clone() + &text)),
            Err(CorpusError::Duplicate(_))
        ));
    }
}
