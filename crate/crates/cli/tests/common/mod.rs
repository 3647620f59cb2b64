#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;
use tempfile::TempDir;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

pub fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("charfact").chain(args.iter().copied());
    let code = charfact_cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Scratch directory holding instance files for one test.
pub struct Workspace {
    dir: TempDir,
}

impl Workspace {
    pub fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn file(&self, name: &str, contents: &str) -> String {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path.to_str().unwrap().to_owned()
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

/// Real parts of a word-keyed coefficient map of 1 x 1 blocks.
pub fn scalar_coefficient(cert: &Value, word: &str) -> f64 {
    let entry = &cert["coefficients"][word];
    assert!(
        entry[0][0][1].as_f64().unwrap().abs() < 1e-15,
        "imaginary part in {entry}"
    );
    entry[0][0][0].as_f64().unwrap()
}

pub fn residual(cert: &Value, name: &str) -> f64 {
    cert["residuals"][name]
        .as_f64()
        .unwrap_or_else(|| panic!("no residual {name} in {cert}"))
}

pub const SHIFT: &str = r#"{"n": 1, "spaces": {"h": 1}, "T": [[[0]]]}"#;
pub const BLASCHKE: &str = r#"{"n": 1, "spaces": {"h": 1}, "T": [[[0.5]]]}"#;
pub const COISOMETRY: &str = r#"{"n": 2, "spaces": {"h": 1}, "T": [[[0.6]], [[0.8]]]}"#;
pub const SCALAR_PAIR: &str = r#"{"n": 1, "spaces": {"h1": 1, "h2": 1}, "A": [[[0]]], "B": [[[0]]], "L": [[0.5]]}"#;
