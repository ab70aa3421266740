#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_bjlab");

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

fn finish(out: Output) -> Run {
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

/// Runs the binary with a scratch bug directory and no inherited seed.
pub fn bjlab(args: &[&str]) -> Run {
    let dir = tempfile::tempdir().expect("tempdir");
    bjlab_in(args, dir.path())
}

pub fn bjlab_in(args: &[&str], bug_dir: &Path) -> Run {
    let out = Command::new(BIN)
        .args(args)
        .env_remove("BJLAB_SEED")
        .env("BJLAB_BUG_DIR", bug_dir)
        .output()
        .expect("binary runs");
    finish(out)
}

pub fn bjlab_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("BJLAB_SEED").env("BJLAB_BUG_DIR", dir.path());
    for (k, v) in env {
        cmd.env(k, v);
    }
    finish(cmd.output().expect("binary runs"))
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let schema: Value =
            serde_json::from_str(include_str!("../../schema/report.schema.json")).expect("schema is JSON");
        jsonschema::validator_for(&schema).expect("schema compiles")
    })
}

/// Panics with every violation if `report` does not match the schema.
pub fn assert_schema(report: &Value) {
    let errors: Vec<String> = validator()
        .iter_errors(report)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}\n{report:#}");
}
