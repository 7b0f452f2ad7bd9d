//! Shared helpers for tests that drive the `trcov` binary.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

mod fixtures;
pub use fixtures::FIXTURES;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the binary; returns exit code, stdout and stderr.
pub fn run(args: &[&str], threads: Option<&str>) -> (i32, Vec<u8>, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_trcov"));
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n);
    }
    let out = cmd.output().expect("run trcov");
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}
