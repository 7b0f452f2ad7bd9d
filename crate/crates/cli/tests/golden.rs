//! Byte-exact golden outputs, one fixture per subcommand.
//!
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p trcov-cli --test golden`.

mod common;

use common::{golden_dir, run, FIXTURES};
use std::path::{Path, PathBuf};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in FIXTURES {
        let (code, stdout, stderr) = run(args, None);
        assert_eq!(code, 0, "{name}: {stderr}");
        let path = golden_dir().join(name);
        if update {
            std::fs::write(&path, &stdout).unwrap();
            continue;
        }
        let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(stdout == expected, "{name} differs from golden file");
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    for (name, args) in FIXTURES {
        let (_, one, _) = run(args, Some("1"));
        let (_, four, _) = run(args, Some("4"));
        assert!(one == four, "{name} differs between 1 and 4 threads");
    }
}

#[test]
fn config_supplies_the_potential_and_sweep() {
    let cfg = fixture("well.json");
    let cfg = cfg.to_str().unwrap();
    let (code, out, err) = run(&["--config", cfg, "--format", "csv", "energies"], None);
    assert_eq!(code, 0, "{err}");
    let (_, flags, _) = run(
        &["--format", "csv", "energies", "--U", "1", "--q", "2"],
        None,
    );
    assert_eq!(out, flags);

    let (code, out, err) = run(
        &[
            "--config",
            cfg,
            "--format",
            "csv",
            "sweep",
            "--quantity",
            "libration",
            "--E",
            "0.18",
        ],
        None,
    );
    assert_eq!(code, 0, "{err}");
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("index,value,t_L,"));
}

#[test]
fn flags_override_config() {
    let cfg = fixture("well.json");
    let cfg = cfg.to_str().unwrap();
    let (_, overridden, _) = run(
        &["--config", cfg, "--format", "csv", "energies", "--q", "1"],
        None,
    );
    let (_, direct, _) = run(
        &["--format", "csv", "energies", "--U", "1", "--q", "1"],
        None,
    );
    assert_eq!(overridden, direct);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let (code, stdout, _) = run(
        &[
            "--out",
            path.to_str().unwrap(),
            "kinematics",
            "--E",
            "0.18",
            "--U",
            "0.5",
        ],
        None,
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(
        written,
        std::fs::read(golden_dir().join("kinematics.json")).unwrap()
    );
}
