//! Golden-file harness shared by the golden and acceptance tests.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(crate_dir().join("tests/golden/cases.txt")).expect("cases.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').expect("name | args");
            Case {
                name: name.trim().to_string(),
                args: args.split_whitespace().map(str::to_string).collect(),
            }
        })
        .collect()
}

/// Standard output followed by an `exit=` line.
pub fn run_case(bin: &Path, case: &Case, threads: usize) -> String {
    let output = Command::new(bin)
        .args(&case.args)
        .current_dir(crate_dir())
        .env("RAYON_NUM_THREADS", threads.to_string())
        .env_remove("VARIETAL_CEILING")
        .output()
        .expect("run varietal");
    let mut text = String::from_utf8(output.stdout).expect("utf-8 output");
    text.push_str(&format!("exit={}\n", output.status.code().unwrap_or(-1)));
    text
}

/// Runs every case twice on one thread and twice on four, comparing all
/// runs with the stored golden file. Returns the mismatching cases.
pub fn check_goldens(bin: &Path) -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for case in cases() {
        let path = crate_dir().join("tests/golden").join(format!("{}.out", case.name));
        let runs: Vec<String> = [1, 1, 4, 4].iter().map(|&t| run_case(bin, &case, t)).collect();
        if update {
            std::fs::write(&path, &runs[0]).expect("write golden");
        }
        let stored = std::fs::read_to_string(&path).unwrap_or_default();
        if runs.iter().any(|r| *r != stored) {
            bad.push(case.name);
        }
    }
    bad
}
