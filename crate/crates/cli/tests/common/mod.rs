//! Golden CLI transcripts.
//!
//! Each case is a pair `golden/<name>.args` (one argument per line) and
//! `golden/<name>.out` holding the exit status, stdout and stderr of
//! `ordwb <args>`.  Set `UPDATE_GOLDEN=1` to rewrite the `.out` files.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    #[allow(dead_code)]
    pub name: String,
    pub expected: Option<String>,
    pub actual: String,
}

impl Case {
    pub fn matches(&self) -> bool {
        self.expected.as_deref() == Some(self.actual.as_str())
    }
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn transcript(args: &[String]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_ordwb"))
        .args(args)
        .env_remove("ORDWB_BUDGET")
        .output()
        .expect("run ordwb");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

/// Runs every case; with `UPDATE_GOLDEN` set, rewrites the expectations.
pub fn run_all() -> Vec<Case> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .expect("golden directory")
        .flatten()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "args"))
        .collect();
    names.sort();
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    names
        .into_iter()
        .map(|p| {
            let args: Vec<String> = std::fs::read_to_string(&p).unwrap().lines().map(str::to_string).collect();
            let actual = transcript(&args);
            let out = p.with_extension("out");
            if update {
                std::fs::write(&out, &actual).unwrap();
            }
            let expected = std::fs::read_to_string(&out).ok();
            Case { name: p.file_stem().unwrap().to_string_lossy().into_owned(), expected, actual }
        })
        .collect()
}
