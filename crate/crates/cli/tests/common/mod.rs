#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pdm-gk"))
        .args(args)
        .output()
        .expect("spawn pdm-gk");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn run_ok(args: &[&str]) -> String {
    let r = run(args);
    assert_eq!(r.code, 0, "args {args:?} failed: {}", r.stderr);
    r.stdout
}

pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub footers: BTreeMap<String, f64>,
}

impl Csv {
    /// Index of a named column.
    pub fn col(&self, name: &str) -> usize {
        self.header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name} in {:?}", self.header))
    }

    /// Rows whose first column equals `alpha` (bitwise, as emitted).
    pub fn rows_for_alpha(&self, alpha: f64) -> Vec<&Vec<f64>> {
        self.rows.iter().filter(|r| r[0] == alpha).collect()
    }

    /// The single footer whose key starts with `prefix`.
    pub fn footer_starting(&self, prefix: &str) -> f64 {
        let hits: Vec<_> = self
            .footers
            .iter()
            .filter(|(k, _)| k.starts_with(prefix))
            .collect();
        assert_eq!(hits.len(), 1, "footer {prefix}* in {:?}", self.footers);
        *hits[0].1
    }
}

pub fn parse_csv(text: &str) -> Csv {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("csv header")
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    let mut footers = BTreeMap::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest.split_once(" = ").expect("footer `key = value`");
            footers.insert(k.to_string(), v.parse().expect("footer value"));
        } else {
            rows.push(
                line.split(',')
                    .map(|c| c.parse::<f64>().expect("numeric cell"))
                    .collect(),
            );
        }
    }
    Csv {
        header,
        rows,
        footers,
    }
}

/// Private scratch directory for a test; unique per process and name.
pub fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pdm-gk-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}
