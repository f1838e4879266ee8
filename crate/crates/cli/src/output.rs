//! CSV rendering and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MANIFEST: &str = "manifest.json";

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed,
/// exponent form outside `1e-5 <= |x| < 1e12`. Negative zero prints as 0.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table with a fixed header; cells are preformatted.
pub struct Table {
    header: &'static str,
    body: String,
}

pub enum Cell {
    Int(usize),
    Num(f64),
}

impl Table {
    pub fn new(header: &'static str) -> Self {
        Table { header, body: String::new() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            match c {
                Cell::Int(n) => write!(self.body, "{n}").unwrap(),
                Cell::Num(x) => self.body.push_str(&fmt_g12(*x)),
            }
        }
        self.body.push('\n');
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.header, self.body)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub started_utc: String,
    pub finished_utc: String,
    pub config: serde_json::Value,
    /// Command-specific facts worth keeping beside the data.
    pub notes: serde_json::Value,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    format!("{:x}", Sha256::digest(data))
}

/// Collects written files so every one lands in the manifest.
pub struct OutputDir {
    root: PathBuf,
    files: Vec<FileEntry>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::config(format!("cannot create {}: {e}", root.display())))?;
        Ok(OutputDir { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.root.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(FileEntry {
            name: name.to_string(),
            bytes: contents.len() as u64,
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn write_table(&mut self, name: &str, table: &Table) -> CliResult<()> {
        self.write(name, &table.render())
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    pub fn finish(self, manifest: Manifest) -> CliResult<PathBuf> {
        let path = self.root.join(MANIFEST);
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::config(format!("manifest: {e}")))?;
        fs::write(&path, text + "\n")?;
        Ok(path)
    }
}

/// Outcome of re-checking a manifest.
#[derive(Debug, Default)]
pub struct VerifyReport {
    pub checked: usize,
    pub problems: Vec<String>,
}

pub fn verify(dir: &Path) -> CliResult<VerifyReport> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let manifest: Manifest = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut report = VerifyReport::default();
    for f in &manifest.files {
        report.checked += 1;
        match fs::read(dir.join(&f.name)) {
            Err(e) => report.problems.push(format!("{}: {e}", f.name)),
            Ok(data) => {
                let digest = sha256_hex(&data);
                if digest != f.sha256 {
                    report.problems.push(format!("{}: checksum {digest} != {}", f.name, f.sha256));
                }
            }
        }
    }
    Ok(report)
}
