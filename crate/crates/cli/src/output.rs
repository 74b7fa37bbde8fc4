//! Output directories and the provenance header on every file.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// An input file read once, with its digest.
pub struct Input {
    pub name: String,
    pub text: String,
    pub sha256: String,
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Usage(format!("{}: not valid UTF-8", path.display())))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(Input { name, text, sha256 })
}

/// Provenance lines shared by every file a command writes. Input paths are
/// reduced to file names so that outputs do not depend on the working
/// directory.
#[derive(Debug, Clone)]
pub struct Provenance {
    lines: Vec<String>,
}

impl Provenance {
    pub fn new(command: &str, seed: Option<u64>, inputs: &[&Input]) -> Self {
        let mut lines = vec![
            format!("vague {}", env!("CARGO_PKG_VERSION")),
            format!("command: {command}"),
            match seed {
                Some(s) => format!("seed: {s}"),
                None => "seed: none".into(),
            },
        ];
        for i in inputs {
            lines.push(format!("input: {} sha256={}", i.name, i.sha256));
        }
        Provenance { lines }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// `# `-prefixed lines, for CSV, TOML and plain text.
    pub fn hash_comment(&self) -> String {
        self.lines.iter().map(|l| format!("# {l}\n")).collect()
    }

    /// A single HTML comment, for Markdown.
    pub fn html_comment(&self) -> String {
        format!("<!--\n{}\n-->\n", self.lines.join("\n"))
    }
}

pub struct OutDir {
    root: PathBuf,
    provenance: Provenance,
}

impl OutDir {
    pub fn create(root: &Path, provenance: Provenance) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|source| CliError::Write {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(OutDir {
            root: root.to_path_buf(),
            provenance,
        })
    }

    /// Write `body` under the header style matching the file extension.
    pub fn write(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        let header = if name.ends_with(".md") {
            self.provenance.html_comment()
        } else {
            self.provenance.hash_comment()
        };
        fs::write(&path, format!("{header}{body}")).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }
}
