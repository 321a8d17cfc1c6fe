//! The single place results reach the disk.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::scenario::Scenario;

/// Layout of every JSON file: which command wrote it, the resolved scenario
/// and the command's result. Nothing time- or host-dependent goes in, so the
/// same scenario and seed give the same bytes.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    scenario: &'a Scenario,
    result: &'a T,
}

pub struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn json<T: Serialize>(&mut self, name: &str, command: &str, scenario: &Scenario, result: &T) -> Result<()> {
        let envelope = Envelope {
            command,
            version: env!("CARGO_PKG_VERSION"),
            scenario,
            result,
        };
        let mut text = serde_json::to_string_pretty(&envelope)?;
        text.push('\n');
        self.text(name, &text)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    pub fn report(&self) {
        for path in &self.written {
            eprintln!("wrote {}", path.display());
        }
    }
}

/// Serializes rows with a header into CSV text.
pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    Ok(String::from_utf8(writer.into_inner()?)?)
}
