//! Artifact formatting. Every artifact embeds the resolved configuration.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::CliError;

/// A file produced by a run, not yet written.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub path: PathBuf,
    pub contents: String,
}

impl Artifact {
    pub fn write(&self) -> Result<(), CliError> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(&self.path, &self.contents).map_err(|e| CliError::Io(format!("{}: {e}", self.path.display())))
    }
}

/// Numbers in CSV cells: 17 significant digits, `inf` for infinities.
pub fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// JSON number, or the strings `"inf"`, `"-inf"`, `"nan"`.
pub fn json_num(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else if v.is_nan() {
        Value::from("nan")
    } else if v > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

fn config_line(config: &RunConfig) -> String {
    serde_json::to_string(config).expect("config serializes")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(config: &RunConfig, header: &[&str]) -> Self {
        let mut text = format!("# config: {}\n", config_line(config));
        text.push_str(&header.join(","));
        text.push('\n');
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn json_document<T: Serialize>(config: &RunConfig, result: &T) -> String {
    let doc = serde_json::json!({
        "schema": crate::config::SCHEMA,
        "config": config,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
    s.push('\n');
    s
}

/// Inserts the config as an XML comment after the opening `<svg>` tag.
pub fn svg_document(config: &RunConfig, svg: &str) -> String {
    let comment = format!("<!-- config: {} -->\n", config_line(config).replace("--", "- -"));
    match svg.find('\n') {
        Some(i) => format!("{}{}{}", &svg[..=i], comment, &svg[i + 1..]),
        None => format!("{svg}\n{comment}"),
    }
}

/// `out.svg` beside `out.csv`.
pub fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}
