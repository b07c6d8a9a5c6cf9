//! Output files and the run manifest.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), which round-trips
//! every f64 and keeps payloads byte-stable across runs.

use std::fs;
use std::path::PathBuf;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use vqb_core::ComplexMatrix;

use crate::error::CliResult;

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float serialized with 17 significant digits; non-finite values are refused.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(fmt_num(self.0)).map_err(S::Error::custom)?.serialize(s)
    }
}

/// List of floats written on one line.
pub struct NumList<'a>(pub &'a [f64]);

impl Serialize for NumList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(bad) = self.0.iter().find(|x| !x.is_finite()) {
            return Err(S::Error::custom(format!("non-finite value {bad}")));
        }
        let body: Vec<String> = self.0.iter().map(|&x| fmt_num(x)).collect();
        RawValue::from_string(format!("[{}]", body.join(", "))).map_err(S::Error::custom)?.serialize(s)
    }
}

/// Matrix as rows of `[re, im]` pairs, one row per line.
pub struct Matrix<'a>(pub &'a ComplexMatrix);

impl Serialize for Matrix<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        if !self.0.is_finite() {
            return Err(S::Error::custom("matrix has non-finite entries"));
        }
        let mut seq = s.serialize_seq(Some(self.0.dim()))?;
        for row in self.0.to_rows() {
            let cells: Vec<String> =
                row.iter().map(|z| format!("[{}, {}]", fmt_num(z.re), fmt_num(z.im))).collect();
            let raw = RawValue::from_string(format!("[{}]", cells.join(", "))).map_err(S::Error::custom)?;
            seq.serialize_element(&raw)?;
        }
        seq.end()
    }
}

/// Collects payload files in the output directory, then writes `manifest.json`.
pub struct RunOutput {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl RunOutput {
    pub fn create(dir: PathBuf) -> CliResult<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: vec![] })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        fs::write(self.dir.join(name), contents)?;
        self.files.push((name.to_string(), hex::encode(Sha256::digest(contents.as_bytes()))));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn finish(self, command: &str, params: Value, seed: Option<u64>) -> CliResult<PathBuf> {
        let outputs: Vec<Value> =
            self.files.iter().map(|(file, sha)| json!({ "file": file, "sha256": sha })).collect();
        let manifest = json!({
            "command": command,
            "params": params,
            "seed": seed,
            "version": env!("CARGO_PKG_VERSION"),
            "timestamp": chrono::Utc::now().to_rfc3339(),
            "outputs": outputs,
        });
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(self.dir)
    }
}

pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}
