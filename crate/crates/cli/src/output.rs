//! Artifact writers. Every file carries the manifest hash and the seed, and
//! nothing time- or host-dependent, so identical runs are byte-identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Outputs {
    pub dir: PathBuf,
    pub manifest_sha256: String,
    pub seed: u64,
}

/// Fixed-width float text for CSV cells.
pub fn num(x: f64) -> String {
    format!("{x:.15e}")
}

impl Outputs {
    pub fn new(dir: PathBuf, manifest_sha256: String, seed: u64) -> std::io::Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            manifest_sha256,
            seed,
        })
    }

    fn stamp(&self) -> Value {
        json!({ "manifest_sha256": self.manifest_sha256, "seed": self.seed })
    }

    /// `report.json`: `{manifest_sha256, seed, command, ...body}`.
    pub fn report(&self, command: &str, body: impl Serialize) -> std::io::Result<()> {
        let mut doc = self.stamp();
        doc["command"] = command.into();
        match serde_json::to_value(body).map_err(std::io::Error::other)? {
            Value::Object(map) => {
                for (k, v) in map {
                    doc[k.as_str()] = v;
                }
            }
            other => doc["result"] = other,
        }
        let mut text = serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::write(self.dir.join("report.json"), text)
    }

    /// `series.csv` with `#`-comment provenance lines before the header.
    pub fn series(&self, header: &[String], rows: &[Vec<String>]) -> std::io::Result<()> {
        let mut text = format!("# manifest_sha256={}\n# seed={}\n", self.manifest_sha256, self.seed);
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        fs::write(self.dir.join("series.csv"), text)
    }

    /// Writes `fields/<name>` for each blob plus `fields/index.json` with
    /// their digests; the binary containers have no room for provenance.
    pub fn fields(&self, blobs: &[(String, Vec<u8>)]) -> std::io::Result<()> {
        let dir = self.dir.join("fields");
        fs::create_dir_all(&dir)?;
        let mut digests = BTreeMap::new();
        for (name, bytes) in blobs {
            fs::write(dir.join(name), bytes)?;
            digests.insert(name.clone(), hex::encode(Sha256::digest(bytes)));
        }
        let mut doc = self.stamp();
        doc["files"] = serde_json::to_value(digests).map_err(std::io::Error::other)?;
        let mut text = serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::write(dir.join("index.json"), text)
    }
}

pub fn resolve_dir(flag: Option<&Path>, manifest: Option<&Path>) -> PathBuf {
    flag.or(manifest).map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("out"))
}
