//! Writing outputs either into the `--out` directory or to stdout, each
//! tagged with the manifest hash.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use serde::Serialize;

use crate::manifest::{RunManifest, FILE_NAME};

pub struct Sink {
    dir: Option<PathBuf>,
    pub manifest: RunManifest,
}

/// `value` as a JSON object with a `manifest_hash` field added.
pub fn tagged<T: Serialize>(hash: &str, value: &T) -> serde_json::Value {
    let mut v = serde_json::to_value(value).expect("output serializes");
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("manifest_hash".to_string(), serde_json::Value::String(hash.to_string()));
    }
    v
}

impl Sink {
    pub fn new(dir: Option<PathBuf>, manifest: RunManifest) -> anyhow::Result<Self> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Self { dir, manifest })
    }

    /// Writes `body` to `name` inside the output directory, or to stdout
    /// when `to_stdout` holds and there is no directory.
    pub fn emit(&mut self, name: &str, body: &[u8], to_stdout: bool) -> anyhow::Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
                self.manifest.outputs.push(name.to_string());
            }
            None if to_stdout => {
                let mut out = std::io::stdout().lock();
                out.write_all(body)?;
                out.flush()?;
            }
            None => {}
        }
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T, to_stdout: bool) -> anyhow::Result<()> {
        let mut body = serde_json::to_vec_pretty(&tagged(&self.manifest.hash, value))?;
        body.push(b'\n');
        self.emit(name, &body, to_stdout)
    }

    pub fn json_lines<T: Serialize>(&mut self, name: &str, rows: &[T], to_stdout: bool) -> anyhow::Result<()> {
        let mut body = Vec::new();
        for r in rows {
            serde_json::to_writer(&mut body, &tagged(&self.manifest.hash, r))?;
            body.push(b'\n');
        }
        self.emit(name, &body, to_stdout)
    }

    /// CSV with a leading `# manifest_hash=...` comment line.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>], to_stdout: bool) -> anyhow::Result<()> {
        let mut body = format!("# manifest_hash={}\n", self.manifest.hash).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut body);
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        self.emit(name, &body, to_stdout)
    }

    /// Writes the manifest when there is an output directory.
    pub fn finish(self) -> anyhow::Result<()> {
        if let Some(d) = &self.dir {
            let mut body = serde_json::to_vec_pretty(&self.manifest)?;
            body.push(b'\n');
            std::fs::write(d.join(FILE_NAME), body)?;
        }
        Ok(())
    }
}
