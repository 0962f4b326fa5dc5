//! Run manifests: what was run, with which inputs, and what it wrote.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use osclab_core::geometry::DomainSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: &str = "1";
pub const FILE_NAME: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command line without the program name and `--out`.
    pub args: Vec<String>,
    pub domain_file: Option<String>,
    pub domain: Option<DomainSpec>,
    pub params: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<String>,
    pub versions: BTreeMap<String, String>,
    /// SHA-256 over every field except `outputs` and `hash`.
    pub hash: String,
}

#[derive(Serialize)]
struct Hashed<'a> {
    command: &'a str,
    args: &'a [String],
    domain: &'a Option<DomainSpec>,
    params: &'a BTreeMap<String, serde_json::Value>,
    versions: &'a BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        args: Vec<String>,
        domain_file: Option<String>,
        domain: Option<DomainSpec>,
        params: BTreeMap<String, serde_json::Value>,
    ) -> Self {
        let versions = BTreeMap::from([
            ("osclab".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("format".to_string(), FORMAT_VERSION.to_string()),
        ]);
        let body = Hashed { command, args: &args, domain: &domain, params: &params, versions: &versions };
        let bytes = serde_json::to_vec(&body).expect("manifest serializes");
        let hash = hex::encode(Sha256::digest(&bytes));
        Self { command: command.to_string(), args, domain_file, domain, params, outputs: Vec::new(), versions, hash }
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
    }
}

/// Drops `--out DIR` and `--out=DIR` from a command line.
pub fn strip_out(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_outputs_and_is_stable() {
        let mut a = RunManifest::new("search", vec!["search".into(), "--n".into(), "4".into()], None, None, BTreeMap::new());
        let b = RunManifest::new("search", vec!["search".into(), "--n".into(), "4".into()], None, None, BTreeMap::new());
        a.outputs.push("search.json".into());
        assert_eq!(a.hash, b.hash);
        assert_eq!(a.hash.len(), 64);
        let c = RunManifest::new("search", vec!["search".into(), "--n".into(), "5".into()], None, None, BTreeMap::new());
        assert_ne!(a.hash, c.hash);
    }

    #[test]
    fn out_flag_is_removed() {
        let args: Vec<String> = ["audit", "--out", "x", "--seed", "3", "--out=y"].iter().map(|s| s.to_string()).collect();
        assert_eq!(strip_out(&args), vec!["audit", "--seed", "3"]);
    }
}
