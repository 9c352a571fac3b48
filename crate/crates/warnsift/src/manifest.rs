//! Commit-pair manifests for `build-dataset`.
//!
//! ```json
//! { "pairs": [ {
//!     "repo_id": "acme-http",
//!     "fixed_commit": "9f2c1e0", "buggy_commit": "41d7aa3",
//!     "commit_message": "fix resource leak in client",
//!     "changed_files": ["src/main/java/acme/Client.java"],
//!     "buggy_report": "reports/acme-http/41d7aa3.xml",
//!     "fixed_report": "reports/acme-http/9f2c1e0.xml",
//!     "buggy_sources": "repos/acme-http/41d7aa3"
//! } ] }
//! ```
//!
//! Relative paths are resolved against the manifest's directory.
//! `buggy_sources` is a checkout of the buggy commit; `parents` (default 1)
//! is the fixing commit's parent count.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub repo_id: String,
    pub fixed_commit: String,
    pub buggy_commit: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub parents: u32,
    pub commit_message: String,
    pub changed_files: Vec<String>,
    pub buggy_report: PathBuf,
    pub fixed_report: PathBuf,
    pub buggy_sources: PathBuf,
}

fn one() -> u32 {
    1
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub pairs: Vec<PairEntry>,
}

impl Manifest {
    /// Reads a manifest and makes every relative path absolute with
    /// respect to the manifest's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut m: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in &mut m.pairs {
            for f in [&mut p.buggy_report, &mut p.fixed_report, &mut p.buggy_sources] {
                if f.is_relative() {
                    *f = base.join(&*f);
                }
            }
        }
        Ok(m)
    }
}
