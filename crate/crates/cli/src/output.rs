use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{Command, Format};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or inputs that changed since the manifest was written.
    Input(String),
    Output { path: PathBuf, source: std::io::Error },
    /// A replay produced different bytes.
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Output { .. } => 3,
            CliError::Diverged(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Output { path, .. } => write!(f, "cannot write {}", path.display()),
            CliError::Diverged(m) => write!(f, "replay diverged: {m}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Output { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to repeat a run. Thread counts and wall-clock times
/// are left out so the manifest itself replays byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub seed: Option<u64>,
    pub format: Vec<Format>,
    pub command: Command,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<OutputDigest>,
}

impl Manifest {
    pub fn load(path: &Path) -> anyhow::Result<Manifest> {
        let text = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_slice(&text)
            .map_err(|e| CliError::Input(format!("{}: not a casecenter manifest: {e}", path.display())).into())
    }
}

pub fn digest_inputs(paths: &[PathBuf]) -> anyhow::Result<Vec<InputDigest>> {
    paths
        .iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|e| casecenter::Error::Io { path: p.clone(), source: e })?;
            Ok(InputDigest {
                path: p.clone(),
                sha256: sha256_hex(&bytes),
            })
        })
        .collect()
}

/// Output files, held in memory until the run succeeds.
#[derive(Debug, Default)]
pub struct Outputs {
    files: BTreeMap<String, Vec<u8>>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.insert(name.into(), bytes);
    }

    pub fn add_json(&mut self, name: impl Into<String>, value: &impl Serialize) -> anyhow::Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(name, bytes);
        Ok(())
    }

    pub fn digests(&self) -> Vec<OutputDigest> {
        self.files
            .iter()
            .map(|(file, bytes)| OutputDigest {
                file: file.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect()
    }

    /// Writes every file plus `manifest.json` into `dir`.
    pub fn write(&self, dir: &Path, manifest: &Manifest) -> Result<(), CliError> {
        let fail = |path: &Path, source| CliError::Output {
            path: path.to_path_buf(),
            source,
        };
        fs::create_dir_all(dir).map_err(|e| fail(dir, e))?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| fail(&path, e))?;
        }
        let mut json = serde_json::to_vec_pretty(manifest).expect("manifest serializes");
        json.push(b'\n');
        let path = dir.join(MANIFEST);
        fs::write(&path, json).map_err(|e| fail(&path, e))
    }
}
