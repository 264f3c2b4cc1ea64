//! On-disk datasets: `scenario_<k>/scene_<i>.png`, `scenario_<k>/answer_<i>.png`
//! and a `manifest.json` with a SHA-256 per file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codec::{answer_from_gray, gray_from_png, gray_to_png, scene_from_png, scene_to_png, CodecError};
use crate::grid::{render_answer, AnswerPath, Scene};
use crate::par::Execution;
use crate::scenegen::{generate_scene, GenConfig, GenError, ScenarioId};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_FORMAT: &str = "maskplan-dataset/1";

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{path}: {source}")]
    Codec { path: PathBuf, source: CodecError },
    #[error("{path}: malformed manifest: {reason}")]
    Manifest { path: PathBuf, reason: String },
    #[error("{path}: checksum does not match manifest")]
    ChecksumMismatch { path: PathBuf },
    #[error("dataset has no scenario {0}")]
    MissingScenario(u8),
    #[error("scenario {scenario} has no scene {index}")]
    MissingScene { scenario: u8, index: u32 },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioManifest {
    pub scenario: u8,
    pub count: u32,
    pub seed: u64,
    pub fraction: f64,
    /// File name (relative to the scenario directory) → SHA-256 hex.
    pub files: BTreeMap<String, String>,
}

impl ScenarioManifest {
    pub fn config(&self) -> Result<GenConfig, DatasetError> {
        let scenario = ScenarioId::new(self.scenario).ok_or(DatasetError::MissingScenario(self.scenario))?;
        Ok(GenConfig::new(scenario, self.count, self.seed).with_fraction(self.fraction))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub scenarios: Vec<ScenarioManifest>,
}

pub fn scenario_dir_name(scenario: u8) -> String {
    format!("scenario_{scenario}")
}

pub fn scene_file_name(index: u32) -> String {
    format!("scene_{index:05}.png")
}

pub fn answer_file_name(index: u32) -> String {
    format!("answer_{index:05}.png")
}

/// Generates every config into `out_dir` and writes the manifest.
/// Output bytes depend only on the configs.
pub fn generate_dataset(
    configs: &[GenConfig],
    out_dir: &Path,
    exec: Execution,
) -> Result<Manifest, DatasetError> {
    let mut scenarios = Vec::with_capacity(configs.len());
    for config in configs {
        config.validate()?;
        let k = config.scenario.get();
        let dir = out_dir.join(scenario_dir_name(k));
        std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;

        let encoded = exec.try_map(config.count as usize, |i| {
            let (scene, answer) = generate_scene(config, i as u32)?;
            let to_err = |source| DatasetError::Codec {
                path: dir.join(scene_file_name(i as u32)),
                source,
            };
            let scene_png = scene_to_png(&scene).map_err(to_err)?;
            let answer_png = gray_to_png(&render_answer(&answer)).map_err(to_err)?;
            Ok::<_, DatasetError>((scene_png, answer_png))
        })?;

        let mut files = BTreeMap::new();
        for (i, (scene_png, answer_png)) in encoded.into_iter().enumerate() {
            for (name, bytes) in [
                (scene_file_name(i as u32), scene_png),
                (answer_file_name(i as u32), answer_png),
            ] {
                let path = dir.join(&name);
                std::fs::write(&path, &bytes).map_err(io_err(&path))?;
                files.insert(name, sha256_hex(&bytes));
            }
        }
        scenarios.push(ScenarioManifest {
            scenario: k,
            count: config.count,
            seed: config.seed,
            fraction: config.random_obstacle_fraction,
            files,
        });
    }
    let manifest = Manifest {
        format: MANIFEST_FORMAT.to_string(),
        scenarios,
    };
    let path = out_dir.join(MANIFEST_FILE);
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    std::fs::write(&path, json).map_err(io_err(&path))?;
    Ok(manifest)
}

/// A dataset opened for reading. Every file is checked against the manifest
/// checksum as it is loaded.
#[derive(Debug, Clone)]
pub struct Dataset {
    root: PathBuf,
    manifest: Manifest,
}

impl Dataset {
    pub fn open(root: &Path) -> Result<Self, DatasetError> {
        let path = root.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
        let manifest: Manifest = serde_json::from_str(&text).map_err(|e| DatasetError::Manifest {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        if manifest.format != MANIFEST_FORMAT {
            return Err(DatasetError::Manifest {
                path,
                reason: format!("unknown format `{}`", manifest.format),
            });
        }
        Ok(Dataset {
            root: root.to_path_buf(),
            manifest,
        })
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn scenario(&self, scenario: u8) -> Result<&ScenarioManifest, DatasetError> {
        self.manifest
            .scenarios
            .iter()
            .find(|s| s.scenario == scenario)
            .ok_or(DatasetError::MissingScenario(scenario))
    }

    fn read_verified(&self, entry: &ScenarioManifest, name: &str) -> Result<(PathBuf, Vec<u8>), DatasetError> {
        let path = self.root.join(scenario_dir_name(entry.scenario)).join(name);
        let expected = entry.files.get(name).ok_or_else(|| DatasetError::Manifest {
            path: self.root.join(MANIFEST_FILE),
            reason: format!("no checksum for {}", path.display()),
        })?;
        let bytes = std::fs::read(&path).map_err(io_err(&path))?;
        if &sha256_hex(&bytes) != expected {
            return Err(DatasetError::ChecksumMismatch { path });
        }
        Ok((path, bytes))
    }

    pub fn load(&self, scenario: u8, index: u32) -> Result<(Scene, AnswerPath), DatasetError> {
        let entry = self.scenario(scenario)?;
        if index >= entry.count {
            return Err(DatasetError::MissingScene { scenario, index });
        }
        let (scene_path, scene_bytes) = self.read_verified(entry, &scene_file_name(index))?;
        let scene = scene_from_png(&scene_bytes).map_err(|source| DatasetError::Codec {
            path: scene_path,
            source,
        })?;
        let (answer_path, answer_bytes) = self.read_verified(entry, &answer_file_name(index))?;
        let answer = gray_from_png(&answer_bytes)
            .and_then(|img| answer_from_gray(&scene, &img))
            .map_err(|source| DatasetError::Codec {
                path: answer_path,
                source,
            })?;
        Ok((scene, answer))
    }

    /// Re-hashes every file listed in the manifest.
    pub fn verify(&self, exec: Execution) -> Result<(), DatasetError> {
        for entry in &self.manifest.scenarios {
            let names: Vec<&String> = entry.files.keys().collect();
            exec.try_map(names.len(), |i| self.read_verified(entry, names[i]).map(|_| ()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_names_are_zero_padded() {
        assert_eq!(scene_file_name(7), "scene_00007.png");
        assert_eq!(answer_file_name(12345), "answer_12345.png");
        assert_eq!(scenario_dir_name(3), "scenario_3");
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
