//! Corpus directories: one DSL file per instance plus `manifest.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use skewgentle::corpus::{corpus_instance, GenConfig};
use skewgentle::dsl::serialize;

use crate::report::sha256_hex;
use crate::{CliError, CliResult, QUIVER_EXT};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub file: String,
    pub sha256: String,
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    pub special: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub generator: String,
    pub config: GenConfig,
    pub instances: Vec<ManifestEntry>,
}

pub fn instance_id(config: &GenConfig, index: usize) -> String {
    format!("s{}_{index:04}", config.seed)
}

/// Generates `config.count` instances into `dir` and writes the manifest.
pub fn write_corpus(config: &GenConfig, dir: &Path) -> CliResult<Manifest> {
    config.validate()?;
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    let mut instances = Vec::with_capacity(config.count);
    for i in 0..config.count {
        let triple = corpus_instance(config, i)?;
        let text = serialize(&triple.base);
        let id = instance_id(config, i);
        let file = format!("{id}.{QUIVER_EXT}");
        let path = dir.join(&file);
        fs::write(&path, &text).map_err(|source| CliError::Io { path, source })?;
        instances.push(ManifestEntry {
            id,
            file,
            sha256: sha256_hex(text.as_bytes()),
            vertices: triple.base.vertices.len(),
            arrows: triple.base.arrows.len(),
            relations: triple.base.relations.len(),
            special: triple.special_vertices.iter().map(|&v| triple.base.vertices[v].clone()).collect(),
        });
    }
    let manifest = Manifest {
        schema_version: skewgentle::pipeline::SCHEMA_VERSION,
        generator: "ChaCha8Rng seed_from_u64(seed), stream = instance index".into(),
        config: config.clone(),
        instances,
    };
    let path = dir.join(MANIFEST);
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&path, body).map_err(|source| CliError::Io { path, source })?;
    Ok(manifest)
}
