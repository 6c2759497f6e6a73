//! Run reports, artifact hashes, the report cache and text rendering.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use skewgentle::gentle::{check_skew_gentle, SkewCheck};
use skewgentle::pipeline::{self, InstanceReport, Outcome, PipelineConfig};
use skewgentle::split::split_triple;

use crate::{CliError, CliResult, CACHE_ENV};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Serialize)]
pub struct Artifacts {
    pub input_sha256: String,
    /// Hash of the serialized `(Q^A, I^A)`; absent for invalid input.
    pub split_sha256: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub source: String,
    pub artifacts: Artifacts,
    pub total_ms: u64,
    pub cached: bool,
    #[serde(flatten)]
    pub report: InstanceReport,
}

/// Cache key: the input bytes and everything in the configuration that
/// can change the report.
fn cache_key(text: &str, config: &PipelineConfig) -> String {
    let fields: Vec<String> = config.fields.iter().map(|f| f.label()).collect();
    let descriptor = format!(
        "{}\0{}\0{}\0{}\0{}\0{}\0{}",
        env!("CARGO_PKG_VERSION"),
        pipeline::SCHEMA_VERSION,
        fields.join(","),
        config.level,
        config.resolution_cap,
        config.ext_degree,
        config.degree_cap
    );
    sha256_hex(format!("{descriptor}\0{text}").as_bytes())
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Runs the pipeline on one file's text, producing the report as JSON.
/// When the cache directory is set, reports are looked up and stored there.
pub fn verify_text(source: &str, text: &str, config: &PipelineConfig) -> CliResult<Value> {
    let cache = cache_dir().map(|d| d.join(format!("{}.json", cache_key(text, config))));
    if let Some(path) = &cache {
        if let Ok(bytes) = fs::read(path) {
            if let Ok(mut v) = serde_json::from_slice::<Value>(&bytes) {
                v["cached"] = Value::Bool(true);
                v["source"] = Value::String(source.to_string());
                return Ok(v);
            }
        }
    }
    let clock = Instant::now();
    let spec = skewgentle::dsl::parse(text).map_err(|e| CliError::Parse { path: source.into(), source: e })?;
    let split_sha256 = match check_skew_gentle(&spec)? {
        SkewCheck::Valid(t) => Some(sha256_hex(skewgentle::dsl::serialize(&split_triple(&t).spec).as_bytes())),
        SkewCheck::Invalid(_) => None,
    };
    let instance = Path::new(source).file_stem().map_or(source.to_string(), |s| s.to_string_lossy().into_owned());
    let report = pipeline::run(&spec, &instance, config)?;
    let run = RunReport {
        source: source.to_string(),
        artifacts: Artifacts { input_sha256: sha256_hex(text.as_bytes()), split_sha256 },
        total_ms: clock.elapsed().as_millis() as u64,
        cached: false,
        report,
    };
    let value = serde_json::to_value(&run).expect("reports serialize");
    if let Some(path) = &cache {
        let stored = serde_json::to_vec_pretty(&value).expect("reports serialize");
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
        }
        fs::write(path, stored).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    Ok(value)
}

pub fn outcome_of(report: &Value) -> Outcome {
    match report["outcome"].as_str() {
        Some("green") => Outcome::Green,
        Some("capped") => Outcome::Capped,
        _ => Outcome::Red,
    }
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().filter_map(|x| x.as_str().map(str::to_string)).collect())
        .unwrap_or_default()
}

/// Human-readable form of a run report.
pub fn render_text(report: &Value) -> String {
    let mut s = String::new();
    let outcome = report["outcome"].as_str().unwrap_or("?").to_uppercase();
    let fields = strings(&report["fields_tested"]).join(",");
    s.push_str(&format!(
        "{}: {outcome} [level {}, fields {fields}]{}\n",
        report["instance"].as_str().unwrap_or("?"),
        report["level"].as_str().unwrap_or("?"),
        if report["cached"].as_bool() == Some(true) { " (cached)" } else { "" },
    ));
    if report["split"]["status"] == "skipped" {
        s.push_str("  not a skew-gentle triple\n");
        for v in report["gentle"]["violations"].as_array().into_iter().flatten() {
            s.push_str(&format!("  axiom {}: {}\n", v["axiom"], strings(&v["witness"]).join(", ")));
        }
        return s;
    }
    let split = &report["split"];
    s.push_str(&format!(
        "  Q^A: {} vertices, {} arrows, {} relations; minus vertices [{}]\n",
        split["vertices"],
        split["arrows"],
        split["relations"],
        strings(&split["minus"]).join(", ")
    ));
    for f in report["per_field"].as_array().into_iter().flatten() {
        let mut parts = Vec::new();
        if let Some(e) = f["engine"].as_object().filter(|e| e.contains_key("dim")) {
            parts.push(format!("dim {} (oracle {})", e["dim"], e["oracle_dim"]));
        }
        if f["peirce"]["status"] == "skipped" {
            parts.push(format!("peirce {}", f["peirce"]["reason"].as_str().unwrap_or("skipped")));
        } else if let Some(d) = f["peirce"]["dims"].as_object() {
            parts.push(format!("B={} M={} N={} C={}", d["B"], d["M"], d["N"], d["C"]));
        }
        let h = &f["homology"];
        if h["status"] == "ran" {
            if let Some(st) = h["stratifying"].as_object() {
                parts.push(format!("stratifying {}", st["stratifying"]));
            }
            parts.push(format!("id {}/{}", render_dim(&h["id_left"]), render_dim(&h["id_right"])));
            parts.push(format!("gorenstein {}", h["gorenstein"]));
            parts.push(format!("selfinjective {}", h["selfinjective"]["direct"]));
            if !h["bimodule_pd"].is_null() {
                parts.push(format!("pd AeA {}", render_dim(&h["bimodule_pd"])));
            }
        }
        s.push_str(&format!(
            "  [{}] {}: {}\n",
            f["field"].as_str().unwrap_or("?"),
            f["outcome"].as_str().unwrap_or("?"),
            parts.join(", ")
        ));
        for r in strings(&f["red"]) {
            s.push_str(&format!("    red: {r}\n"));
        }
        for c in strings(&f["capped"]) {
            s.push_str(&format!("    capped: {c}\n"));
        }
    }
    if report["agreement"]["agrees"] == false {
        s.push_str(&format!("  fields disagree on {}\n", strings(&report["agreement"]["disagreements"]).join(", ")));
    }
    s
}

pub fn render_dim(v: &Value) -> String {
    match (v["kind"].as_str(), v["value"].as_u64()) {
        (Some("finite"), Some(n)) => n.to_string(),
        (Some("at_least"), Some(n)) => format!(">={n}"),
        _ => v.to_string(),
    }
}

/// The compact per-field homological summary printed by `report`.
pub fn compact(report: &Value) -> Vec<Value> {
    let mut out = Vec::new();
    for f in report["per_field"].as_array().into_iter().flatten() {
        let h = &f["homology"];
        out.push(serde_json::json!({
            "schema_version": pipeline::SCHEMA_VERSION,
            "instance": report["instance"],
            "field": f["field"],
            "stratifying": h["stratifying"]["stratifying"],
            "tor_dims": h["tor_dims"]["dims"],
            "id_left": h["id_left"],
            "id_right": h["id_right"],
            "gorenstein": h["gorenstein"],
            "selfinjective": h["selfinjective"]["direct"],
            "findim_witness": h["findim_witness"],
            "flags": h["flags"],
        }));
    }
    out
}
