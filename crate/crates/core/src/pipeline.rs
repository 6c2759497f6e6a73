//! The verification pipeline for one triple over a list of fields.
//!
//! Every check whose answer is expected to be "yes" is recorded either as
//! red (a definite failure) or as capped (no answer within the caps). The
//! report is plain data; rendering lives with the caller.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::engine::oracle::oracle_dimension;
use crate::engine::{realize, PresentedAlgebra, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::gentle::{check_gentle, check_skew_gentle, SkewCheck, SkewGentleTriple};
use crate::homology::{homology_report_with, HomologyOptions, HomologyReport, DEFAULT_EXT_DEGREE};
use crate::morita::{morita_report, peirce, MoritaReport};
use crate::quiver::QuiverSpec;
use crate::resolution::{ProjDim, DEFAULT_RESOLUTION_CAP};
use crate::split::{split_triple, structure_probes, ProbeReport, SplitQuiver};

pub const SCHEMA_VERSION: u32 = 1;
/// Exhaustive associativity is checked up to this dimension.
pub const ASSOCIATIVITY_LIMIT: usize = 40;

pub const VACUOUS: &str = "vacuous: Sp is empty, so the minus idempotent is zero";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Structural,
    Homological,
    Full,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Structural => "structural",
            Level::Homological => "homological",
            Level::Full => "full",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "structural" => Ok(Level::Structural),
            "homological" => Ok(Level::Homological),
            "full" => Ok(Level::Full),
            _ => Err(Error::InvalidConfig(format!("unknown level {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub level: Level,
    pub fields: Vec<FieldSpec>,
    pub resolution_cap: usize,
    pub ext_degree: usize,
    pub degree_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            level: Level::Full,
            fields: vec![FieldSpec::Rationals],
            resolution_cap: DEFAULT_RESOLUTION_CAP,
            ext_degree: DEFAULT_EXT_DEGREE,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

/// A check block that either ran or was skipped for a stated reason.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Block<T> {
    Ran(T),
    Skipped { reason: String },
}

impl<T> Block<T> {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Block::Skipped { reason: reason.into() }
    }

    pub fn ran(&self) -> Option<&T> {
        match self {
            Block::Ran(t) => Some(t),
            Block::Skipped { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Green,
    Red,
    Capped,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Green => 0,
            Outcome::Red => 1,
            Outcome::Capped => 3,
        }
    }

    fn from_lists(red: &[String], capped: &[String]) -> Self {
        if !red.is_empty() {
            Outcome::Red
        } else if !capped.is_empty() {
            Outcome::Capped
        } else {
            Outcome::Green
        }
    }

    fn combine(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Red, _) | (_, Outcome::Red) => Outcome::Red,
            (Outcome::Capped, _) | (_, Outcome::Capped) => Outcome::Capped,
            _ => Outcome::Green,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSummary {
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    pub minus: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineCheck {
    pub dim: usize,
    pub oracle_dim: usize,
    pub graded: Vec<usize>,
    /// Dimension of `A(Q, I)` by the engine and by the oracle.
    pub base_dim: usize,
    pub base_oracle_dim: usize,
    /// `None` above [`ASSOCIATIVITY_LIMIT`].
    pub associative: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldReport {
    pub field: String,
    pub engine: Block<EngineCheck>,
    pub probes: Block<ProbeReport>,
    pub peirce: Block<MoritaReport>,
    pub homology: Block<HomologyReport>,
    pub red: Vec<String>,
    pub capped: Vec<String>,
    pub outcome: Outcome,
    pub timings_ms: Vec<(String, u64)>,
}

impl FieldReport {
    /// The field-independent content, compared across fields.
    pub fn signature(&self) -> serde_json::Value {
        let engine = self.engine.ran().map(|e| serde_json::json!([e.dim, e.base_dim, e.associative]));
        let probes = self.probes.ran().map(|p| p.passed);
        let peirce = self.peirce.ran().map(|m| serde_json::json!([m.dims, m.c_factors, m.verdicts]));
        let homology = self.homology.ran().map(|h| {
            serde_json::json!({
                "stratifying": h.stratifying.as_ref().map(|s| (s.stratifying, s.tensor_dim, s.aea_dim)),
                "tor_dims": h.tor_dims.as_ref().map(|t| (t.tor0, t.dims.clone())),
                "bimodule_pd": h.bimodule_pd,
                "id": (h.id_left, h.id_right),
                "gorenstein": h.gorenstein,
                "selfinjective": h.selfinjective.direct,
                "findim_witness": h.findim_witness,
            })
        });
        serde_json::json!({
            "engine": engine,
            "probes": probes,
            "peirce": peirce,
            "homology": homology,
            "outcome": self.outcome,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub agrees: bool,
    /// Keys of the field signature that differ from the first field.
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceReport {
    pub schema_version: u32,
    pub instance: String,
    pub level: Level,
    pub fields_tested: Vec<String>,
    pub gentle: serde_json::Value,
    pub split: Block<SplitSummary>,
    pub per_field: Vec<FieldReport>,
    pub agreement: Agreement,
    pub outcome: Outcome,
}

impl InstanceReport {
    pub fn red(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.split.ran().is_none() {
            out.push("input is not a skew-gentle triple".to_string());
        }
        for f in &self.per_field {
            out.extend(f.red.iter().map(|r| format!("[{}] {r}", f.field)));
        }
        if !self.agreement.agrees {
            out.push(format!("fields disagree on {}", self.agreement.disagreements.join(", ")));
        }
        out
    }
}

struct Recorder {
    red: Vec<String>,
    capped: Vec<String>,
    timings: Vec<(String, u64)>,
    clock: Instant,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            red: Vec::new(),
            capped: Vec::new(),
            timings: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.red.push(what());
        }
    }

    fn lap(&mut self, stage: &str) {
        self.timings.push((stage.to_string(), self.clock.elapsed().as_millis() as u64));
        self.clock = Instant::now();
    }

    /// Splits cap errors off from other errors.
    fn absorb<T>(&mut self, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(t) => Ok(Some(t)),
            Err(e @ Error::CapExceeded { .. }) => {
                self.capped.push(e.to_string());
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn expect_dim(&mut self, what: &str, d: ProjDim, bound: Option<usize>) {
        match (d, bound) {
            (ProjDim::AtLeast(n), _) => self.capped.push(format!("{what} >= {n}")),
            (ProjDim::Finite(n), Some(b)) if n > b => self.red.push(format!("{what} = {n} exceeds {b}")),
            _ => {}
        }
    }
}

fn check_engine<F: Field>(
    triple: &SkewGentleTriple,
    sq: &SplitQuiver,
    alg: &PresentedAlgebra<F>,
    config: &PipelineConfig,
    rec: &mut Recorder,
) -> Result<Option<EngineCheck>> {
    let f = alg.field();
    let Some(oracle_dim) = rec.absorb(oracle_dimension(&sq.spec, f, config.degree_cap))? else {
        return Ok(None);
    };
    let mut base = triple.base.clone();
    base.special.clear();
    let Some(base_alg) = rec.absorb(realize(&base, f, config.degree_cap))? else {
        return Ok(None);
    };
    let Some(base_oracle_dim) = rec.absorb(oracle_dimension(&base, f, config.degree_cap))? else {
        return Ok(None);
    };
    let associative = (alg.dimension() <= ASSOCIATIVITY_LIMIT).then(|| alg.associativity_witness().is_none());
    let e = EngineCheck {
        dim: alg.dimension(),
        oracle_dim,
        graded: alg.graded_dimensions(),
        base_dim: base_alg.dimension(),
        base_oracle_dim,
        associative,
    };
    rec.expect(e.dim == e.oracle_dim, || format!("engine dimension {} differs from oracle {}", e.dim, e.oracle_dim));
    rec.expect(e.base_dim == e.base_oracle_dim, || {
        format!("base dimension {} differs from oracle {}", e.base_dim, e.base_oracle_dim)
    });
    rec.expect(associative != Some(false), || "multiplication is not associative".to_string());
    Ok(Some(e))
}

fn check_homology(h: &HomologyReport, triple: &SkewGentleTriple, rec: &mut Recorder) {
    if let Some(s) = &h.stratifying {
        rec.expect(s.stratifying, || format!("AeA is not stratifying: {s:?}"));
    }
    if let Some(t) = &h.tor_dims {
        rec.expect(t.vanishes(), || format!("Tor over C does not vanish: {:?}", t.dims));
    }
    if let Some(p) = h.bimodule_pd {
        rec.expect_dim("pd of AeA over the enveloping algebra", p, Some(1));
    }
    rec.expect_dim("id of A as a left module", h.id_left, None);
    rec.expect_dim("id of A as a right module", h.id_right, None);
    let both_finite = h.id_left.finite().is_some() && h.id_right.finite().is_some();
    rec.expect(!both_finite || h.gorenstein, || "A is not Gorenstein".to_string());
    rec.expect(h.duality_agrees, || "injective dimension disagrees with the Ext computation".to_string());
    rec.expect(h.selfinjective.agree, || format!("selfinjectivity criteria disagree: {:?}", h.selfinjective));
    rec.expect(triple.special_vertices.is_empty() || !triple.is_indecomposable() || !h.selfinjective.direct, || {
        "indecomposable, selfinjective, and Sp is nonempty".to_string()
    });
    if let Some(fd) = &h.findim {
        rec.expect(fd.within_bound, || {
            format!("finite pd {} exceeds the witness {}", fd.empirical_max, fd.witness)
        });
    }
}

fn run_field<F: Field>(
    triple: &SkewGentleTriple,
    sq: &SplitQuiver,
    field: &F,
    config: &PipelineConfig,
) -> Result<FieldReport> {
    let mut rec = Recorder::new();
    let label = field.spec().label();
    let finish = |rec: Recorder, engine, probes, peirce, homology| FieldReport {
        field: label.clone(),
        engine,
        probes,
        peirce,
        homology,
        outcome: Outcome::from_lists(&rec.red, &rec.capped),
        red: rec.red,
        capped: rec.capped,
        timings_ms: rec.timings,
    };
    let Some(alg) = rec.absorb(realize(&sq.spec, field, config.degree_cap))? else {
        let why = "the split algebra has no finite-dimensionality certificate";
        return Ok(finish(rec, Block::skipped(why), Block::skipped(why), Block::skipped(why), Block::skipped(why)));
    };
    rec.lap("realize");
    let engine = match check_engine(triple, sq, &alg, config, &mut rec)? {
        Some(e) => Block::Ran(e),
        None => Block::skipped("cap exceeded"),
    };
    rec.lap("engine");
    let probes = structure_probes(sq, &alg);
    for p in probes.probes.iter().filter(|p| !p.failures.is_empty()) {
        rec.red.push(format!("probe {} failed: {}", p.name, p.failures.join("; ")));
    }
    rec.lap("probes");
    if config.level == Level::Structural {
        let why = "level structural";
        let peirce_block = if triple.special_vertices.is_empty() { Block::skipped(VACUOUS) } else { Block::skipped(why) };
        return Ok(finish(rec, engine, Block::Ran(probes), peirce_block, Block::skipped(why)));
    }
    let pd = if triple.special_vertices.is_empty() { None } else { Some(peirce(&alg, sq)?) };
    let peirce_block = match &pd {
        None => Block::skipped(VACUOUS),
        Some(pd) => {
            let m = morita_report(pd, triple)?;
            rec.expect(m.all_hold(), || format!("Morita context checks failed: {}", m.witnesses.join("; ")));
            Block::Ran(m)
        }
    };
    rec.lap("peirce");
    let options = match config.level {
        Level::Full => HomologyOptions::full(config.ext_degree),
        _ => HomologyOptions::light(),
    };
    let h = homology_report_with(&alg, pd.as_ref(), triple, config.resolution_cap, options)?;
    check_homology(&h, triple, &mut rec);
    rec.lap("homology");
    Ok(finish(rec, engine, Block::Ran(probes), peirce_block, Block::Ran(h)))
}

/// Runs one field, dispatching on its specification.
pub fn run_on_field(triple: &SkewGentleTriple, sq: &SplitQuiver, spec: FieldSpec, config: &PipelineConfig) -> Result<FieldReport> {
    match spec {
        FieldSpec::Rationals => run_field(triple, sq, &Rationals, config),
        FieldSpec::Prime(p) => run_field(triple, sq, &PrimeField::new(p as u64)?, config),
    }
}

fn agreement(reports: &[FieldReport]) -> Agreement {
    let mut disagreements = Vec::new();
    if let Some((first, rest)) = reports.split_first() {
        let base = first.signature();
        for r in rest {
            let sig = r.signature();
            for (k, v) in base.as_object().expect("signature is an object") {
                if sig.get(k) != Some(v) && !disagreements.contains(k) {
                    disagreements.push(k.clone());
                }
            }
        }
    }
    Agreement {
        agrees: disagreements.is_empty(),
        disagreements,
    }
}

/// Runs the pipeline on a parsed input. Input that parses but is not a
/// skew-gentle triple yields a red report; malformed relations are errors.
pub fn run(spec: &QuiverSpec, instance: &str, config: &PipelineConfig) -> Result<InstanceReport> {
    if config.fields.is_empty() {
        return Err(Error::InvalidConfig("no field requested".into()));
    }
    let check = check_skew_gentle(spec)?;
    let mut gentle = check.to_json();
    let mut base = spec.clone();
    base.special.clear();
    gentle["base_is_gentle"] = serde_json::Value::Bool(check_gentle(&base)?.is_gentle);
    let fields_tested = config.fields.iter().map(|f| f.label()).collect();
    let triple = match check {
        SkewCheck::Valid(t) => t,
        SkewCheck::Invalid(_) => {
            return Ok(InstanceReport {
                schema_version: SCHEMA_VERSION,
                instance: instance.to_string(),
                level: config.level,
                fields_tested,
                gentle,
                split: Block::skipped("input is not a skew-gentle triple"),
                per_field: Vec::new(),
                agreement: Agreement { agrees: true, disagreements: Vec::new() },
                outcome: Outcome::Red,
            });
        }
    };
    run_triple(&triple, instance, config, gentle)
}

/// The pipeline on a validated triple.
pub fn run_triple(
    triple: &SkewGentleTriple,
    instance: &str,
    config: &PipelineConfig,
    gentle: serde_json::Value,
) -> Result<InstanceReport> {
    let sq = split_triple(triple);
    let split = SplitSummary {
        vertices: sq.spec.vertices.len(),
        arrows: sq.spec.arrows.len(),
        relations: sq.spec.relations.len(),
        minus: sq.minus_idempotent_vertices.iter().map(|&v| sq.spec.vertices[v].clone()).collect(),
    };
    let per_field = config
        .fields
        .iter()
        .map(|&f| run_on_field(triple, &sq, f, config))
        .collect::<Result<Vec<_>>>()?;
    let agreement = agreement(&per_field);
    let mut outcome = per_field.iter().fold(Outcome::Green, |acc, r| acc.combine(r.outcome));
    if !agreement.agrees {
        outcome = Outcome::Red;
    }
    Ok(InstanceReport {
        schema_version: SCHEMA_VERSION,
        instance: instance.to_string(),
        level: config.level,
        fields_tested: config.fields.iter().map(|f| f.label()).collect(),
        gentle,
        split: Block::Ran(split),
        per_field,
        agreement,
        outcome,
    })
}
