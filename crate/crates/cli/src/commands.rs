use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use skewgentle::corpus::GenConfig;
use skewgentle::dsl::serialize;
use skewgentle::engine::{realize, DEFAULT_DEGREE_CAP};
use skewgentle::gentle::{check_gentle, check_skew_gentle, loop_name, SkewCheck, SkewGentleTriple};
use skewgentle::morita::{morita_report, peirce, present_b, present_c};
use skewgentle::pipeline::{Outcome, PipelineConfig, SCHEMA_VERSION, VACUOUS};
use skewgentle::split::{build_gamma, split_triple, split_triple_swapped};
use skewgentle::{Field, FieldSpec, PrimeField, Rationals};

use crate::corpus_dir::{write_corpus, MANIFEST};
use crate::report::{compact, outcome_of, render_dim, render_text, verify_text};
use crate::{
    expand_paths, parse_range, read_file, read_spec, write_output, CliError, CliResult, Command, CorpusArgs, RunArgs,
    EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_VERDICT,
};

pub fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Check { file, json } => check(&file, json, out),
        Command::Split { file, output, swap } => split(&file, output.as_deref(), swap, out, err),
        Command::Gamma { file, output } => gamma(&file, output.as_deref(), out, err),
        Command::Corners { file, field, json } => corners(&file, field, json, out),
        Command::Verify { paths, run } => verify(&paths, &run, false, out, err),
        Command::Report { paths, run } => verify(&paths, &run, true, out, err),
        Command::Corpus(args) => corpus(&args, out),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn names(spec: &skewgentle::QuiverSpec, vs: &[usize]) -> String {
    vs.iter().map(|&v| spec.vertices[v].as_str()).collect::<Vec<_>>().join(", ")
}

fn check(file: &Path, as_json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let (_, spec) = read_spec(file)?;
    let verdict = check_skew_gentle(&spec)?;
    let code = if verdict.is_valid() { EXIT_OK } else { EXIT_VERDICT };
    if as_json {
        let mut v = verdict.to_json();
        v["schema_version"] = json!(SCHEMA_VERSION);
        v["valid"] = json!(verdict.is_valid());
        out.write_all(pretty(&v).as_bytes())?;
        return Ok(code);
    }
    match &verdict {
        SkewCheck::Valid(t) => writeln!(
            out,
            "skew-gentle triple: {} vertices, {} arrows, {} relations, Sp = {{{}}}",
            spec.vertices.len(),
            spec.arrows.len(),
            spec.relations.len(),
            names(&t.base, &t.special_vertices)
        )?,
        SkewCheck::Invalid(v) => {
            let mut base = spec.clone();
            base.special.clear();
            let what = if check_gentle(&base)?.is_gentle { "the special loops break gentleness" } else { "(Q, I) is not gentle" };
            writeln!(out, "not a skew-gentle triple: {what}")?;
            for x in &v.violations {
                writeln!(out, "  axiom {}: {}", x.axiom, x.witness.join(", "))?;
            }
            if !v.offending_special.is_empty() {
                let loops: Vec<String> = v
                    .offending_special
                    .iter()
                    .filter_map(|name| spec.vertex_index(name))
                    .map(|i| loop_name(&spec, i))
                    .collect();
                writeln!(out, "  offending special loops: {}", loops.join(", "))?;
            }
        }
    }
    Ok(code)
}

/// The validated triple, or the verdict code after reporting why not.
fn require_triple(file: &Path, err: &mut dyn Write) -> CliResult<Result<SkewGentleTriple, i32>> {
    let (_, spec) = read_spec(file)?;
    match check_skew_gentle(&spec)? {
        SkewCheck::Valid(t) => Ok(Ok(t)),
        SkewCheck::Invalid(v) => {
            writeln!(err, "{}: not a skew-gentle triple", file.display())?;
            for x in &v.violations {
                writeln!(err, "  axiom {}: {}", x.axiom, x.witness.join(", "))?;
            }
            Ok(Err(EXIT_VERDICT))
        }
    }
}

fn split(file: &Path, output: Option<&Path>, swap: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let triple = match require_triple(file, err)? {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let sq = if swap { split_triple_swapped(&triple) } else { split_triple(&triple) };
    write_output(output, &serialize(&sq.spec), out)?;
    Ok(EXIT_OK)
}

fn gamma(file: &Path, output: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let triple = match require_triple(file, err)? {
        Ok(t) => t,
        Err(code) => return Ok(code),
    };
    let g = build_gamma(&triple);
    let q = &g.spec;
    let mut text = serialize(q);
    let orbits = |n: usize, perm: &[usize], name: &dyn Fn(usize) -> String| -> String {
        (0..n)
            .filter(|&x| perm[x] >= x)
            .map(|x| if perm[x] == x { format!("{} fixed", name(x)) } else { format!("{} <-> {}", name(x), name(perm[x])) })
            .collect::<Vec<_>>()
            .join(", ")
    };
    text.push_str(&format!(
        "# involution on vertices: {}\n",
        orbits(q.vertices.len(), &g.vertex_action, &|v| q.vertices[v].clone())
    ));
    text.push_str(&format!(
        "# involution on arrows: {}\n",
        orbits(q.arrows.len(), &g.arrow_action, &|a| q.arrows[a].name.clone())
    ));
    write_output(output, &text, out)?;
    Ok(if g.action_is_valid(&triple) { EXIT_OK } else { EXIT_VERDICT })
}

fn corners(file: &Path, field: FieldSpec, as_json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let (_, spec) = read_spec(file)?;
    let triple = match check_skew_gentle(&spec)? {
        SkewCheck::Valid(t) => t,
        SkewCheck::Invalid(_) => {
            writeln!(out, "not a skew-gentle triple; run `check` for the violations")?;
            return Ok(EXIT_VERDICT);
        }
    };
    let report = match field {
        FieldSpec::Rationals => corner_report(&triple, &Rationals)?,
        FieldSpec::Prime(p) => corner_report(&triple, &PrimeField::new(p as u64)?)?,
    };
    let holds = report["vacuous"] == true || report["all_hold"] == true;
    if as_json {
        out.write_all(pretty(&report).as_bytes())?;
    } else if report["vacuous"] == true {
        writeln!(out, "{VACUOUS}")?;
    } else {
        let d = &report["dims"];
        writeln!(out, "field {}", report["field"].as_str().unwrap_or("?"))?;
        writeln!(out, "dim A = {}: B = {}, M = {}, N = {}, C = {}", d["A"], d["B"], d["M"], d["N"], d["C"])?;
        let factors: Vec<String> = report["C_factors"].as_array().into_iter().flatten().map(|f| f.to_string()).collect();
        writeln!(out, "C factors: [{}]", factors.join(", ").replace('"', ""))?;
        for (k, v) in report["verdicts"].as_object().into_iter().flatten() {
            writeln!(out, "  {k}: {v}")?;
        }
        for w in report["witnesses"].as_array().into_iter().flatten() {
            writeln!(out, "  witness: {}", w.as_str().unwrap_or(""))?;
        }
        writeln!(out, "# Q^C")?;
        write!(out, "{}", report["q_c"].as_str().unwrap_or(""))?;
        writeln!(out, "# Q^B")?;
        write!(out, "{}", report["q_b"].as_str().unwrap_or(""))?;
    }
    Ok(if holds { EXIT_OK } else { EXIT_VERDICT })
}

fn corner_report<F: Field>(triple: &SkewGentleTriple, field: &F) -> CliResult<Value> {
    let label = field.spec().label();
    if triple.special_vertices.is_empty() {
        return Ok(json!({ "schema_version": SCHEMA_VERSION, "field": label, "vacuous": true, "reason": VACUOUS }));
    }
    let sq = split_triple(triple);
    let alg = realize(&sq.spec, field, DEFAULT_DEGREE_CAP)?;
    let pd = peirce(&alg, &sq)?;
    let m = morita_report(&pd, triple)?;
    let c = present_c(&pd)?;
    let b = present_b(&pd, triple)?;
    let mut v = serde_json::to_value(&m).expect("reports serialize");
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["field"] = json!(label);
    v["vacuous"] = json!(false);
    v["all_hold"] = json!(m.all_hold());
    v["q_c"] = json!(serialize(&c.presentation.quiver));
    v["q_b"] = json!(serialize(&b.presentation.quiver));
    Ok(v)
}

fn pipeline_config(run: &RunArgs) -> CliResult<PipelineConfig> {
    if run.field.is_empty() {
        return Err(CliError::Usage("at least one field is required".into()));
    }
    let mut fields = Vec::new();
    for f in &run.field {
        if !fields.contains(f) {
            fields.push(*f);
        }
    }
    Ok(PipelineConfig {
        level: run.level,
        fields,
        resolution_cap: run.resolution_cap,
        ext_degree: run.ext_degree,
        degree_cap: DEFAULT_DEGREE_CAP,
    })
}

/// Runs the pipeline on every input, `run.jobs` at a time, keeping input
/// order.
pub fn verify_all(files: &[PathBuf], run: &RunArgs) -> CliResult<Vec<(PathBuf, CliResult<Value>)>> {
    let config = pipeline_config(run)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} jobs: {e}", run.jobs)))?;
    Ok(pool.install(|| {
        files
            .par_iter()
            .map(|p| {
                let r = read_file(p).and_then(|text| verify_text(&p.display().to_string(), &text, &config));
                (p.clone(), r)
            })
            .collect()
    }))
}

/// Exit code for a batch: input errors first, then red, then capped.
pub fn batch_exit_code(results: &[(PathBuf, CliResult<Value>)]) -> i32 {
    let mut code = EXIT_OK;
    for (_, r) in results {
        let c = match r {
            Err(e) => e.exit_code(),
            Ok(v) => outcome_of(v).exit_code(),
        };
        let rank = |c: i32| match c {
            EXIT_INPUT => 3,
            EXIT_VERDICT => 2,
            EXIT_CAP => 1,
            _ => 0,
        };
        if rank(c) > rank(code) {
            code = c;
        }
    }
    code
}

fn verify(paths: &[PathBuf], run: &RunArgs, compact_form: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let files = expand_paths(paths)?;
    if files.is_empty() {
        return Err(CliError::Usage("no input files".into()));
    }
    let results = verify_all(&files, run)?;
    for (p, r) in &results {
        if let Err(e) = r {
            writeln!(err, "error: {}: {e}", p.display())?;
        }
    }
    let reports: Vec<&Value> = results.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
    let count = |o: Outcome| reports.iter().filter(|r| outcome_of(r) == o).count();
    let summary = json!({
        "instances": results.len(),
        "green": count(Outcome::Green),
        "red": count(Outcome::Red),
        "capped": count(Outcome::Capped),
        "input_errors": results.len() - reports.len(),
    });
    if compact_form {
        let rows: Vec<Value> = reports.iter().flat_map(|r| compact(r)).collect();
        if run.json {
            out.write_all(pretty(&Value::Array(rows)).as_bytes())?;
        } else {
            writeln!(out, "{:<20} {:<5} {:<12} {:<10} {:<10} {:<11} {:<14} findim", "instance", "field", "stratifying", "id_left", "id_right", "gorenstein", "selfinjective")?;
            for r in rows {
                let text = |k: &str| match &r[k] {
                    Value::Null => "-".to_string(),
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                writeln!(
                    out,
                    "{:<20} {:<5} {:<12} {:<10} {:<10} {:<11} {:<14} {}",
                    text("instance"),
                    text("field"),
                    text("stratifying"),
                    render_dim(&r["id_left"]),
                    render_dim(&r["id_right"]),
                    text("gorenstein"),
                    text("selfinjective"),
                    text("findim_witness")
                )?;
            }
        }
    } else if run.json {
        let body = if results.len() == 1 && reports.len() == 1 {
            reports[0].clone()
        } else {
            json!({ "schema_version": SCHEMA_VERSION, "summary": summary, "reports": reports })
        };
        out.write_all(pretty(&body).as_bytes())?;
    } else {
        for r in &reports {
            out.write_all(render_text(r).as_bytes())?;
        }
        if results.len() > 1 {
            writeln!(
                out,
                "{} instances: {} green, {} red, {} capped, {} input errors",
                summary["instances"], summary["green"], summary["red"], summary["capped"], summary["input_errors"]
            )?;
        }
    }
    Ok(batch_exit_code(&results))
}

fn corpus(args: &CorpusArgs, out: &mut dyn Write) -> CliResult<i32> {
    let config = GenConfig {
        seed: args.seed,
        n_vertices: parse_range(&args.vertices)?,
        n_arrows: parse_range(&args.arrows)?,
        relation_density: args.relation_density,
        special_density: args.special_density,
        count: args.count,
    };
    let manifest = write_corpus(&config, &args.out)?;
    if args.json {
        out.write_all(pretty(&serde_json::to_value(&manifest).expect("manifest serializes")).as_bytes())?;
    } else {
        let special = manifest.instances.iter().filter(|e| !e.special.is_empty()).count();
        writeln!(
            out,
            "wrote {} instances ({} with special loops) and {} to {}",
            manifest.instances.len(),
            special,
            MANIFEST,
            args.out.display()
        )?;
    }
    Ok(EXIT_OK)
}
