use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use skewgentle_cli::{run, CACHE_ENV, EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_VERDICT};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("skewgentle").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
}

#[test]
fn check_exit_codes() {
    assert_eq!(cli(&["check", &data("example.quiver")]).0, EXIT_OK);
    assert_eq!(cli(&["check", &data("gentle.quiver")]).0, EXIT_OK);
    assert_eq!(cli(&["check", &data("special3.quiver")]).0, EXIT_VERDICT);
    let (code, _, err) = cli(&["check", &data("malformed.quiver")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("malformed.quiver"), "{err}");
    assert_eq!(cli(&["check", "/no/such/file.quiver"]).0, EXIT_INPUT);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_INPUT);
}

#[test]
fn check_json_names_the_loop() {
    let (code, out, _) = cli(&["check", "--json", &data("special3.quiver")]);
    assert_eq!(code, EXIT_VERDICT);
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["valid"], false);
    assert_eq!(v["offending_special"], serde_json::json!(["3"]));
    assert!(v["violations"].as_array().unwrap().iter().any(|w| w["witness"].to_string().contains("delta__3")));
}

#[test]
fn split_round_trips_through_the_dsl() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("split.quiver");
    let (code, _, _) = cli(&["split", &data("example.quiver"), "-o", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&file).unwrap();
    let spec = skewgentle::dsl::parse(&text).unwrap();
    assert_eq!((spec.vertices.len(), spec.arrows.len(), spec.relations.len()), (6, 7, 2));
    assert_eq!(skewgentle::dsl::serialize(&spec), text);
    let (code, _, err) = cli(&["check", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not a monomial of length 2"), "{err}");

    let (_, swapped, _) = cli(&["split", "--swap", &data("example.quiver")]);
    let s = skewgentle::dsl::parse(&swapped).unwrap();
    assert_eq!((s.vertices.len(), s.arrows.len(), s.relations.len()), (6, 7, 2));
}

#[test]
fn split_refuses_invalid_triples() {
    let (code, out, _) = cli(&["split", &data("special3.quiver")]);
    assert_eq!(code, EXIT_VERDICT);
    assert!(out.is_empty());
}

#[test]
fn gamma_prints_the_involution() {
    let (code, out, _) = cli(&["gamma", &data("example.quiver")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("rel a__p*b__m;"));
    assert!(out.contains("rel a__m*b__p;"));
    assert!(out.contains("# involution on vertices: 1 fixed, 2 fixed, 3__p <-> 3__m, 4__p <-> 4__m"));
}

#[test]
fn corners_report_the_factors() {
    let (code, out, _) = cli(&["corners", "--json", &data("example.quiver")]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["C_factors"].as_array().unwrap().len(), 1);
    assert!(out.contains("A_2"));
    let (code, text, _) = cli(&["corners", "--field", "f2", &data("example.quiver")]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("A_2"));
}

#[test]
fn verify_json_is_versioned_and_green() {
    let (code, out, _) = cli(&["verify", "--json", "--field", "q,f2,f3", &data("example.quiver")]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["outcome"], "green");
    assert_eq!(v["fields_tested"], serde_json::json!(["q", "f2", "f3"]));
    assert_eq!(v["artifacts"]["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["per_field"].as_array().unwrap().len(), 3);
    assert_eq!(v["per_field"][0]["peirce"]["dims"]["C"], 3);
}

#[test]
fn verify_levels_and_batches() {
    for level in ["structural", "homological", "full"] {
        let (code, _, err) = cli(&["verify", "--level", level, &data("example.quiver")]);
        assert_eq!(code, EXIT_OK, "{level}: {err}");
    }
    assert_eq!(cli(&["verify", "--level", "deep", &data("example.quiver")]).0, EXIT_INPUT);
    let (code, out, _) = cli(&["verify", "--jobs", "2", &data("example.quiver"), &data("special3.quiver")]);
    assert_eq!(code, EXIT_VERDICT);
    assert!(out.contains("1 green, 1 red"), "{out}");
    let (code, _, _) = cli(&["verify", &data("example.quiver"), &data("malformed.quiver")]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn tiny_caps_are_reported_as_capped() {
    let (code, out, _) = cli(&["verify", "--resolution-cap", "0", &data("example.quiver")]);
    assert_eq!(code, EXIT_CAP, "{out}");
}

#[test]
fn report_rows_cover_each_field() {
    let (code, out, _) = cli(&["report", "--json", "--field", "q,f2", &data("example.quiver")]);
    assert_eq!(code, EXIT_OK);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!(r["stratifying"], true);
        assert_eq!(r["tor_dims"], serde_json::json!([0, 0, 0, 0]));
        assert_eq!(r["findim_witness"], 2);
    }
}

#[test]
fn corpus_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let (code, _, _) = cli(&["corpus", "--seed", "7", "--count", "12", "--out", d.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
    }
    let manifest = |d: &tempfile::TempDir| std::fs::read_to_string(d.path().join("manifest.json")).unwrap();
    assert_eq!(manifest(&a), manifest(&b));
    let m = json(&manifest(&a));
    assert_eq!(m["instances"].as_array().unwrap().len(), 12);
    for e in m["instances"].as_array().unwrap() {
        let text = std::fs::read(a.path().join(e["file"].as_str().unwrap())).unwrap();
        assert_eq!(e["sha256"].as_str().unwrap(), skewgentle_cli::report::sha256_hex(&text));
    }
    let (code, _, err) = cli(&["verify", "--jobs", "3", a.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
}

#[test]
fn corpus_rejects_bad_ranges() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, _) = cli(&["corpus", "--vertices", "5..1", "--out", d.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn binary_uses_the_cache() {
    let cache = tempfile::tempdir().unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_skewgentle"))
            .args(["verify", "--json", &data("example.quiver")])
            .env(CACHE_ENV, cache.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(EXIT_OK));
        json(&String::from_utf8(out.stdout).unwrap())
    };
    let first = run();
    let second = run();
    assert_eq!(first["cached"], false);
    assert_eq!(second["cached"], true);
    assert_eq!(first["per_field"], second["per_field"]);
    assert_eq!(std::fs::read_dir(cache.path()).unwrap().count(), 1);
}

#[test]
fn binary_exit_codes() {
    let status = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_skewgentle")).args(args).output().unwrap().status.code();
    assert_eq!(status(&["check", &data("example.quiver")]), Some(EXIT_OK));
    assert_eq!(status(&["check", &data("special3.quiver")]), Some(EXIT_VERDICT));
    assert_eq!(status(&["check", &data("malformed.quiver")]), Some(EXIT_INPUT));
    assert_eq!(status(&["--version"]), Some(EXIT_OK));
}
