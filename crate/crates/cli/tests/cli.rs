use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_incps"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn schemas_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

/// Resolves `$ref`s to sibling schema files.
struct SchemaFiles;

impl jsonschema::Retrieve for SchemaFiles {
    fn retrieve(
        &self,
        uri: &jsonschema::Uri<String>,
    ) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.as_str().rsplit('/').next().unwrap_or_default().to_string();
        let text = std::fs::read_to_string(schemas_dir().join(name))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn assert_schema(doc: &Value, schema: &str) {
    let text = std::fs::read_to_string(schemas_dir().join(schema)).unwrap();
    let schema_value: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::options().with_retriever(SchemaFiles).build(&schema_value).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn write(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["-o", &p]);
    ok(&full);
    p
}

#[test]
fn enumerates_five_partitions_of_three() {
    let out = ok(&["nc", "enumerate", "--n", "3"]);
    assert_eq!(out.lines().count(), 5);
    let j = ok_json(&["nc", "enumerate", "--n", "3", "--json"]);
    for p in j.as_array().unwrap() {
        assert_schema(p, "partition.schema.json");
    }
}

#[test]
fn kreweras_and_mobius() {
    let k = ok_json(&["nc", "kreweras", "--partition", "{1,3}{2}"]);
    assert_eq!(k, serde_json::json!({"n": 3, "blocks": [[1, 2], [3]]}));
    let m = ok_json(&["nc", "mobius", "--from", "{1}{2}{3}", "--to", "{1,2,3}"]);
    assert_eq!(m["mobius"], 2);
    let b = ok_json(&["ncb", "kreweras", "--partition", "{1,2,-1,-2}"]);
    assert_schema(&b, "partition.schema.json");
    assert_eq!(ok(&["ncb", "enumerate", "--n", "3", "--zero-only"]).lines().count(), 10);
    assert_eq!(ok(&["ncb", "enumerate", "--n", "3"]).lines().count(), 20);
    assert_eq!(ok(&["ncb", "fiber", "--partition", "{1,2}{3}"]).lines().count(), 4);
}

#[test]
fn semicircular_fourth_cumulant_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let semi = write(dir.path(), "semi.json", &["build", "law", "semicircular", "--a1", "0.5", "--a2", "-1"]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&semi).unwrap()).unwrap();
    assert_schema(&doc, "state.schema.json");
    let k = ok_json(&["cum", "kappa", "--state", &semi, "--tuple", "x,x,x,x"]);
    assert_schema(&k, "dual.schema.json");
    assert_eq!(k, serde_json::json!({"body": [0.0, 0.0], "soul": [0.0, 0.0]}));
    let k2 = ok_json(&["cum", "kappa", "--state", &semi, "--tuple", "x,x"]);
    assert!((k2["soul"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    for method in ["formal", "typeb", "soul", "numeric"] {
        let v = ok_json(&["cum", "inf-kappa", "--state", &semi, "--tuple", "x", "--method", method]);
        assert!((v["value"][0].as_f64().unwrap() - 0.5).abs() < 1e-6, "{method}");
    }
}

#[test]
fn z2_state_passes_infinitesimal_freeness() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = write(dir.path(), "z2.json", &["build", "z2", "--k", "2", "--alphas", "1,1"]);
    for check in ["check-inf-freeness", "check-inf-freeness-def", "check-freeness"] {
        let r = ok_json(&["cum", check, "--state", &z2, "--groups", "1;2"]);
        assert_schema(&r, "report.schema.json");
        assert_eq!(r["pass"], true, "{check}");
    }
    let t = ok_json(&["cum", "check-traciality", "--state", &z2]);
    assert_eq!(t["max_violation"], 0.0);
}

#[test]
fn perturbed_free_product_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &["build", "random", "--generators", "a", "--degree", "3", "--seed", "1"]);
    let b = write(dir.path(), "b.json", &["build", "random", "--generators", "b", "--degree", "3", "--seed", "2"]);
    let fp = write(dir.path(), "fp.json", &["build", "free-product", &a, &b]);
    let r = ok_json(&["cum", "check-inf-freeness", "--state", &fp, "--groups", "a;b"]);
    assert_eq!(r["pass"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&fp).unwrap()).unwrap();
    let entry = doc["moments"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|m| m["word"] == serde_json::json!(["a", "b"]))
        .unwrap();
    entry["soul"][0] = Value::from(entry["soul"][0].as_f64().unwrap() + 1e-3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let r = ok_json(&["cum", "check-inf-freeness", "--state", bad.to_str().unwrap(), "--groups", "a;b"]);
    assert_schema(&r, "report.schema.json");
    assert_eq!(r["pass"], false);
    assert!(r["witness"].is_array());
}

#[test]
fn pipelines_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", &["build", "random", "--generators", "x,y", "--degree", "3", "--seed", "9"]);
    let spec = write(dir.path(), "spec.json", &["cum", "spec", "--state", &s]);
    let spec_doc: Value = serde_json::from_str(&std::fs::read_to_string(&spec).unwrap()).unwrap();
    assert_schema(&spec_doc, "spec.schema.json");
    let back = write(dir.path(), "back.json", &["cum", "moments", "--spec", &spec]);
    let (s_doc, back_doc): (Value, Value) = (
        serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap(),
        serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap(),
    );
    let values = |d: &Value| -> Vec<f64> {
        d["moments"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|m| [&m["body"][0], &m["body"][1], &m["soul"][0], &m["soul"][1]])
            .map(|v| v.as_f64().unwrap())
            .collect()
    };
    for (u, v) in values(&s_doc).iter().zip(values(&back_doc)) {
        assert!((u - v).abs() < 1e-12);
    }

    let compressed = ok_json(&["build", "compress", "--alpha", "0.5", "--alpha-prime", "-0.2", "--spec", &spec]);
    assert_schema(&compressed, "spec.schema.json");
    let model = ok_json(&["build", "compress", "--alpha", "0.5", "--alpha-prime", "-0.2", "--state", &s, "--degree", "2"]);
    assert_schema(&model, "state.schema.json");
    let power = ok_json(&["build", "conv-power", "--spec", &spec, "--t", "0.5"]);
    assert_schema(&power, "spec.schema.json");
    let limit = ok_json(&["build", "inf-limit", "--spec", &spec]);
    assert_schema(&limit, "state.schema.json");
    let p = ok_json(&["build", "law", "poisson", "--lambda", "2", "--beta", "0.5", "--gamma", "-1", "--cumulants"]);
    assert_schema(&p, "spec.schema.json");
}

#[test]
fn soul_companion_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", &["build", "random", "--generators", "x,y", "--degree", "3", "--body-only"]);
    let d = serde_json::json!({"images": {"x": [{"word": [], "coeff": [1.0, 0.0]}]}});
    assert_schema(&d, "derivation.schema.json");
    let dpath = dir.path().join("d.json");
    std::fs::write(&dpath, d.to_string()).unwrap();
    let from_file = ok_json(&["build", "soul-companion", "--state", &s, "--derivation", dpath.to_str().unwrap()]);
    assert_schema(&from_file, "state.schema.json");
    let number = ok_json(&["build", "soul-companion", "--state", &s, "--derivation", "number"]);
    let m = &number["moments"].as_array().unwrap()[3];
    assert_eq!(m["word"].as_array().unwrap().len(), 2);
    assert!((m["soul"][0].as_f64().unwrap() - 2.0 * m["body"][0].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nc", "enumerate", "--n", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let too_big = run(&["nc", "enumerate", "--n", "20"]);
    assert_eq!(too_big.status.code(), Some(1));
    assert!(!too_big.stderr.is_empty());
    assert_eq!(run(&["nc", "kreweras", "--partition", "{1,3}{2,4}"]).status.code(), Some(1));
    assert_eq!(run(&["cum", "kappa", "--state", "/nonexistent.json", "--tuple", "x"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let a = ok(&["build", "random", "--generators", "x", "--degree", "3", "--seed", "5"]);
    let b = ok(&["build", "random", "--generators", "x", "--degree", "3", "--seed", "5"]);
    assert_eq!(a, b);
}

#[test]
fn schemas_reject_malformed_documents() {
    let text = std::fs::read_to_string(schemas_dir().join("state.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::options().with_retriever(SchemaFiles).build(&schema).unwrap();
    let bad = serde_json::json!({"alphabet": ["x"], "degree": 1, "moments": [{"word": ["x"], "body": [1.0], "soul": [0.0, 0.0]}]});
    assert!(!validator.is_valid(&bad));
    let failing_report = serde_json::json!({"check": "c", "pass": false, "max_violation": 1.0, "witness": null, "tolerance": 1e-9});
    let r: Value = serde_json::from_str(&std::fs::read_to_string(schemas_dir().join("report.schema.json")).unwrap()).unwrap();
    assert!(!jsonschema::options().build(&r).unwrap().is_valid(&failing_report));
}
