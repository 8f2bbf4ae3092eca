use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasispec")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// JSON output of a command, checked against its shipped schema.
fn json(args: &[&str]) -> Value {
    let cmd = args.iter().find(|a| SCHEMAS.contains(a)).expect("a subcommand");
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&full)).unwrap();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{cmd}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap();
    if let Err(errors) = compiled.validate(&v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{cmd} output violates its schema: {msgs:?}");
    }
    v
}

const SCHEMAS: [&str; 7] = ["generate", "complexity", "spectrum", "tracemap", "gordon", "lyapunov", "dynamics"];

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn generate_words() {
    assert_eq!(stdout(&["--model", "fibonacci", "generate", "--length", "8"]).trim(), "abaababa");
    assert_eq!(stdout(&["--model", "sturmian", "--alpha", "golden", "generate", "--length", "5"]).trim(), "10110");
    assert_eq!(stdout(&["--model", "rudin-shapiro", "generate", "--length", "4"]).trim(), "abac");
    let v = json(&["--model", "thue-morse", "--lambda", "3", "generate", "--length", "8"]);
    assert_eq!(v["word"], "abbabaab");
    assert_eq!(v["potential"], serde_json::json!([0.0, 3.0, 3.0, 0.0, 3.0, 0.0, 0.0, 3.0]));
    let v = json(&["--model", "custom", "--rule", "x->xy,y->x", "--coding", "x=1,y=-1", "generate", "--length", "3"]);
    assert_eq!(v["word"], "xyx");
    assert_eq!(v["potential"], serde_json::json!([1.0, -1.0, 1.0]));
}

#[test]
fn generate_csv_header() {
    let csv = stdout(&["generate", "--length", "3", "--format", "csv"]);
    assert_eq!(csv.lines().collect::<Vec<_>>(), ["n,symbol,V", "1,1,1", "2,0,0", "3,1,1"]);
}

#[test]
fn complexity_of_sturmian_and_thue_morse() {
    let v = json(&["--model", "fibonacci", "complexity", "--n-max", "30"]);
    let p: Vec<u64> = serde_json::from_value(v["complexity"].clone()).unwrap();
    assert_eq!(p, (2..=31).collect::<Vec<_>>());
    assert_eq!(v["stable"], true);
    let v = json(&["--model", "thue-morse", "complexity", "--n-max", "2", "--length", "10000"]);
    assert_eq!(v["complexity"][1], 4);
    let v = json(&["--alpha", "golden", "complexity", "--n-max", "1", "--length", "100000", "--factor", "1"]);
    let f = v["frequencies"][0]["frequency"].as_f64().unwrap();
    assert!((f - 0.618034).abs() < 1e-3);
}

#[test]
fn complexity_warns_on_short_prefix() {
    let out = run(&["--model", "thue-morse", "complexity", "--n-max", "12", "--length", "16"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("prefix doubling"));
}

#[test]
fn spectrum_measures() {
    let v = json(&["--lambda", "0", "spectrum", "--level", "6"]);
    assert!((v["measure"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    assert_eq!(v["bands"].as_array().unwrap().len(), 13);
    let v = json(&["--lambda", "4", "spectrum", "--level", "12", "--from", "3"]);
    let decay = v["decay"].as_array().unwrap();
    assert_eq!(decay.len(), 10);
    assert!(decay.last().unwrap()["measure"].as_f64().unwrap() < decay[0]["measure"].as_f64().unwrap());
}

#[test]
fn spectrum_csv_header() {
    let csv = stdout(&["--lambda", "1", "spectrum", "--level", "2", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "band,lo,hi,touches_next");
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--alpha", "5/8", "spectrum"]), 2);
    assert_eq!(code(&["--alpha", "0.618", "spectrum"]), 2);
    assert_eq!(code(&["--model", "nonesuch", "generate"]), 2);
    assert_eq!(code(&["spectrum", "--no-such-flag"]), 2);
    assert_eq!(code(&["--coding", "a=1", "generate"]), 2);
    assert_eq!(code(&["--model", "circle-map", "--beta", "0.3", "spectrum"]), 2);
    assert_eq!(code(&["dynamics", "--p", "-1"]), 2);
    // a band narrower than double precision resolution at period 8192
    assert_eq!(code(&["--model", "period-doubling", "--lambda", "2", "spectrum", "--level", "13"]), 3);
    assert_eq!(code(&["generate", "--length", "4"]), 0);
}

#[test]
fn output_file_and_format_inference() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bands.csv");
    let out = run(&["spectrum", "--level", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("band,lo,hi"));
    let path = dir.path().join("bands.json");
    run(&["spectrum", "--level", "3", "--out", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["level"], 3);
    assert_eq!(code(&["generate", "--out", dir.path().join("missing/x.json").to_str().unwrap()]), 2);
}

#[test]
fn tracemap_orbits() {
    let v = json(&["--lambda", "1", "tracemap", "--energy", "-1.5,0.3,5", "--level", "14"]);
    assert_eq!(v["soundness"], "full");
    let bound = v["bound"].as_f64().unwrap();
    assert!((bound - 5.0).abs() < 1e-12);
    let o = v["orbits"].as_array().unwrap();
    assert_eq!(o[0]["status"], "CERTIFIED_OUT");
    assert_eq!(o[1]["status"], "UNDECIDED_IN");
    assert_eq!(o[2]["status"], "CERTIFIED_OUT");
    assert_eq!(o[0]["first_index"], -1);
    let v = json(&["--model", "fibonacci", "tracemap", "--energy", "0.2", "--level", "6"]);
    assert_eq!(v["soundness"], "subsequence");
    assert_eq!(v["orbits"][0]["status"], "UNJUDGED");
    let csv = stdout(&["tracemap", "--energy", "0", "--level", "2", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "E,n,trace");
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn gordon_fibonacci_two_block() {
    let v = json(&["--model", "fibonacci", "--lambda", "1", "gordon", "--n-max", "8"]);
    assert!((v["trace_bound"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    let checks = v["checks"].as_array().unwrap();
    let two: Vec<&Value> = checks.iter().filter(|c| c["kind"] == "TWO_BLOCK").collect();
    assert!(two.len() >= 8);
    for c in &two {
        assert!(c["failures"].as_array().unwrap().is_empty(), "{c}");
        assert_eq!(c["verified_energies"].as_array().unwrap().len(), 50);
        for pair in c["verified_energies"].as_array().unwrap() {
            assert!(pair[1].as_f64().unwrap() >= 0.1 - 1e-9);
        }
    }
    let text = stdout(&["--model", "fibonacci", "--lambda", "1", "gordon", "--n-max", "8"]);
    assert!(text.contains("level 8 (length 55): two-block criterion holds for all 50 sampled spectrum energies"), "{text}");
}

#[test]
fn gordon_sturmian_default_bound() {
    let v = json(&["--lambda", "4", "gordon", "--n-max", "6", "--energies", "20"]);
    let c = 2.0 + 24f64.sqrt();
    assert!((v["trace_bound"].as_f64().unwrap() - c).abs() < 1e-12);
    assert_eq!(v["digits_limsup_ge_4"], false);
    for level in 1..=6 {
        assert!(v["checks"].as_array().unwrap().iter().any(|c| c["scale"] == level && c["failures"].as_array().unwrap().is_empty()));
    }
    let v = json(&["--alpha", "cf:(4,1)", "gordon", "--n-max", "4", "--energies", "5"]);
    assert_eq!(v["digits_limsup_ge_4"], true);
}

#[test]
fn gordon_fourth_powers() {
    let v = json(&["--model", "binary-non-pisot", "gordon", "--n-max", "6"]);
    let three: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["kind"] == "THREE_BLOCK").collect();
    assert!(!three.is_empty());
    for c in three {
        assert_eq!(c["source"], "fourth power");
        assert!(c["failures"].as_array().unwrap().is_empty());
        assert!(c["frequency_bound"]["value"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn gordon_rudin_shapiro_has_no_structure() {
    let text = stdout(&["--model", "rudin-shapiro", "gordon"]);
    assert!(text.contains("no power structure found up to scanned length"), "{text}");
}

#[test]
fn gordon_seed_governs_energies() {
    let a = json(&["--seed", "7", "gordon", "--n-max", "3", "--energies", "5"]);
    let b = json(&["--seed", "7", "--threads", "1", "gordon", "--n-max", "3", "--energies", "5"]);
    let c = json(&["--seed", "8", "gordon", "--n-max", "3", "--energies", "5"]);
    assert_eq!(a, b);
    assert_ne!(a["energies"], c["energies"]);
}

#[test]
fn lyapunov_of_free_operator() {
    let v = json(&["--model", "free", "lyapunov", "--energy", "-3,0.5,3", "--length", "2000"]);
    let g: Vec<f64> = v["points"].as_array().unwrap().iter().map(|p| p["lyapunov"].as_f64().unwrap()).collect();
    let outside = 1.5f64.acosh();
    assert!((g[0] - outside).abs() < 1e-3 && (g[2] - outside).abs() < 1e-3, "{g:?}");
    assert!(g[1] < 1e-2);
    let v = json(&["--lambda", "2", "lyapunov", "--energy", "0", "--length", "64", "--jl-alpha", "0.5"]);
    assert_eq!(v["points"][0]["jl_ratio"].as_array().unwrap().len(), 6);
}

#[test]
fn dynamics_free_ballistic() {
    let v = json(&["--model", "free", "dynamics", "-N", "1500", "--p", "0,2"]);
    let curves = v["curves"].as_array().unwrap();
    for (t, m) in curves[0]["samples"].as_array().unwrap().iter().map(|s| (s[0].as_f64().unwrap(), s[1].as_f64().unwrap())) {
        assert!((m - 1.0).abs() < 1e-10, "T = {t}");
    }
    let beta = curves[1]["fit"]["exponent"].as_f64().unwrap();
    assert!((1.85..=2.05).contains(&beta), "{beta}");
    assert!(curves[1]["unitarity_drift"].as_f64().unwrap() < 1e-10);
}

#[test]
fn dynamics_fibonacci_is_slower_than_ballistic() {
    let v = json(&["--model", "fibonacci", "--lambda", "8", "dynamics", "-N", "1500", "--t-min", "30", "--t-max", "300", "--min-decades", "1"]);
    let beta = v["curves"][0]["fit"]["exponent"].as_f64().unwrap();
    assert!(beta < 1.5, "{beta}");
}

#[test]
fn dynamics_flags_reflection() {
    let out = run(&["--model", "free", "dynamics", "-N", "60", "--t-max", "1000", "--format", "csv"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("box boundary"));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "p,T,value");
    let v = json(&["--model", "free", "dynamics", "-N", "60", "--t-max", "1000"]);
    assert!(v["curves"][0]["contaminated_from"].as_f64().is_some());
    assert!(v["curves"][0]["fit"].is_null());
}

#[test]
fn dynamics_custom_state() {
    let v = json(&["--model", "free", "dynamics", "-N", "200", "--state", "-1=1,1=1", "--times", "0.000001"]);
    let m = v["curves"][0]["samples"][0][1].as_f64().unwrap();
    assert!((m - 1.0).abs() < 1e-6, "{m}");
    assert_eq!(code(&["dynamics", "-N", "10", "--state", "20=1"]), 2);
    assert_eq!(code(&["dynamics", "-N", "10", "--state", "0=0"]), 2);
}
