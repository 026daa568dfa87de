use std::path::Path;
use std::process::{Command, Output};

use fidsamp_cli::emit::{emit, read_csv, Format, SummaryDoc};
use fidsamp_cli::registry;
use fidsamp_core::inference::summarize;
use fidsamp_core::models1d::{gamma_scale_fiducial, GammaScaleSpec};
use fidsamp_core::RandomStream;
use serde_json::Value;

fn fidsamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fidsamp"))
        .args(args)
        .env_remove("FIDSAMP_SEED")
        .output()
        .unwrap()
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/summary.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn help_lists_every_flag() {
    let cases: &[(&str, &[&str])] = &[
        (
            "sample",
            &["--model", "--alpha", "--n-obs", "--t", "--sigma0", "--r", "--scale", "--p", "--bound", "--samples", "--seed", "--out", "--format", "--level"],
        ),
        ("posterior", &["--model", "--samples", "--seed", "--out", "--format", "--level"]),
        ("coverage", &["--model", "--theta", "--reps", "--samples", "--level", "--seed"]),
        ("separability", &["--model", "--samples", "--seed", "--t-grid", "--theta-grid"]),
        ("loop-check", &["--table"]),
    ];
    for (cmd, flags) in cases {
        let o = fidsamp(&[cmd, "--help"]);
        assert!(o.status.success());
        let help = String::from_utf8(o.stdout).unwrap();
        for f in *flags {
            assert!(help.contains(f), "{cmd} --help lacks {f}");
        }
        assert!(help.contains("FIDSAMP_SEED") || *cmd == "loop-check");
    }
    let sample_help = String::from_utf8(fidsamp(&["sample", "--help"]).stdout).unwrap();
    for id in registry::ids() {
        assert!(sample_help.contains(id), "{id}");
    }
}

#[test]
fn fixed_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "sample".to_string(),
            "--model".into(),
            "gamma-shape".into(),
            "--n-obs".into(),
            "10".into(),
            "--t".into(),
            "0.4".into(),
            "--samples".into(),
            "500".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let oa = fidsamp(&args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    let ob = fidsamp(&args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn environment_seed_applies_without_flag() {
    let base = ["sample", "--model", "normal-mean", "--t", "0", "--sigma0", "1", "--n-obs", "1", "--samples", "50"];
    let run_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_fidsamp"))
            .args(base)
            .env("FIDSAMP_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let mut flagged = base.to_vec();
    flagged.extend(["--seed", "77"]);
    assert_eq!(run_env("77"), fidsamp(&flagged).stdout);
    let default = stdout_json(&fidsamp(&base));
    assert_eq!(default["seed"], fidsamp_cli::DEFAULT_SEED);
    assert_ne!(run_env("78"), fidsamp(&flagged).stdout);
}

#[test]
fn loop_check_on_cyclic_group() {
    let dir = tempfile::tempdir().unwrap();
    let z3 = dir.path().join("z3.txt");
    std::fs::write(&z3, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let v = stdout_json(&fidsamp(&["loop-check", "--table", z3.to_str().unwrap()]));
    assert_eq!(v["quasigroup"], true);
    assert_eq!(v["loop"], true);
    assert_eq!(v["identity"], 0);
    assert_eq!(v["invariant_measure"]["nullspace_dim"], 1);

    std::fs::write(&z3, "3\n0 1 2\n1 1 0\n2 0 1\n").unwrap();
    let v = stdout_json(&fidsamp(&["loop-check", "--table", z3.to_str().unwrap()]));
    assert_eq!(v["quasigroup"], false);
    assert!(v["invariant_measure"].is_null());

    std::fs::write(&z3, "3\n0 1\n").unwrap();
    assert_eq!(fidsamp(&["loop-check", "--table", z3.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_round_trip_reproduces_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cloud.csv");
    for (id, params) in [("gamma-scale", vec![("alpha", 2.0), ("n-obs", 5.0), ("t", 3.0)]), ("two-point", vec![("t", 0.3), ("p", 0.3)])] {
        let entry = registry::lookup(id).unwrap();
        let p: registry::Params = params.into_iter().collect();
        let d = (entry.sample)(&p, 2000, &mut RandomStream::new(3, 0)).unwrap();
        let doc = SummaryDoc::build(id, &p, 3, &d, 0.9).unwrap();
        emit(&d, &doc, Format::Csv, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(summarize(&back).unwrap(), summarize(&d).unwrap(), "{id}");
        assert_eq!(back.is_uniform(), d.is_uniform());
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("value,weight\n"));
}

#[test]
fn json_output_matches_schema() {
    let v = schema();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let o = fidsamp(&["posterior", "--model", "location-sir", "--t", "1.5", "--samples", "3000", "--format", "json", "--out", file.to_str().unwrap()]);
    let summary = stdout_json(&o);
    assert!(v.is_valid(&summary), "{summary}");
    assert!(summary.get("samples").is_none());
    let full: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert!(v.is_valid(&full));
    assert_eq!(full["samples"].as_array().unwrap().len(), 3000);
    let bad = serde_json::json!({"model": "x", "params": {}, "seed": 1, "n": 0});
    assert!(!v.is_valid(&bad));
}

#[test]
fn empty_cloud_is_a_usage_error_without_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    let o = fidsamp(&["sample", "--model", "location-normal", "--t", "0", "--samples", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn errors_map_to_exit_codes() {
    assert_eq!(fidsamp(&["sample", "--model", "no-such-model", "--t", "1"]).status.code(), Some(2));
    assert_eq!(fidsamp(&["sample", "--model", "normal-mean", "--t", "1"]).status.code(), Some(2));
    assert_eq!(fidsamp(&["posterior", "--model", "normal-mean", "--t", "1", "--sigma0", "1", "--n-obs", "1"]).status.code(), Some(2));
    let o = fidsamp(&["sample", "--model", "correlation", "--r", "1.5", "--n-obs", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 1);
    let o = fidsamp(&["sample", "--model", "location-normal", "--t", "0", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("/nonexistent-dir/x.csv"));
}

#[test]
fn normal_mean_summary_interval() {
    let v = stdout_json(&fidsamp(&["sample", "--model", "normal-mean", "--t", "10", "--sigma0", "2", "--n-obs", "4", "--samples", "100000", "--seed", "42"]));
    assert_eq!(v["interval"]["level"], 0.95);
    assert!((v["interval"]["lo"].as_f64().unwrap() - 8.04).abs() < 0.03);
    assert!((v["interval"]["hi"].as_f64().unwrap() - 11.96).abs() < 0.03);
}

#[test]
fn gamma_scale_file_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = fidsamp(&["sample", "--model", "gamma-scale", "--alpha", "2", "--n-obs", "5", "--t", "3", "--samples", "100000", "--seed", "42", "--out", path.to_str().unwrap()]);
    assert!(schema().is_valid(&stdout_json(&o)));
    let d = read_csv(&path).unwrap();
    assert_eq!(d.len(), 100_000);
    let (_, ig) = gamma_scale_fiducial(&GammaScaleSpec::new(2.0, 5, 3.0).unwrap()).unwrap();
    assert!(d.ks_to_cdf(|x| ig.cdf(x)) <= 0.01);
}

#[test]
fn coverage_and_separability_commands() {
    let v = stdout_json(&fidsamp(&["coverage", "--model", "gamma-scale", "--alpha", "2", "--n-obs", "5", "--theta", "1.5", "--reps", "300", "--level", "0.9"]));
    assert_eq!(v["replications"], 300);
    let rate = v["rate"].as_f64().unwrap();
    assert!((rate - 0.9).abs() < 4.0 * (0.09f64 / 300.0).sqrt(), "{rate}");

    let v = stdout_json(&fidsamp(&["separability", "--model", "location-normal"]));
    assert_eq!(v["separable"], true);
    let v = stdout_json(&fidsamp(&["separability", "--model", "gamma-scale", "--alpha", "2", "--n-obs", "5", "--t-grid", "1:4:7", "--theta-grid", "1:4:7"]));
    assert_eq!(v["separable"], true);
    assert_eq!(fidsamp(&["separability", "--model", "normal-mean", "--sigma0", "1", "--n-obs", "2"]).status.code(), Some(2));
}
