use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use blowuplab::config::{parse_config, parse_config_for, Command as Cmd, Setting};
use blowuplab::output::MANIFEST_SCHEMA;
use serde_json::Value;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowuplab")).args(args).current_dir(dir).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn assert_valid_manifest(dir: &Path) -> Value {
    let schema: Value = serde_json::from_str(MANIFEST_SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let m = json(&dir.join("manifest.json"));
    if let Err(errors) = compiled.validate(&m) {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("manifest invalid: {msgs:?}");
    }
    let manifests = fs::read_dir(dir).unwrap().filter(|e| e.as_ref().unwrap().file_name() == "manifest.json").count();
    assert_eq!(manifests, 1);
    // every listed artifact exists with the recorded size
    for a in m["artifacts"].as_array().unwrap() {
        let len = fs::metadata(dir.join(a["name"].as_str().unwrap())).unwrap().len();
        assert_eq!(len, a["bytes"].as_u64().unwrap());
    }
    m
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn minimal_config_gets_defaults() {
    let cfg = parse_config("command = \"match\"\nq = 0.5\nJ = 1\n").unwrap();
    assert_eq!(cfg.command, Cmd::Match);
    assert_eq!((cfg.n, cfg.t, cfg.seed), (5, 1.0, 0));
    assert_eq!(cfg.settings["case"], Setting::Text("II".into()));
    assert!(matches!(cfg.settings["d_j"], Setting::Float(d) if d > 0.0));
}

#[test]
fn malformed_number_names_the_key() {
    let err = parse_config("command = \"match\"\nq = \"0.5x\"\nJ = 1\n").unwrap_err();
    assert_eq!(err.key.as_deref(), Some("q"));
    assert_eq!(err.line, Some(2));
    assert!(err.to_string().contains("`q`"));
    // a bare malformed value is a syntax error on its line
    let err = parse_config("command = \"match\"\nJ = 1\nq = 0.5x\n").unwrap_err();
    assert_eq!(err.line, Some(3));
}

#[test]
fn duplicate_key_is_rejected() {
    let err = parse_config("command = \"match\"\nq = 0.5\nq = 0.25\nJ = 1\n").unwrap_err();
    assert!(err.message.contains("duplicate"), "{err}");
    assert_eq!(err.line, Some(3));
}

#[test]
fn strict_keys() {
    let err = parse_config("command = \"match\"\nq = 0.5\nJ = 1\nnodes = 10\n").unwrap_err();
    assert_eq!(err.key.as_deref(), Some("nodes"));
    let err = parse_config("command = \"match\"\nq = 0.5\nJ = 1\n[extra]\nx = 1\n").unwrap_err();
    assert_eq!(err.key.as_deref(), Some("extra"));
    let err = parse_config_for("command = \"match\"\nq = 0.5\nJ = 1\n", Some(Cmd::Corrections)).unwrap_err();
    assert_eq!(err.key.as_deref(), Some("command"));
    assert!(parse_config("q = 0.5\nJ = 1\n").is_err());
    assert!(parse_config("command = \"simulate\"\nq = 0.5\nJ = 1\nscheme = \"euler\"\n").is_err());
    assert!(parse_config("command = \"match\"\nJ = 1\n").is_err());
}

#[test]
fn presets_resolve_and_explicit_keys_win() {
    let cfg = parse_config("command = \"simulate\"\nq = 0.5\nJ = 1\npreset = \"blowup\"\nhorizon = 0.5\n").unwrap();
    assert_eq!(cfg.float("amplitude"), 10.0);
    assert_eq!(cfg.float("horizon"), 0.5);
    assert_eq!(cfg.text("mode"), "ode");
}

#[test]
fn match_reports_gamma_j() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "q = 0.5\nJ = 1\n");
    let out = bin(&["match", "--config", &cfg, "--out", "m", "--quiet"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let dir = tmp.path().join("m");
    let m = assert_valid_manifest(&dir);
    assert_eq!(m["status"], "ok");
    assert_eq!(m["config"]["n"], 5);
    let r = json(&dir.join("match.json"));
    let g = (-3.0 + 65f64.sqrt()) / 2.0;
    let big = r["Gamma_J"].as_f64().unwrap();
    assert!((big - (8.0 - g) / (4.0 - g)).abs() < 1e-12);
    assert!((big - 3.723174).abs() < 2e-5);
}

#[test]
fn simulate_extinction_preset() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "command = \"simulate\"\nq = 0.5\nJ = 1\npreset = \"extinction\"\n");
    let out = bin(&["--config", &cfg, "--out", "s"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("extinct"));
    let dir = tmp.path().join("s");
    assert_valid_manifest(&dir);
    let o = json(&dir.join("outcome.json"));
    assert_eq!(o["verdict"], "extinct");
    let t = o["event_time"].as_f64().unwrap();
    let b = &o["extinction_bounds"];
    assert!(t > b["lower"].as_f64().unwrap() && t < b["upper"].as_f64().unwrap());
    let trace = fs::read_to_string(dir.join("trace.csv")).unwrap();
    assert!(trace.starts_with("t,sup,dt\n0.0,0.5,"));
}

#[test]
fn domain_error_exits_one_with_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "q = 1.2\nJ = 1\n");
    let out = bin(&["corrections", "--config", &cfg, "--out", "d"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert_eq!(err["error"], "domain");
    let m = assert_valid_manifest(&tmp.path().join("d"));
    assert_eq!(m["status"], "error");
    assert_eq!(m["error"]["code"], "domain");
}

#[test]
fn parse_error_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "q = \"0.5x\"\nJ = 1\n");
    let out = bin(&["match", "--config", &cfg, "--out", "p"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(out.stderr.trim_ascii()).unwrap();
    assert_eq!(err["error"], "parse");
    assert!(err["message"].as_str().unwrap().contains("`q`"));
    assert!(!tmp.path().join("p").exists());
    let out = bin(&["nonsense"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_cap_is_validated() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "q = 0.5\nJ = 1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_blowuplab"))
        .args(["corrections", "--config", &cfg, "--out", "c", "--quiet"])
        .current_dir(tmp.path())
        .env("BLOWUPLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_blowuplab"))
        .args(["corrections", "--config", &cfg, "--out", "c", "--quiet"])
        .current_dir(tmp.path())
        .env("BLOWUPLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for (command, text) in [
        ("corrections", "q = 0.5\nJ = 1\n"),
        ("ansatz", "q = 0.5\nJ = 1\nsamples = 60\n"),
        ("spectrum-selfsimilar", "q = 0.5\nJ = 1\nmodes = 3\n"),
        ("simulate", "q = 0.5\nJ = 1\npreset = \"blowup\"\n"),
    ] {
        let cfg = write_config(tmp.path(), text);
        let run = |threads: &str| {
            let out = Command::new(env!("CARGO_BIN_EXE_blowuplab"))
                .args([command, "--config", &cfg, "--out", "r", "--seed", "7", "--quiet"])
                .current_dir(tmp.path())
                .env("BLOWUPLAB_THREADS", threads)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0), "{command}");
            dir_bytes(&tmp.path().join("r"))
        };
        let first = run("1");
        let second = run("4");
        assert_eq!(first, second, "{command}");
        fs::remove_dir_all(tmp.path().join("r")).unwrap();
    }
}

#[test]
fn every_command_writes_its_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "q = 0.5\nJ = 1\n");
    let expected: [(&str, &[&str]); 6] = [
        ("profiles", &["profiles.json", "q.csv", "t1.csv", "u.csv"]),
        ("spectrum-ball", &["ball_eigenpairs.csv", "ball_sweep.json"]),
        ("spectrum-selfsimilar", &["selfsimilar.json", "selfsimilar_modes.csv"]),
        ("corrections", &["corrections.json"]),
        ("ansatz", &["ansatz.csv", "ansatz.json"]),
        ("simulate", &["outcome.json", "trace.csv"]),
    ];
    for (command, files) in expected {
        let out = bin(&[command, "--config", &cfg, "--out", command, "--quiet"], tmp.path());
        assert_eq!(out.status.code(), Some(0), "{command}: {}", String::from_utf8_lossy(&out.stderr));
        let dir = tmp.path().join(command);
        let m = assert_valid_manifest(&dir);
        let listed: Vec<&str> = m["artifacts"].as_array().unwrap().iter().map(|a| a["name"].as_str().unwrap()).collect();
        assert_eq!(listed, files, "{command}");
    }
    let csv = fs::read_to_string(tmp.path().join("ansatz/ansatz.csv")).unwrap();
    assert!(csv.starts_with("r,t,u,residual,region_tag\n"));
    let tags: std::collections::BTreeSet<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(tags.into_iter().collect::<Vec<_>>(), ["inner", "outer", "selfsimilar", "semiinner"]);
}

#[test]
fn verify_passes_on_default_parameters() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin(&["verify", "--out", "v", "--seed", "3"], tmp.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l.starts_with("[PASS]")));
    let dir = tmp.path().join("v");
    let m = assert_valid_manifest(&dir);
    assert_eq!(m["config"]["seed"], 3);
    let v = json(&dir.join("verify.json"));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(v["passed"], true);
    // verify is pinned to the default parameters
    let cfg = write_config(tmp.path(), "q = 0.25\n");
    let out = bin(&["verify", "--config", &cfg, "--out", "w"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
}
